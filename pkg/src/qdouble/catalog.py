"""The default (group, cocycle) catalog."""
from __future__ import annotations

from .cochain import Cochain3, parse_cocycle
from .group import FiniteGroup, make_group

DEFAULT = (
    ("zn:2", "trivial"),
    ("zn:2", "std:zn:2:p=1"),
    ("zn:3", "std:zn:3:p=1"),
    ("zn:4", "std:zn:4:p=1"),
    ("zn:4", "std:zn:4:p=2"),
    ("prod(zn:2,zn:2)", "trivial"),
    ("s:3", "trivial"),
    ("d:4", "trivial"),
)

CATALOGS = {"default": DEFAULT}


def load(group_desc: str, cocycle_desc: str) -> tuple[FiniteGroup, Cochain3]:
    g = make_group(group_desc)
    return g, parse_cocycle(cocycle_desc, g)


def entries(name: str = "default"):
    try:
        cat = CATALOGS[name]
    except KeyError:
        raise ValueError(f"unknown catalog {name!r}; known: {', '.join(CATALOGS)}") from None
    for gd, cd in cat:
        g, phi = load(gd, cd)
        yield gd, cd, g, phi
