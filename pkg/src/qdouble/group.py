"""Finite groups given by multiplication tables.

Elements are indices ``0..n-1`` with the identity at index 0; every higher
module addresses elements by index only.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .report import Report

MAX_CATALOG_ORDER = 24


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul_table: tuple[tuple[int, ...], ...]
    label: str = "G"
    identity: int = 0
    inv_table: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = len(self.mul_table)
        if n == 0:
            raise GroupError("empty group")
        if any(len(row) != n for row in self.mul_table):
            raise GroupError("multiplication table is not square")
        if not self.inv_table:
            inv = []
            for a in range(n):
                row = self.mul_table[a]
                inv.append(next((b for b in range(n) if row[b] == self.identity), -1))
            object.__setattr__(self, "inv_table", tuple(inv))

    @property
    def size(self) -> int:
        return len(self.mul_table)

    def __len__(self) -> int:
        return len(self.mul_table)

    @property
    def elements(self) -> range:
        return range(len(self.mul_table))

    def _check(self, *idx: int) -> None:
        n = len(self.mul_table)
        for a in idx:
            if not 0 <= a < n:
                raise IndexError(f"element {a} out of range for group of order {n}")

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        self._check(a)
        return self.inv_table[a]

    def conj(self, x: int, s: int) -> int:
        """x^-1 s x."""
        self._check(x, s)
        t = self.mul_table
        return t[t[self.inv_table[x]][s]][x]

    def order_of(self, a: int) -> int:
        k, b = 1, a
        while b != self.identity:
            b = self.mul_table[b][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.mul_table
        return all(t[a][b] == t[b][a] for a in self.elements for b in self.elements)

    def power(self, a: int, k: int) -> int:
        b = self.identity
        if k < 0:
            a, k = self.inv_table[a], -k
        for _ in range(k):
            b = self.mul_table[b][a]
        return b

    @classmethod
    def from_table(cls, table, label: str = "G") -> "FiniteGroup":
        return cls(tuple(tuple(int(c) for c in row) for row in table), label=label)

    def to_json(self) -> dict:
        return {"label": self.label, "size": self.size, "mul": [list(r) for r in self.mul_table]}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteGroup":
        table = obj["mul"]
        if "size" in obj and int(obj["size"]) != len(table):
            raise GroupError(f"declared size {obj['size']} but table has {len(table)} rows")
        return cls.from_table(table, label=obj.get("label", "G"))

    def same_as(self, other: "FiniteGroup") -> bool:
        return self is other or self.mul_table == other.mul_table


# -- catalog constructors --------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError(f"cyclic group needs n >= 1, got {n}")
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), label=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; index i + n*j encodes r^i s^j."""
    if n < 1:
        raise GroupError(f"dihedral group needs n >= 1, got {n}")

    def mul(a, b):
        i, j = a % n, a // n
        k, l = b % n, b // n
        return (i + (k if j == 0 else -k)) % n + n * ((j + l) % 2)

    size = 2 * n
    return FiniteGroup(tuple(tuple(mul(a, b) for b in range(size)) for a in range(size)), label=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    """Permutations of n points in lexicographic order; (ab)(i) = a(b(i))."""
    if n < 1:
        raise GroupError(f"symmetric group needs n >= 1, got {n}")
    if n > 4:
        raise GroupError(f"symmetric({n}) exceeds the catalog bound of {MAX_CATALOG_ORDER} elements")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(index[tuple(a[b[i]] for i in range(n))] for b in perms) for a in perms)
    return FiniteGroup(table, label=f"S{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Index a*|h| + b encodes the pair (a, b)."""
    m = h.size
    size = g.size * m
    gt, ht = g.mul_table, h.mul_table
    table = tuple(
        tuple(gt[a // m][b // m] * m + ht[a % m][b % m] for b in range(size)) for a in range(size)
    )
    return FiniteGroup(table, label=f"{g.label}x{h.label}")


def elements_of_order(g: FiniteGroup, k: int) -> list[int]:
    return [a for a in g.elements if g.order_of(a) == k]


_ATOM = re.compile(r"^(zn|z|cyclic|d|dihedral|s|symmetric):(\d+)$")


def parse_group(desc: str) -> FiniteGroup:
    """Build a group from a descriptor such as ``zn:4``, ``s:3``, ``d:4`` or ``prod(zn:2,zn:2)``."""
    desc = desc.strip().replace(" ", "")
    if desc.startswith("prod(") and desc.endswith(")"):
        inner = desc[5:-1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return direct_product(parse_group(inner[:i]), parse_group(inner[i + 1 :]))
        raise GroupError(f"malformed product descriptor {desc!r}")
    m = _ATOM.match(desc)
    if not m:
        raise GroupError(f"unknown group descriptor {desc!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind in ("zn", "z", "cyclic"):
        return cyclic(n)
    if kind in ("d", "dihedral"):
        return dihedral(n)
    return symmetric(n)


def make_group(spec) -> FiniteGroup:
    """Catalog constructor; ``spec`` is a descriptor string or a tuple like ("cyclic", 4)."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        g = parse_group(spec)
    else:
        kind, *args = spec
        if kind == "direct_product":
            g = direct_product(make_group(args[0]), make_group(args[1]))
        else:
            g = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}[kind](*args)
    if g.size > MAX_CATALOG_ORDER:
        raise GroupError(f"group of order {g.size} exceeds the catalog bound {MAX_CATALOG_ORDER}")
    return g


def verify_group(g: FiniteGroup, only=None) -> Report:
    report = Report("group", subject=g.label)
    n = g.size
    t = g.mul_table
    e = g.identity

    if report.wants("closure", only):
        bad = next(((a, b) for a in range(n) for b in range(n) if not 0 <= t[a][b] < n), None)
        report.add("closure", bad is None, None if bad is None else {"pair": list(bad)})
        if bad is not None:
            return report

    if report.wants("associativity", only):
        witness = None
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                witness = {"triple": [a, b, c], "lhs": t[t[a][b]][c], "rhs": t[a][t[b][c]]}
                break
        report.add("associativity", witness is None, witness)

    if report.wants("identity", only):
        bad = next((a for a in range(n) if t[e][a] != a or t[a][e] != a), None)
        report.add("identity", bad is None, None if bad is None else {"element": bad})

    if report.wants("inverses", only):
        bad = next(
            (a for a in range(n) if g.inv_table[a] < 0 or t[g.inv_table[a]][a] != e or t[a][g.inv_table[a]] != e),
            None,
        )
        report.add("inverses", bad is None, None if bad is None else {"element": bad})

    if report.wants("latin_square", only):
        full = set(range(n))
        bad = next((("row", a) for a in range(n) if set(t[a]) != full), None)
        if bad is None:
            bad = next((("column", b) for b in range(n) if {t[a][b] for a in range(n)} != full), None)
        report.add("latin_square", bad is None, None if bad is None else {bad[0]: bad[1]})
    return report
