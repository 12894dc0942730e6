"""Group cochains: 3-cocycles, coboundary twisting, brute-force cohomology
comparison and the adjoint 2-cocycle chi induced by a 3-cocycle.

Conventions
-----------
* 3-cocycle identity (pentagon):
  phi(y,s,t) phi(x,ys,t) phi(x,y,s) = phi(x,y,st) phi(xy,s,t), with phi(x,e,y) = 1.
* Differential of a 2-cochain:
  (d beta)(x,y,z) = beta(y,z) beta(x,yz) / (beta(xy,z) beta(x,y)).
* chi(x,y)(s) = phi(x,y,y^-1 x^-1 s x y) phi(s,x,y) / phi(x,x^-1 s x,y).
* The 2-cocycle identity of chi is checked for chi21(x,y) = chi(y,x) as a
  right-handed cocycle on G^op, with products taken in G^op and the right
  adjoint action (f <| s)(t) = f(s^-1 t s).  Written in G this is
  chi(s,y)(t) chi(sy,x)(t) = chi(y,x)(s^-1 t s) chi(s,yx)(t).
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from math import gcd
from pathlib import Path
from typing import Callable, Optional, Sequence

from .cyclotomic import CycScalar, common_order, embed, root_of_unity, scalar_from_json, scalar_to_json
from .group import FiniteGroup, cyclic, make_group, parse_group
from .report import Report


class CochainError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def _lift(table, order: int):
    if isinstance(table, CycScalar):
        return table if table.order == order else embed(table, order)
    return tuple(_lift(t, order) for t in table)


def _flatten(table):
    if isinstance(table, CycScalar):
        yield table
    else:
        for t in table:
            yield from _flatten(t)


class _Table:
    """Shared plumbing for cochain tables of a fixed scalar order."""

    rank = 0

    def __init__(self, group: FiniteGroup, table, order: Optional[int] = None):
        n = group.size
        values = list(_flatten(table))
        if len(values) != n**self.rank:
            raise CochainError(f"table has {len(values)} entries, expected {n ** self.rank}")
        self.order = order or common_order(values)
        self.group = group
        self.table = _lift(table, self.order)

    def values(self):
        return _flatten(self.table)

    def is_invertible(self) -> bool:
        return all(not v.is_zero() for v in self.values())

    def one(self) -> CycScalar:
        return CycScalar.one(self.order)

    def values_json(self):
        def enc(t):
            return scalar_to_json(t) if isinstance(t, CycScalar) else [enc(s) for s in t]

        return enc(self.table)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "order": self.order, "values": self.values_json()}


class Cochain3(_Table):
    """A scalar function phi(x,y,z) on G^3."""

    rank = 3

    def __call__(self, x: int, y: int, z: int) -> CycScalar:
        return self.table[x][y][z]

    @classmethod
    def from_function(cls, group: FiniteGroup, fn: Callable[[int, int, int], CycScalar]) -> "Cochain3":
        r = group.elements
        return cls(group, tuple(tuple(tuple(fn(x, y, z) for z in r) for y in r) for x in r))

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "Cochain3":
        one = CycScalar.one(1)
        return cls.from_function(group, lambda x, y, z: one)

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values())

    def with_entry(self, x: int, y: int, z: int, value: CycScalar) -> "Cochain3":
        """Copy with one entry replaced (mutation testing)."""
        order = self.order * value.order // gcd(self.order, value.order)
        value = embed(value, order) if value.order != order else value
        return Cochain3.from_function(
            self.group, lambda a, b, c: value if (a, b, c) == (x, y, z) else _emb(self(a, b, c), order)
        )

    def inverse(self) -> "Cochain3":
        return Cochain3.from_function(self.group, lambda x, y, z: self(x, y, z).inverse())

    @classmethod
    def from_json(cls, obj: dict, group: Optional[FiniteGroup] = None) -> "Cochain3":
        if group is None:
            group = _group_from_json(obj["group"])
        order = obj.get("order")
        raw = obj["values"]
        n = group.size
        vals = [[[scalar_from_json(raw[x][y][z]) for z in range(n)] for y in range(n)] for x in range(n)]
        order = order or common_order(v for plane in vals for row in plane for v in row)
        return cls(group, vals, order=int(order))


class Cochain2(_Table):
    rank = 2

    def __call__(self, x: int, y: int) -> CycScalar:
        return self.table[x][y]

    @classmethod
    def from_function(cls, group: FiniteGroup, fn: Callable[[int, int], CycScalar]) -> "Cochain2":
        r = group.elements
        return cls(group, tuple(tuple(fn(x, y) for y in r) for x in r))

    def is_normalized(self) -> bool:
        e = self.group.identity
        return all(self(x, e).is_one() and self(e, x).is_one() for x in self.group.elements)


class AdCochain2(_Table):
    """chi(x,y)(s): a 2-cochain with values in functions on G; indexed [x][y][s]."""

    rank = 3

    def __call__(self, x: int, y: int, s: int) -> CycScalar:
        return self.table[x][y][s]

    @classmethod
    def from_function(cls, group: FiniteGroup, fn: Callable[[int, int, int], CycScalar]) -> "AdCochain2":
        r = group.elements
        return cls(group, tuple(tuple(tuple(fn(x, y, s) for s in r) for y in r) for x in r))

    def with_entry(self, x: int, y: int, s: int, value: CycScalar) -> "AdCochain2":
        return AdCochain2.from_function(
            self.group, lambda a, b, c: _emb(value, self.order) if (a, b, c) == (x, y, s) else self(a, b, c)
        )


def _emb(v: CycScalar, order: int) -> CycScalar:
    return v if v.order == order else embed(v, order)


def _group_from_json(obj) -> FiniteGroup:
    if isinstance(obj, str):
        return make_group(obj)
    return FiniteGroup.from_json(obj)


# -- verification ------------------------------------------------------------


def verify_3cocycle(phi: Cochain3, only=None) -> Report:
    g = phi.group
    n, t, e = g.size, g.mul_table, g.identity
    tab = phi.table
    report = Report("3-cocycle", subject=g.label)

    if report.wants("invertible", only):
        bad = next((xyz for xyz in itertools.product(range(n), repeat=3) if tab[xyz[0]][xyz[1]][xyz[2]].is_zero()), None)
        report.add("invertible", bad is None, None if bad is None else {"triple": list(bad)})
        if bad is not None:
            return report

    if report.wants("normalized", only):
        bad = next(((x, y) for x in range(n) for y in range(n) if not tab[x][e][y].is_one()), None)
        report.add("normalized", bad is None, None if bad is None else {"triple": [bad[0], e, bad[1]], "value": tab[bad[0]][e][bad[1]]})

    if report.wants("pentagon", only):
        witness = None
        for x, y, s, u in itertools.product(range(n), repeat=4):
            lhs = tab[y][s][u] * tab[x][t[y][s]][u] * tab[x][y][s]
            rhs = tab[x][y][t[s][u]] * tab[t[x][y]][s][u]
            if lhs != rhs:
                witness = {"quadruple": [x, y, s, u], "lhs": lhs, "rhs": rhs}
                break
        report.add("pentagon", witness is None, witness)

    if report.wants("full_normalization", only):
        bad = None
        for a, b in itertools.product(range(n), repeat=2):
            if not tab[e][a][b].is_one():
                bad = [e, a, b]
                break
            if not tab[a][b][e].is_one():
                bad = [a, b, e]
                break
        report.add("full_normalization", bad is None, None if bad is None else {"triple": bad})
    return report


def standard_cocycle_cyclic(n: int, p: int) -> Cochain3:
    """phi_p(a,b,c) = zeta_n^(p a floor((b+c)/n)) on Z_n, at the smallest exact order."""
    g = cyclic(n)
    p %= n
    k = gcd(n, p)
    m = n // k  # p == 0 gives m == 1
    q = p // k
    phi = Cochain3.from_function(g, lambda a, b, c: root_of_unity(m, q * a * ((b + c) // n)))
    report = verify_3cocycle(phi)
    if not report.ok:
        raise CochainError(f"internal error: standard cocycle on Z{n} with p={p} failed\n{report.summary()}")
    return phi


def coboundary(beta: Cochain2) -> Cochain3:
    if not beta.is_normalized():
        raise CochainError("coboundary needs a normalized 2-cochain")
    g = beta.group
    t = g.mul_table
    b = beta.table
    return Cochain3.from_function(
        g, lambda x, y, z: b[y][z] * b[x][t[y][z]] / (b[t[x][y]][z] * b[x][y])
    )


def twist(phi: Cochain3, beta: Cochain2) -> Cochain3:
    if not phi.group.same_as(beta.group):
        raise CochainError("twist needs cochains on the same group")
    d = coboundary(beta)
    m = phi.order * d.order // gcd(phi.order, d.order)
    return Cochain3.from_function(phi.group, lambda x, y, z: _emb(phi(x, y, z), m) * _emb(d(x, y, z), m))


def random_cochain2(group: FiniteGroup, root_order: int, rng: random.Random) -> Cochain2:
    """A random normalized 2-cochain with values in the root_order-th roots of unity."""
    e = group.identity
    one = root_of_unity(root_order, 0)
    return Cochain2.from_function(
        group, lambda x, y: one if e in (x, y) else root_of_unity(root_order, rng.randrange(root_order))
    )


def pullback(phi: Cochain3, group: FiniteGroup, hom: Sequence[int]) -> Cochain3:
    """phi(h(x), h(y), h(z)) along a homomorphism h: group -> phi.group given as an index list."""
    if len(hom) != group.size:
        raise CochainError("homomorphism table has the wrong length")
    return Cochain3.from_function(group, lambda x, y, z: phi(hom[x], hom[y], hom[z]))


@dataclass
class CohomologyResult:
    cohomologous: bool
    witness: Optional[Cochain2]
    candidates: int


def are_cohomologous_bruteforce(phi1: Cochain3, phi2: Cochain3, root_order: int, budget: int = 10**6) -> CohomologyResult:
    """Search normalized mu_N-valued 2-cochains beta with phi2 = phi1 * d(beta).

    A negative answer is definitive only for the given value bound N.
    """
    g = phi1.group
    if not g.same_as(phi2.group):
        raise CochainError("cochains live on different groups")
    n, e, t = g.size, g.identity, g.mul_table
    free = [(x, y) for x in range(n) for y in range(n) if x != e and y != e]
    total = root_order ** len(free)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the enumeration budget {budget}")
    m = 1
    for o in (phi1.order, phi2.order, root_order):
        m = m * o // gcd(m, o)
    target = [[[_emb(phi2(x, y, z), m) / _emb(phi1(x, y, z), m) for z in range(n)] for y in range(n)] for x in range(n)]
    roots = [embed(root_of_unity(root_order, k), m) for k in range(root_order)]
    one = CycScalar.one(m)
    checked = 0
    for exps in itertools.product(range(root_order), repeat=len(free)):
        checked += 1
        b = [[one] * n for _ in range(n)]
        for (x, y), k in zip(free, exps):
            b[x][y] = roots[k]
        ok = True
        for x, y, z in itertools.product(range(n), repeat=3):
            if b[y][z] * b[x][t[y][z]] != target[x][y][z] * b[t[x][y]][z] * b[x][y]:
                ok = False
                break
        if ok:
            return CohomologyResult(True, Cochain2(g, tuple(tuple(r) for r in b)), checked)
    return CohomologyResult(False, None, checked)


def chi_from_phi(phi: Cochain3) -> AdCochain2:
    g = phi.group
    t, inv = g.mul_table, g.inv_table
    tab = phi.table

    def chi(x, y, s):
        xy = t[x][y]
        s_xy = t[t[inv[xy]][s]][xy]  # (xy)^-1 s (xy)
        s_x = t[t[inv[x]][s]][x]
        return tab[x][y][s_xy] * tab[s][x][y] / tab[x][s_x][y]

    return AdCochain2.from_function(g, chi)


def verify_chi_2cocycle(chi: AdCochain2, only=None) -> Report:
    g = chi.group
    n, t, inv, e = g.size, g.mul_table, g.inv_table, g.identity
    c = chi.table
    report = Report("chi 2-cocycle", subject=g.label)

    if report.wants("normalized", only):
        bad = None
        for x, y in itertools.product(range(n), repeat=2):
            for s in range(n):
                if not c[x][e][s].is_one():
                    bad = ("chi(x,e)", x, e, s)
                elif not c[e][x][s].is_one():
                    bad = ("chi(e,y)", e, x, s)
                if bad:
                    break
            if not bad and not c[x][y][e].is_one():
                bad = ("chi(x,y)(e)", x, y, e)
            if bad:
                break
        report.add("normalized", bad is None, None if bad is None else {"kind": bad[0], "x": bad[1], "y": bad[2], "s": bad[3]})

    if report.wants("cocycle", only):
        witness = None
        for x, y, s, u in itertools.product(range(n), repeat=4):
            # chi21(x,y) <| s * chi21(x.y, s) = chi21(y,s) chi21(x, y.s), products in G^op, evaluated at u
            u_s = t[t[inv[s]][u]][s]
            lhs = c[y][x][u_s] * c[s][t[y][x]][u]
            rhs = c[s][y][u] * c[t[s][y]][x][u]
            if lhs != rhs:
                witness = {"x": x, "y": y, "s": s, "t": u, "lhs": lhs, "rhs": rhs}
                break
        report.add("cocycle", witness is None, witness)
    return report


# -- descriptors -------------------------------------------------------------


def parse_cocycle(desc: str, group: Optional[FiniteGroup] = None) -> Cochain3:
    """``trivial``, ``std:zn:N:p=P`` or a path to a cocycle JSON file."""
    desc = desc.strip()
    if desc == "trivial":
        if group is None:
            raise CochainError("the trivial cocycle needs a group")
        return Cochain3.trivial(group)
    if desc.startswith("std:"):
        parts = desc[4:].split(":")
        if len(parts) != 3 or not parts[2].startswith("p="):
            raise CochainError(f"malformed cocycle descriptor {desc!r}")
        gdesc = parts[0] + ":" + parts[1]
        g = parse_group(gdesc)
        if parts[0] not in ("zn", "z", "cyclic"):
            raise CochainError("standard cocycles exist only for cyclic groups")
        phi = standard_cocycle_cyclic(g.size, int(parts[2][2:]))
        if group is not None and not group.same_as(phi.group):
            raise CochainError(f"cocycle {desc!r} does not live on group {group.label}")
        return phi
    path = Path(desc)
    if path.suffix == ".json" or path.exists():
        obj = json.loads(path.read_text())
        phi = Cochain3.from_json(obj, group=group if "group" not in obj else None)
        if group is not None and not group.same_as(phi.group):
            raise CochainError("cocycle file is defined on a different group")
        return phi
    raise CochainError(f"unknown cocycle descriptor {desc!r}")
