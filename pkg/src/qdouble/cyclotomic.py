"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(d-1) with d = phi(N),
as a tuple of integer numerators over one positive common denominator.
Everything is reduced modulo the N-th cyclotomic polynomial, so two
elements of the same order are equal iff their representations agree.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

__all__ = [
    "CycScalar",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity",
    "embed",
    "inv",
    "scalar_from_json",
    "scalar_to_json",
    "common_order",
]


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(n, k) == 1)


def _mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic; little-endian coefficients
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Little-endian integer coefficients of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError(f"invalid order {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reducer(n: int) -> tuple[int, ...]:
    # x^d = -sum(low[j] x^j)  mod Phi_n
    return cyclotomic_poly(n)[:-1]


@lru_cache(maxsize=None)
def _trace_weights(n: int) -> tuple[Fraction, ...]:
    # normalized trace of z^k is the Ramanujan sum c_n(k) / phi(n); invariant under embedding
    d = euler_phi(n)
    out = []
    for k in range(d):
        g = gcd(n, k)
        m = n // g
        out.append(Fraction(_mobius(m) * d, euler_phi(m) * d))
    return tuple(out)


def _reduce(poly: list[int], n: int) -> list[int]:
    low = _reducer(n)
    d = len(low)
    for i in range(len(poly) - 1, d - 1, -1):
        c = poly[i]
        if c:
            base = i - d
            for j, lj in enumerate(low):
                if lj:
                    poly[base + j] -= c * lj
    del poly[d:]
    return poly


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num, den = [-c for c in num], -den
    if den != 1:
        g = den
        for c in num:
            if c:
                g = gcd(g, c)
                if g == 1:
                    break
        if not any(num):
            g = den
        if g != 1:
            num = [c // g for c in num]
            den //= g
    return tuple(num), den


class CycScalar:
    """An element of Q(zeta_order). Immutable."""

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, coeffs: Sequence[Union[int, Fraction]] = (), den: int = 1):
        if order < 1:
            raise ValueError(f"invalid order {order}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        fr = [Fraction(c) / den for c in coeffs]
        common = 1
        for c in fr:
            common = common * c.denominator // gcd(common, c.denominator)
        ints = [int(c * common) for c in fr]
        poly = _reduce(ints + [0] * max(0, euler_phi(order) - len(ints)), order)
        num, d = _normalize(poly, common)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", d)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _make(cls, order: int, num: tuple[int, ...], den: int) -> "CycScalar":
        # trusted constructor: num already reduced and normalized
        self = object.__new__(cls)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)
        return self

    def __setattr__(self, key, value):
        raise AttributeError("CycScalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "CycScalar":
        return cls._make(order, (0,) * euler_phi(order), 1)

    @classmethod
    def one(cls, order: int) -> "CycScalar":
        return cls.from_int(order, 1)

    @classmethod
    def from_int(cls, order: int, value: Union[int, Fraction]) -> "CycScalar":
        if order < 1:
            raise ValueError(f"invalid order {order}")
        value = Fraction(value)
        d = euler_phi(order)
        return cls._make(order, (value.numerator,) + (0,) * (d - 1), value.denominator)

    # -- queries -----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return len(self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def __bool__(self) -> bool:
        return any(self.num)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.order != self.order:
                raise ValueError(f"mismatched orders {self.order} and {other.order}; embed first")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.from_int(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            num = [a + b for a, b in zip(self.num, other.num)]
            den = self.den
        else:
            num = [a * other.den + b * self.den for a, b in zip(self.num, other.num)]
            den = self.den * other.den
        return CycScalar._make(self.order, *_normalize(num, den))

    __radd__ = __add__

    def __neg__(self) -> "CycScalar":
        return CycScalar._make(self.order, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, CycScalar) or other.order != self.order:
            other = self._coerce(other)
            if other is NotImplemented:
                return other
        a, b = self.num, other.num
        if other.den == 1 and b[0] == 1 and not any(b[1:]):
            return self
        if self.den == 1 and a[0] == 1 and not any(a[1:]):
            return other
        d = len(a)
        if d == 1:
            return CycScalar._make(self.order, *_normalize([a[0] * b[0]], self.den * other.den))
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        _reduce(prod, self.order)
        return CycScalar._make(self.order, *_normalize(prod, self.den * other.den))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        return inv(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * inv(other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * inv(self)

    def __pow__(self, k: int) -> "CycScalar":
        if k < 0:
            return inv(self) ** (-k)
        result = CycScalar.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycScalar):
            if other.order == self.order:
                return self.den == other.den and self.num == other.num
            m = self.order * other.order // gcd(self.order, other.order)
            return embed(self, m) == embed(other, m)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(Fraction(self.num[0], self.den))
            else:
                w = _trace_weights(self.order)
                h = hash(("cyc", sum(c * wk for c, wk in zip(self.num, w)) / self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycScalar({self.order}, {Fraction(self.num[0], self.den)})"
        return f"CycScalar({self.order}, {self.num}, den={self.den})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return body if self.is_rational() else f"{body} [z=zeta_{self.order}]"


@lru_cache(maxsize=4096)
def root_of_unity(n: int, k: int) -> CycScalar:
    """zeta_n ** k, reduced modulo Phi_n."""
    if n < 1:
        raise ValueError(f"invalid order {n}")
    k %= n
    d = euler_phi(n)
    poly = [0] * max(d, k + 1)
    poly[k] = 1
    _reduce(poly, n)
    return CycScalar._make(n, tuple(poly), 1)


def inv(a: CycScalar) -> CycScalar:
    """Multiplicative inverse via the extended Euclidean algorithm against Phi_N."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in a cyclotomic field")
    n = a.order
    if a.degree == 1:
        return CycScalar._make(n, *_normalize([a.den], a.num[0]))
    # work over Q[x]; invariant s*a == r (mod Phi)
    r0 = [Fraction(c) for c in cyclotomic_poly(n)]
    r1 = [Fraction(c) for c in a.num]
    s0: list[Fraction] = [Fraction(0)]
    s1: list[Fraction] = [Fraction(1)]
    _trim(r1)
    while len(r1) > 1 or r1[0] == 0:
        q, rem = _polydivmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _polysub(s0, _polymul(q, s1))
    c = r1[0]
    coeffs = [x / c * a.den for x in s1]
    return CycScalar(n, coeffs)


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _polymul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
    return _trim(out)


def _polysub(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    return _trim([Fraction(x) for x in out])


def _polydivmod(p: list[Fraction], q: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    p = list(p)
    _trim(q)
    if len(p) < len(q):
        return [Fraction(0)], _trim(p)
    out = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[-1]
    for i in range(len(out) - 1, -1, -1):
        c = p[i + len(q) - 1] / lead
        out[i] = c
        if c:
            for j, qj in enumerate(q):
                p[i + j] -= c * qj
    rem = _trim(p[: len(q) - 1] or [Fraction(0)])
    return _trim(out), rem


def embed(a: CycScalar, m: int) -> CycScalar:
    """Image of a in Q(zeta_m) under zeta_N -> zeta_m^(m/N)."""
    n = a.order
    if m < 1 or m % n:
        raise ValueError(f"cannot embed order {n} into order {m}")
    if m == n:
        return a
    step = m // n
    poly = [0] * euler_phi(m)
    for k, c in enumerate(a.num):
        if c:
            for j, rj in enumerate(root_of_unity(m, k * step).num):
                poly[j] += c * rj
    return CycScalar._make(m, *_normalize(poly, a.den))


def common_order(values: Iterable[CycScalar]) -> int:
    m = 1
    for v in values:
        m = m * v.order // gcd(m, v.order)
    return m


# -- JSON -----------------------------------------------------------------


def scalar_to_json(a: CycScalar) -> dict:
    coeffs = a.coeffs
    return {
        "order": a.order,
        "num": [c.numerator for c in coeffs],
        "den": [c.denominator for c in coeffs],
    }


def scalar_from_json(obj, order: int | None = None) -> CycScalar:
    """Decode a scalar; integers, {"root": [N, k]} and the full form are accepted.

    With ``order`` given, the result is embedded into Q(zeta_order).
    """
    if isinstance(obj, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(obj, int):
        val = CycScalar.from_int(order or 1, obj)
    elif isinstance(obj, dict) and "root" in obj:
        n, k = obj["root"]
        val = root_of_unity(int(n), int(k))
    elif isinstance(obj, dict) and "order" in obj:
        n = int(obj["order"])
        num = obj["num"]
        den = obj.get("den", [1] * len(num))
        if len(num) != len(den):
            raise ValueError("num and den arrays differ in length")
        val = CycScalar(n, [Fraction(int(p), int(q)) for p, q in zip(num, den)])
    else:
        raise ValueError(f"not a scalar: {obj!r}")
    if order is not None and val.order != order:
        val = embed(val, order)
    return val
