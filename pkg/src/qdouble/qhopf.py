"""Sparse tensor algebra over a finite-dimensional algebra, and exhaustive
verifiers for quasi-bialgebra, antipode and quasitriangularity axioms.

Conventions
-----------
* Quasi-coassociativity: (id (x) Delta) Delta(h) = phi ((Delta (x) id) Delta(h)) phi^-1.
* Pentagon: (1 (x) phi)((id (x) Delta (x) id) phi)(phi (x) 1)
  = ((id (x) id (x) Delta) phi)((Delta (x) id (x) id) phi).
* Leg notation: ``legs(t, "312")`` puts leg 1 of ``t`` in slot 3, leg 2 in
  slot 1 and leg 3 in slot 2, so phi_312 = phi2 (x) phi3 (x) phi1; missing
  slots (``legs(R, "13")``) are filled with the unit.
* Quasitriangularity:
  (Delta (x) id) R = phi_312 R_13 phi_132^-1 R_23 phi,
  (id (x) Delta) R = phi_231^-1 R_13 phi_213 R_12 phi^-1,
  R Delta(h) = Delta^op(h) R.

All identities are multilinear, so every check runs over basis elements only.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .cyclotomic import CycScalar, common_order, embed, scalar_from_json, scalar_to_json
from .linalg import SingularError, rank, solve_reachable
from .report import Report


class StructureError(ValueError):
    pass


Key = tuple


class TensorElement:
    """Element of A^(x)k as a sparse map from index tuples to nonzero scalars."""

    __slots__ = ("arity", "dim", "terms", "order")

    def __init__(self, arity: int, dim: int, terms: Mapping[Key, CycScalar], order: int):
        if arity < 1:
            raise StructureError("arity must be >= 1")
        clean = {}
        for k, v in terms.items():
            if len(k) != arity or any(not 0 <= i < dim for i in k):
                raise StructureError(f"bad index {k} for arity {arity}, dim {dim}")
            if v.order != order:
                v = embed(v, order)
            if not v.is_zero():
                clean[tuple(k)] = v
        self.arity, self.dim, self.terms, self.order = arity, dim, clean, order

    @classmethod
    def _trusted(cls, arity, dim, terms, order) -> "TensorElement":
        self = object.__new__(cls)
        self.arity, self.dim, self.terms, self.order = arity, dim, terms, order
        return self

    @classmethod
    def basis(cls, dim: int, idx: Sequence[int], order: int, coeff: Optional[CycScalar] = None) -> "TensorElement":
        return cls(len(idx), dim, {tuple(idx): coeff or CycScalar.one(order)}, order)

    @classmethod
    def vector(cls, dim: int, coeffs: Mapping[int, CycScalar], order: int) -> "TensorElement":
        return cls(1, dim, {(i,): v for i, v in coeffs.items()}, order)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.arity == other.arity and self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        raise TypeError("TensorElement is not hashable")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        _same_shape(self, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
        return TensorElement._trusted(self.arity, self.dim, _drop_zeros(out), self.order)

    def __neg__(self) -> "TensorElement":
        return TensorElement._trusted(self.arity, self.dim, {k: -v for k, v in self.terms.items()}, self.order)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c: CycScalar) -> "TensorElement":
        return TensorElement._trusted(self.arity, self.dim, _drop_zeros({k: v * c for k, v in self.terms.items()}), self.order)

    def items(self):
        return sorted(self.terms.items())

    def coeff(self, *idx: int) -> CycScalar:
        return self.terms.get(tuple(idx), CycScalar.zero(self.order))

    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [{"idx": list(k), "val": scalar_to_json_compact(v)} for k, v in self.items()]

    @classmethod
    def from_json(cls, arity: int, dim: int, obj: list, order: int) -> "TensorElement":
        return cls(arity, dim, {tuple(t["idx"]): scalar_from_json(t["val"], order) for t in obj}, order)

    def __repr__(self) -> str:
        return f"TensorElement(arity={self.arity}, dim={self.dim}, terms={len(self.terms)})"


def _same_shape(a: TensorElement, b: TensorElement) -> None:
    if a.arity != b.arity or a.dim != b.dim:
        raise StructureError(f"shape mismatch: arity {a.arity}/{b.arity}, dim {a.dim}/{b.dim}")
    if a.order != b.order:
        raise StructureError(f"scalar order mismatch {a.order}/{b.order}")


def _drop_zeros(d: dict) -> dict:
    return {k: v for k, v in d.items() if not v.is_zero()}


def scalar_to_json_compact(v: CycScalar):
    if v.is_rational() and v.den == 1:
        return v.num[0]
    return scalar_to_json(v)


def first_difference(lhs: TensorElement, rhs: TensorElement) -> Optional[dict]:
    """Witness for lhs != rhs: the smallest index tuple where they differ."""
    keys = sorted(set(lhs.terms) | set(rhs.terms))
    zero = CycScalar.zero(lhs.order)
    for k in keys:
        a, b = lhs.terms.get(k, zero), rhs.terms.get(k, zero)
        if a != b:
            return {"index": list(k), "lhs": a, "rhs": b}
    return None


# -- algebras ------------------------------------------------------------------


class AlgebraData:
    """Structure constants: ``mul[i][j]`` is a tuple of ``(k, c)`` with e_i e_j = sum c e_k."""

    def __init__(self, dim: int, mul: Sequence[Sequence[Mapping[int, CycScalar]]], unit: Mapping[int, CycScalar], order: int):
        self.dim = dim
        self.order = order
        if len(mul) != dim or any(len(row) != dim for row in mul):
            raise StructureError("multiplication table has the wrong shape")
        self.mul = tuple(
            tuple(tuple(sorted((k, _emb(v, order)) for k, v in entry.items() if not v.is_zero())) for entry in row)
            for row in mul
        )
        self.unit = TensorElement.vector(dim, {k: v for k, v in unit.items()}, order)
        self._keys()

    def _keys(self) -> None:
        # components of the bipartite graph {left i} -- {right j}, edge iff e_i e_j != 0;
        # e_i e_j != 0 implies rkey[i] == lkey[j], which drives the sparse joins below
        d = self.dim
        parent = list(range(2 * d))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(d):
            for j in range(d):
                if self.mul[i][j]:
                    ra, rb = find(i), find(d + j)
                    if ra != rb:
                        parent[ra] = rb
        self.rkey = tuple(find(i) for i in range(d))
        self.lkey = tuple(find(d + j) for j in range(d))
        ldiv: list[dict[int, list[int]]] = [defaultdict(list) for _ in range(d)]
        for i in range(d):
            for j in range(d):
                for k, _ in self.mul[i][j]:
                    ldiv[i][k].append(j)
        self.left_div = tuple(dict(x) for x in ldiv)

    def is_monomial(self) -> bool:
        return all(len(e) <= 1 for row in self.mul for e in row)

    def one(self) -> CycScalar:
        return CycScalar.one(self.order)

    def basis(self, i: int) -> TensorElement:
        return TensorElement.basis(self.dim, (i,), self.order)

    def product(self, u: TensorElement, v: TensorElement) -> TensorElement:
        return tensor_mul(u, v, self)

    def to_json(self) -> dict:
        d = self.dim
        zero = 0
        mul = []
        for i in range(d):
            row = []
            for j in range(d):
                vec = [zero] * d
                for k, c in self.mul[i][j]:
                    vec[k] = scalar_to_json_compact(c)
                row.append(vec)
            mul.append(row)
        unit = [0] * d
        for (k,), c in self.unit.terms.items():
            unit[k] = scalar_to_json_compact(c)
        return {"dim": d, "order": self.order, "mul": mul, "unit": unit}

    @classmethod
    def from_json(cls, obj: dict, order: Optional[int] = None) -> "AlgebraData":
        d = int(obj["dim"])
        order = int(order or obj.get("order", 1))
        mul = [
            [{k: scalar_from_json(c, order) for k, c in enumerate(obj["mul"][i][j]) if c != 0} for j in range(d)]
            for i in range(d)
        ]
        unit = {k: scalar_from_json(c, order) for k, c in enumerate(obj["unit"]) if c != 0}
        return cls(d, mul, unit, order)


def _emb(v: CycScalar, order: int) -> CycScalar:
    return v if v.order == order else embed(v, order)


def tensor_mul(a: TensorElement, b: TensorElement, alg: AlgebraData) -> TensorElement:
    """Componentwise product in A^(x)k, joined on the algebra's block keys."""
    _same_shape(a, b)
    if a.dim != alg.dim:
        raise StructureError("tensor dimension does not match the algebra")
    mul, rkey, lkey = alg.mul, alg.rkey, alg.lkey
    index: dict = defaultdict(list)
    for J, cb in b.terms.items():
        index[tuple(lkey[j] for j in J)].append((J, cb))
    out: dict = {}
    for I, ca in a.terms.items():
        bucket = index.get(tuple(rkey[i] for i in I))
        if not bucket:
            continue
        for J, cb in bucket:
            parts = [mul[i][j] for i, j in zip(I, J)]
            if not all(parts):
                continue
            c0 = ca * cb
            if all(len(p) == 1 for p in parts):
                K = tuple(p[0][0] for p in parts)
                c = c0
                for p in parts:
                    c = c * p[0][1]
                prev = out.get(K)
                out[K] = c if prev is None else prev + c
            else:
                for combo in itertools.product(*parts):
                    K = tuple(k for k, _ in combo)
                    c = c0
                    for _, v in combo:
                        c = c * v
                    prev = out.get(K)
                    out[K] = c if prev is None else prev + c
    return TensorElement._trusted(a.arity, a.dim, _drop_zeros(out), a.order)


def tensor_prod(*factors: TensorElement, alg: AlgebraData) -> TensorElement:
    out = factors[0]
    for f in factors[1:]:
        out = tensor_mul(out, f, alg)
    return out


def unit_tensor(alg: AlgebraData, k: int) -> TensorElement:
    terms = {}
    legs = list(alg.unit.terms.items())
    for combo in itertools.product(legs, repeat=k):
        c = alg.one()
        for _, v in combo:
            c = c * v
        terms[tuple(i for (i,), _ in combo)] = c
    return TensorElement._trusted(k, alg.dim, _drop_zeros(terms), alg.order)


def outer(a: TensorElement, b: TensorElement) -> TensorElement:
    """a (x) b with the legs of b appended after those of a."""
    terms = {I + J: ca * cb for I, ca in a.terms.items() for J, cb in b.terms.items()}
    return TensorElement._trusted(a.arity + b.arity, a.dim, _drop_zeros(terms), a.order)


def legs(t: TensorElement, slots, arity: int, alg: AlgebraData) -> TensorElement:
    """Place leg i of t in slot ``slots[i]`` (1-based) of an arity-``arity`` tensor; unit elsewhere."""
    slots = [int(s) - 1 for s in slots]
    if len(slots) != t.arity or len(set(slots)) != len(slots) or any(not 0 <= s < arity for s in slots):
        raise StructureError(f"bad leg placement {slots} for arity {arity}")
    free = [s for s in range(arity) if s not in slots]
    unit = list(alg.unit.terms.items())
    terms: dict = {}
    for I, c in t.terms.items():
        for combo in itertools.product(unit, repeat=len(free)):
            K = [0] * arity
            for leg, s in enumerate(slots):
                K[s] = I[leg]
            cc = c
            for s, ((u,), v) in zip(free, combo):
                K[s] = u
                cc = cc * v
            K = tuple(K)
            prev = terms.get(K)
            terms[K] = cc if prev is None else prev + cc
    return TensorElement._trusted(arity, t.dim, _drop_zeros(terms), t.order)


def tensor_inverse(a: TensorElement, alg: AlgebraData) -> TensorElement:
    """Two-sided inverse in A^(x)k by exact elimination on x -> a x.

    Only the incidence block reachable from unit^(x)k is assembled.
    """
    k = a.arity
    one = unit_tensor(alg, k)
    mul, ldiv, rkey, lkey = alg.mul, alg.left_div, alg.rkey, alg.lkey
    by_rkey: dict = defaultdict(list)
    for I, c in a.terms.items():
        by_rkey[tuple(rkey[i] for i in I)].append((I, c))

    def column(J):
        return tensor_mul(a, TensorElement._trusted(k, a.dim, {J: alg.one()}, a.order), alg).terms

    def hitting(R):
        seen = set()
        for I in a.terms:
            choices = [ldiv[i].get(r, ()) for i, r in zip(I, R)]
            if all(choices):
                for J in itertools.product(*choices):
                    if J not in seen:
                        seen.add(J)
                        yield J

    try:
        sol = solve_reachable(column, hitting, one.terms)
    except SingularError as exc:
        raise SingularError(f"tensor is not invertible: {exc}") from None
    x = TensorElement._trusted(k, a.dim, _drop_zeros(sol), a.order)
    if tensor_mul(a, x, alg) != one:
        raise SingularError("tensor is not invertible")
    if tensor_mul(x, a, alg) != one:
        raise StructureError("right inverse is not a left inverse")
    return x


# -- quasi-Hopf data ---------------------------------------------------------------


@dataclass(eq=False)
class QuasiHopfData:
    algebra: AlgebraData
    coproduct: tuple  # of TensorElement (arity 2), one per basis element
    counit: tuple  # of CycScalar
    associator: TensorElement
    antipode: Optional[tuple] = None  # of TensorElement (arity 1): S(e_i)
    alpha: Optional[TensorElement] = None
    beta: Optional[TensorElement] = None
    rmatrix: Optional[TensorElement] = None
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def order(self) -> int:
        return self.algebra.order

    @cached_property
    def associator_inverse(self) -> TensorElement:
        return tensor_inverse(self.associator, self.algebra)

    def has_antipode(self) -> bool:
        return self.antipode is not None and self.alpha is not None and self.beta is not None

    def replace(self, **changes) -> "QuasiHopfData":
        return replace(self, **changes)

    def to_json(self) -> dict:
        out = {"algebra": self.algebra.to_json()}
        out["coproduct"] = [t.to_json() for t in self.coproduct]
        out["counit"] = [scalar_to_json_compact(c) for c in self.counit]
        out["associator"] = self.associator.to_json()
        if self.antipode is not None:
            d = self.dim
            mat = [[0] * d for _ in range(d)]
            for i, s in enumerate(self.antipode):
                for (k,), c in s.terms.items():
                    mat[k][i] = scalar_to_json_compact(c)
            out["antipode"] = mat
        if self.alpha is not None:
            out["alpha"] = _vec_json(self.alpha)
        if self.beta is not None:
            out["beta"] = _vec_json(self.beta)
        if self.rmatrix is not None:
            out["rmatrix"] = self.rmatrix.to_json()
        if self.meta:
            out["provenance"] = self.meta
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "QuasiHopfData":
        alg = AlgebraData.from_json(obj["algebra"])
        d, n = alg.dim, alg.order
        cop = tuple(TensorElement.from_json(2, d, t, n) for t in obj["coproduct"])
        if len(cop) != d:
            raise StructureError("coproduct table has the wrong length")
        counit = tuple(scalar_from_json(c, n) for c in obj["counit"])
        assoc = TensorElement.from_json(3, d, obj["associator"], n)
        antipode = alpha = beta = rmat = None
        if "antipode" in obj:
            mat = obj["antipode"]
            antipode = tuple(
                TensorElement.vector(d, {k: scalar_from_json(mat[k][i], n) for k in range(d) if mat[k][i] != 0}, n)
                for i in range(d)
            )
        if "alpha" in obj:
            alpha = _vec_from_json(obj["alpha"], d, n)
        if "beta" in obj:
            beta = _vec_from_json(obj["beta"], d, n)
        if "rmatrix" in obj:
            rmat = TensorElement.from_json(2, d, obj["rmatrix"], n)
        return cls(alg, cop, counit, assoc, antipode, alpha, beta, rmat, dict(obj.get("provenance", {})))


def _vec_json(v: TensorElement) -> list:
    out = [0] * v.dim
    for (k,), c in v.terms.items():
        out[k] = scalar_to_json_compact(c)
    return out


def _vec_from_json(obj: list, d: int, n: int) -> TensorElement:
    return TensorElement.vector(d, {k: scalar_from_json(c, n) for k, c in enumerate(obj) if c != 0}, n)


def coproduct_extend(H: QuasiHopfData, leg: int, a: TensorElement) -> TensorElement:
    """Apply Delta to leg ``leg`` (0-based); arity grows by one."""
    if not 0 <= leg < a.arity:
        raise StructureError(f"leg {leg} out of range for arity {a.arity}")
    out: dict = {}
    for I, c in a.terms.items():
        for (p, q), v in H.coproduct[I[leg]].terms.items():
            K = I[:leg] + (p, q) + I[leg + 1 :]
            cv = c * v
            prev = out.get(K)
            out[K] = cv if prev is None else prev + cv
    return TensorElement._trusted(a.arity + 1, a.dim, _drop_zeros(out), a.order)


def counit_extend(H: QuasiHopfData, leg: int, a: TensorElement) -> TensorElement:
    """Apply epsilon to leg ``leg``; arity drops by one (must stay >= 1)."""
    if not 0 <= leg < a.arity or a.arity < 2:
        raise StructureError(f"cannot apply the counit to leg {leg} of an arity-{a.arity} tensor")
    out: dict = {}
    for I, c in a.terms.items():
        e = H.counit[I[leg]]
        if e.is_zero():
            continue
        K = I[:leg] + I[leg + 1 :]
        cv = c * e
        prev = out.get(K)
        out[K] = cv if prev is None else prev + cv
    return TensorElement._trusted(a.arity - 1, a.dim, _drop_zeros(out), a.order)


def apply_on_leg(images: Sequence[TensorElement], leg: int, a: TensorElement) -> TensorElement:
    """Apply the linear map e_i -> images[i] (arity-1 tensors) to one leg."""
    out: dict = {}
    for I, c in a.terms.items():
        for (k,), v in images[I[leg]].terms.items():
            K = I[:leg] + (k,) + I[leg + 1 :]
            cv = c * v
            prev = out.get(K)
            out[K] = cv if prev is None else prev + cv
    return TensorElement._trusted(a.arity, a.dim, _drop_zeros(out), a.order)


def flip(a: TensorElement) -> TensorElement:
    return TensorElement._trusted(2, a.dim, {(j, i): c for (i, j), c in a.terms.items()}, a.order)


def multiply_out(a: TensorElement, alg: AlgebraData, inserts: Mapping[int, TensorElement] = None) -> TensorElement:
    """Sum over terms of the ordered product of the legs, with fixed elements
    inserted after the given legs: ``inserts={0: beta, 1: alpha}`` computes
    sum a1 beta a2 alpha a3."""
    inserts = inserts or {}
    total: dict = {}
    for I, c in a.terms.items():
        acc = TensorElement._trusted(1, a.dim, {(I[0],): c}, a.order)
        if 0 in inserts:
            acc = tensor_mul(acc, inserts[0], alg)
        for leg in range(1, a.arity):
            if not acc.terms:
                break
            acc = tensor_mul(acc, TensorElement._trusted(1, a.dim, {(I[leg],): alg.one()}, a.order), alg)
            if leg in inserts:
                acc = tensor_mul(acc, inserts[leg], alg)
        for k, v in acc.terms.items():
            prev = total.get(k)
            total[k] = v if prev is None else prev + v
    return TensorElement._trusted(1, a.dim, _drop_zeros(total), a.order)


# -- verifiers ---------------------------------------------------------------------


def verify_algebra(alg: AlgebraData, only=None) -> Report:
    report = Report("algebra", subject=f"dim {alg.dim}")
    d = alg.dim
    if report.wants("associativity", only):
        witness = None
        basis = [alg.basis(i) for i in range(d)]
        prods = [[tensor_mul(basis[i], basis[j], alg) for j in range(d)] for i in range(d)]
        for i in range(d):
            for j in range(d):
                ij = prods[i][j]
                for k in range(d):
                    jk = prods[j][k]
                    if not ij.terms and not jk.terms:
                        continue
                    lhs = tensor_mul(ij, basis[k], alg)
                    rhs = tensor_mul(basis[i], jk, alg)
                    if lhs != rhs:
                        witness = {"basis": [i, j, k], **first_difference(lhs, rhs)}
                        break
                if witness:
                    break
            if witness:
                break
        report.add("associativity", witness is None, witness)
    if report.wants("unit", only):
        witness = None
        for i in range(d):
            b = alg.basis(i)
            for side, val in (("left", tensor_mul(alg.unit, b, alg)), ("right", tensor_mul(b, alg.unit, alg))):
                if val != b:
                    witness = {"basis": i, "side": side, **first_difference(val, b)}
                    break
            if witness:
                break
        report.add("unit", witness is None, witness)
    return report


def verify_quasibialgebra(H: QuasiHopfData, only=None) -> Report:
    alg = H.algebra
    d = alg.dim
    report = Report("quasi-bialgebra", subject=H.meta.get("label", f"dim {d}"))
    report.extend(verify_algebra(alg, only=None if only is None else {c.split("/", 1)[1] for c in only if c.startswith("algebra/")}), prefix="algebra/")
    basis = [alg.basis(i) for i in range(d)]

    if report.wants("coproduct_homomorphism", only):
        witness = None
        one2 = unit_tensor(alg, 2)
        delta_unit = _linear(H.coproduct, alg.unit, 2, alg)
        if delta_unit != one2:
            witness = {"basis": "unit", **first_difference(delta_unit, one2)}
        for i in range(d):
            if witness:
                break
            for j in range(d):
                prod = tensor_mul(basis[i], basis[j], alg)
                lhs = _linear(H.coproduct, prod, 2, alg)
                rhs = tensor_mul(H.coproduct[i], H.coproduct[j], alg)
                if lhs != rhs:
                    witness = {"basis": [i, j], **first_difference(lhs, rhs)}
                    break
        report.add("coproduct_homomorphism", witness is None, witness)

    if report.wants("counit_homomorphism", only):
        witness = None
        eu = _counit_of(H, alg.unit)
        if not eu.is_one():
            witness = {"basis": "unit", "value": eu}
        for i in range(d):
            if witness:
                break
            for j in range(d):
                lhs = _counit_of(H, tensor_mul(basis[i], basis[j], alg))
                rhs = H.counit[i] * H.counit[j]
                if lhs != rhs:
                    witness = {"basis": [i, j], "lhs": lhs, "rhs": rhs}
                    break
        report.add("counit_homomorphism", witness is None, witness)

    phi_inv = None
    if report.wants("associator_invertible", only) or report.wants("quasi_coassociativity", only):
        try:
            phi_inv = H.associator_inverse
            ok, witness = True, None
        except (SingularError, StructureError) as exc:
            ok, witness = False, {"error": str(exc)}
        if report.wants("associator_invertible", only):
            report.add("associator_invertible", ok, witness)

    if report.wants("quasi_coassociativity", only):
        witness = None
        if phi_inv is None:
            witness = {"error": "associator not invertible"}
        else:
            for h in range(d):
                dh = H.coproduct[h]
                left = coproduct_extend(H, 0, dh)  # (Delta (x) id) Delta h
                right = coproduct_extend(H, 1, dh)  # (id (x) Delta) Delta h
                lhs = tensor_prod(H.associator, left, phi_inv, alg=alg)
                if lhs != right:
                    witness = {"basis": h, **first_difference(lhs, right)}
                    break
        report.add("quasi_coassociativity", witness is None, witness)

    if report.wants("counit_left", only) or report.wants("counit_right", only):
        for name, leg in (("counit_left", 0), ("counit_right", 1)):
            if not report.wants(name, only):
                continue
            witness = None
            for h in range(d):
                val = counit_extend(H, leg, H.coproduct[h])
                if val != basis[h]:
                    witness = {"basis": h, **first_difference(val, basis[h])}
                    break
            report.add(name, witness is None, witness)

    if report.wants("pentagon", only):
        phi = H.associator
        lhs = tensor_prod(legs(phi, "234", 4, alg), coproduct_extend(H, 1, phi), legs(phi, "123", 4, alg), alg=alg)
        rhs = tensor_mul(coproduct_extend(H, 2, phi), coproduct_extend(H, 0, phi), alg)
        witness = first_difference(lhs, rhs)
        report.add("pentagon", witness is None, witness)

    if report.wants("associator_counit", only):
        val = counit_extend(H, 1, H.associator)
        one2 = unit_tensor(alg, 2)
        witness = first_difference(val, one2)
        report.add("associator_counit", witness is None, witness)
    return report


def _linear(images: Sequence[TensorElement], v: TensorElement, arity: int, alg: AlgebraData) -> TensorElement:
    # extend a basis map e_i -> images[i] linearly to an arity-1 element v
    out: dict = {}
    for (i,), c in v.terms.items():
        for K, w in images[i].terms.items():
            cw = c * w
            prev = out.get(K)
            out[K] = cw if prev is None else prev + cw
    return TensorElement._trusted(arity, v.dim, _drop_zeros(out), v.order)


def _counit_of(H: QuasiHopfData, v: TensorElement) -> CycScalar:
    total = CycScalar.zero(v.order)
    for (i,), c in v.terms.items():
        total = total + c * H.counit[i]
    return total


def verify_antipode(H: QuasiHopfData, only=None) -> Report:
    alg = H.algebra
    d = alg.dim
    names = [
        "antipode_left",
        "antipode_right",
        "antipode_phi",
        "antipode_phi_inverse",
        "antipode_antihomomorphism",
        "antipode_bijective",
    ]
    report = Report("antipode", subject=H.meta.get("label", f"dim {d}"))
    if not H.has_antipode():
        for n in names:
            if report.wants(n, only):
                report.skip(n, "no antipode data")
        return report
    S, alpha, beta = H.antipode, H.alpha, H.beta

    if report.wants("antipode_left", only) or report.wants("antipode_right", only):
        wl = wr = None
        for h in range(d):
            dh = H.coproduct[h]
            eps = H.counit[h]
            if wl is None:
                val = multiply_out(apply_on_leg(S, 0, dh), alg, {0: alpha})
                target = alpha.scale(eps)
                if val != target:
                    wl = {"basis": h, **first_difference(val, target)}
            if wr is None:
                val = multiply_out(apply_on_leg(S, 1, dh), alg, {0: beta})
                target = beta.scale(eps)
                if val != target:
                    wr = {"basis": h, **first_difference(val, target)}
        if report.wants("antipode_left", only):
            report.add("antipode_left", wl is None, wl)
        if report.wants("antipode_right", only):
            report.add("antipode_right", wr is None, wr)

    one = alg.unit
    if report.wants("antipode_phi", only):
        val = multiply_out(apply_on_leg(S, 1, H.associator), alg, {0: beta, 1: alpha})
        report.add("antipode_phi", val == one, first_difference(val, one))

    if report.wants("antipode_phi_inverse", only):
        try:
            phi_inv = H.associator_inverse
            t = apply_on_leg(S, 2, apply_on_leg(S, 0, phi_inv))
            val = multiply_out(t, alg, {0: alpha, 1: beta})
            report.add("antipode_phi_inverse", val == one, first_difference(val, one))
        except (SingularError, StructureError) as exc:
            report.add("antipode_phi_inverse", False, {"error": str(exc)})

    if report.wants("antipode_antihomomorphism", only):
        witness = None
        basis = [alg.basis(i) for i in range(d)]
        for i in range(d):
            for j in range(d):
                lhs = _linear(S, tensor_mul(basis[i], basis[j], alg), 1, alg)
                rhs = tensor_mul(S[j], S[i], alg)
                if lhs != rhs:
                    witness = {"basis": [i, j], **first_difference(lhs, rhs)}
                    break
            if witness:
                break
        report.add("antipode_antihomomorphism", witness is None, witness)

    if report.wants("antipode_bijective", only):
        r = rank({i: {k: c for (k,), c in S[i].terms.items()} for i in range(d)})
        report.add("antipode_bijective", r == d, None if r == d else {"rank": r, "dim": d})
    return report


def qqua_sides(H: QuasiHopfData):
    """Both sides of the two quasitriangularity equations."""
    alg = H.algebra
    R, phi, phi_inv = H.rmatrix, H.associator, H.associator_inverse
    L = lambda t, s: legs(t, s, 3, alg)  # noqa: E731
    left_lhs = coproduct_extend(H, 0, R)
    left_rhs = tensor_prod(L(phi, "312"), L(R, "13"), L(phi_inv, "132"), L(R, "23"), phi, alg=alg)
    right_lhs = coproduct_extend(H, 1, R)
    right_rhs = tensor_prod(L(phi_inv, "231"), L(R, "13"), L(phi, "213"), L(R, "12"), phi_inv, alg=alg)
    return (left_lhs, left_rhs), (right_lhs, right_rhs)


def verify_quasitriangular(H: QuasiHopfData, only=None) -> Report:
    alg = H.algebra
    d = alg.dim
    names = ["rmatrix_invertible", "qqua_left", "qqua_right", "intertwining", "quasi_yang_baxter"]
    report = Report("quasitriangular", subject=H.meta.get("label", f"dim {d}"))
    if H.rmatrix is None:
        for n in names:
            if report.wants(n, only):
                report.skip(n, "no R-matrix")
        return report
    R = H.rmatrix

    if report.wants("rmatrix_invertible", only):
        try:
            tensor_inverse(R, alg)
            report.add("rmatrix_invertible", True)
        except (SingularError, StructureError) as exc:
            report.add("rmatrix_invertible", False, {"error": str(exc)})

    try:
        phi_inv = H.associator_inverse
    except (SingularError, StructureError) as exc:
        for n in names[1:]:
            if report.wants(n, only):
                report.add(n, False, {"error": f"associator not invertible: {exc}"})
        return report

    if report.wants("qqua_left", only) or report.wants("qqua_right", only):
        (ll, lr), (rl, rr) = qqua_sides(H)
        if report.wants("qqua_left", only):
            report.add("qqua_left", ll == lr, first_difference(ll, lr))
        if report.wants("qqua_right", only):
            report.add("qqua_right", rl == rr, first_difference(rl, rr))

    if report.wants("intertwining", only):
        witness = None
        for h in range(d):
            lhs = tensor_mul(R, H.coproduct[h], alg)
            rhs = tensor_mul(flip(H.coproduct[h]), R, alg)
            if lhs != rhs:
                witness = {"basis": h, **first_difference(lhs, rhs)}
                break
        report.add("intertwining", witness is None, witness)

    if report.wants("quasi_yang_baxter", only):
        phi = H.associator
        L = lambda t, s: legs(t, s, 3, alg)  # noqa: E731
        lhs = tensor_prod(L(R, "12"), L(phi, "312"), L(R, "13"), L(phi_inv, "132"), L(R, "23"), phi, alg=alg)
        rhs = tensor_prod(L(phi, "321"), L(R, "23"), L(phi_inv, "231"), L(R, "13"), L(phi, "213"), L(R, "12"), alg=alg)
        report.add("quasi_yang_baxter", lhs == rhs, first_difference(lhs, rhs))
    return report


SUITES = {
    "bialgebra": verify_quasibialgebra,
    "antipode": verify_antipode,
    "quasitriangular": verify_quasitriangular,
}


def verify_suite(H: QuasiHopfData, suite: str = "all", only=None) -> Report:
    """Run one verifier suite (or all) with clause names prefixed by the suite."""
    names = list(SUITES) if suite == "all" else [suite]
    report = Report(f"verify:{suite}", subject=H.meta.get("label", f"dim {H.dim}"))
    for name in names:
        sub_only = None if only is None else {c.split("/", 1)[1] for c in only if c.startswith(name + "/")}
        if sub_only is not None and not sub_only:
            continue
        report.extend(SUITES[name](H, only=sub_only), prefix=name + "/")
    return report


# -- small reference algebras --------------------------------------------------------


def group_algebra(group, order: int = 1) -> QuasiHopfData:
    """kG as an ordinary Hopf algebra: Delta x = x (x) x, S x = x^-1, trivial associator."""
    n = group.size
    one = CycScalar.one(order)
    mul = [[{group.mul_table[a][b]: one} for b in range(n)] for a in range(n)]
    alg = AlgebraData(n, mul, {group.identity: one}, order)
    cop = tuple(TensorElement(2, n, {(x, x): one}, order) for x in range(n))
    counit = tuple(one for _ in range(n))
    e = group.identity
    assoc = TensorElement(3, n, {(e, e, e): one}, order)
    S = tuple(TensorElement.vector(n, {group.inv_table[x]: one}, order) for x in range(n))
    unit = alg.unit
    R = TensorElement(2, n, {(e, e): one}, order)
    return QuasiHopfData(alg, cop, counit, assoc, S, unit, unit, R, {"label": f"k{group.label}"})
