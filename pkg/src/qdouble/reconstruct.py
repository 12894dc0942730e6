"""The general double relations, instantiated on D^phi(G) with H = k^phi(G).

H has basis e_a = delta_a and H* = kG has the dual basis f^a = a.  The H*
coproduct is dual to the product of H and the H* product is dual to the
coproduct of H; both are computed from H's structure constants, so nothing
below assumes that f^a is group-like.  Inclusions into D:

    f^a |-> X_a = a (x) 1,     e_a |-> P_a = e (x) delta_a.

Each relation is evaluated as an exact identity in D or D (x) D for every
pair of basis elements.  Pairings against associator legs are contracted
first, which keeps the sums over phi, phi' and phi^-1 small.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .cyclotomic import CycScalar
from .dpr import DPRInstance, function_algebra
from .qhopf import (
    QuasiHopfData,
    TensorElement,
    first_difference,
    outer,
    tensor_inverse,
    tensor_mul,
    unit_tensor,
)
from .report import Report


@dataclass(eq=False)
class PairedBases:
    D: DPRInstance
    H: QuasiHopfData  # k^phi(G) with its antipode data

    @classmethod
    def of(cls, D: DPRInstance) -> "PairedBases":
        return cls(D, function_algebra(D.group, D.cocycle))

    @property
    def n(self) -> int:
        return self.H.dim

    @property
    def order(self) -> int:
        return self.D.order

    def pairing(self, c: int, v: TensorElement) -> CycScalar:
        """<f^c, v> for v in H."""
        return v.coeff(c)

    def f(self, c: int) -> TensorElement:
        return self.D.X(c)

    def h(self, v: TensorElement) -> TensorElement:
        """Embed an element of H into D."""
        e = self.D.group.identity
        return TensorElement(1, self.D.qhopf.dim, {(self.D.index(e, a),): c for (a,), c in v.terms.items()}, self.order)

    def hb(self, a: int) -> TensorElement:
        return self.D.P(a)

    def dual_vector(self, v: dict) -> TensorElement:
        """Embed sum_c v[c] f^c."""
        out = TensorElement(1, self.D.qhopf.dim, {}, self.order)
        for c, w in v.items():
            out = out + self.f(c).scale(w)
        return out

    # -- H* structure from H --------------------------------------------------

    @cached_property
    def _product_preimages(self) -> dict:
        # c -> [(a, b, coeff)] with coeff = coefficient of e_c in e_a e_b
        pre = defaultdict(list)
        alg = self.H.algebra
        for a in range(self.n):
            for b in range(self.n):
                for c, v in alg.mul[a][b]:
                    pre[c].append((a, b, v))
        return dict(pre)

    def dual_coproduct(self, c: int, k: int) -> dict:
        """Iterated coproduct of f^c into k legs: tuple -> coefficient."""
        if k == 1:
            return {(c,): CycScalar.one(self.order)}
        out: dict = {}
        for a, b, v in self._product_preimages.get(c, ()):
            for head, w in self.dual_coproduct(a, k - 1).items():
                key = head + (b,)
                out[key] = out.get(key, CycScalar.zero(self.order)) + v * w
        return {k_: v for k_, v in out.items() if not v.is_zero()}

    def dual_product(self, g: int, f: int) -> dict:
        """g f in H*: (g f)(e_a) = sum <g, e_a(1)> <f, e_a(2)>."""
        out = {}
        for a in range(self.n):
            v = self.H.coproduct[a].coeff(g, f)
            if not v.is_zero():
                out[a] = v
        return out

    # -- H-side helpers -----------------------------------------------------------

    def Hmul(self, *vs: TensorElement) -> TensorElement:
        out = vs[0]
        for v in vs[1:]:
            out = tensor_mul(out, v, self.H.algebra)
        return out

    def Hbasis(self, a: int) -> TensorElement:
        return self.H.algebra.basis(a)

    def S(self, v: TensorElement) -> TensorElement:
        out = TensorElement(1, self.n, {}, self.order)
        for (a,), c in v.terms.items():
            out = out + self.H.antipode[a].scale(c)
        return out

    @cached_property
    def phi_inv(self) -> TensorElement:
        return tensor_inverse(self.H.associator, self.H.algebra)


def _Dmul(D: DPRInstance, *xs: TensorElement) -> TensorElement:
    out = xs[0]
    for x in xs[1:]:
        out = tensor_mul(out, x, D.qhopf.algebra)
    return out


def _zero(D: DPRInstance, arity: int = 1) -> TensorElement:
    return TensorElement(arity, D.qhopf.dim, {}, D.order)


# -- (doufh) ----------------------------------------------------------------------


def doufh_sides(B: PairedBases, c: int, s: int):
    """f = f^c, h = e_s:
    f(1) phi^-(1) h <f(2), phi^-(2) beta S phi^-(3)>
      = <f(1), h(1)(1)> <f(3), phi^-(2) beta S(phi^-(3) h(2))> h(1)(2) f(2) phi^-(1)."""
    D, H = B.D, B.H
    beta = H.beta
    phi_inv = B.phi_inv
    lhs = _zero(D)
    for (c1, c2), w in B.dual_coproduct(c, 2).items():
        mid = TensorElement(1, B.n, {}, B.order)
        for (p, q, r), u in phi_inv.terms.items():
            val = B.pairing(c2, B.Hmul(B.Hbasis(q), beta, B.S(B.Hbasis(r))))
            if not val.is_zero():
                mid = mid + B.Hbasis(p).scale(u * val)
        lhs = lhs + _Dmul(D, B.f(c1), B.h(mid), B.hb(s)).scale(w)
    rhs = _zero(D)
    hh = _double_coproduct(H, s)
    for (c1, c2, c3), w in B.dual_coproduct(c, 3).items():
        for (a, b, d), hv in hh.terms.items():
            pa = B.pairing(c1, B.Hbasis(a))
            if pa.is_zero():
                continue
            mid = TensorElement(1, B.n, {}, B.order)
            for (p, q, r), u in phi_inv.terms.items():
                val = B.pairing(c3, B.Hmul(B.Hbasis(q), beta, B.S(B.Hmul(B.Hbasis(r), B.Hbasis(d)))))
                if not val.is_zero():
                    mid = mid + B.Hbasis(p).scale(u * val)
            if mid.is_zero():
                continue
            rhs = rhs + _Dmul(D, B.hb(b), B.f(c2), B.h(mid)).scale(w * hv * pa)
    return lhs, rhs


def _double_coproduct(H: QuasiHopfData, s: int) -> TensorElement:
    """(Delta (x) id) Delta e_s as an arity-3 tensor over H."""
    out: dict = {}
    for (i, j), c in H.coproduct[s].terms.items():
        for (a, b), v in H.coproduct[i].terms.items():
            k = (a, b, j)
            out[k] = out.get(k, CycScalar.zero(H.order)) + c * v
    return TensorElement(3, H.dim, out, H.order)


def verify_doufh(D: DPRInstance, only=None) -> Report:
    report = Report("doufh", subject=D.group.label)
    if report.wants("doufh", only):
        B = PairedBases.of(D)
        witness = None
        for c in range(B.n):
            for s in range(B.n):
                lhs, rhs = doufh_sides(B, c, s)
                if lhs != rhs:
                    witness = {"f": c, "h": s, **first_difference(lhs, rhs)}
                    break
            if witness:
                break
        report.add("doufh", witness is None, witness)
    return report


# -- (doufg) ------------------------------------------------------------------------


def doufg_sides(B: PairedBases, c: int, g: int, phi_prime: Optional[TensorElement] = None):
    """f = f^c, g = f^g:
    <g(1),phi1><f(2),phi3> f(1) phi2 g(2)
      = <g(1),phi'1><f(1),phi'2><g(3),phi2><f(3),phi3> phi'3 (g(2) f(2)) phi1."""
    D, H = B.D, B.H
    phi = H.associator
    phip = phi if phi_prime is None else phi_prime
    lhs = _zero(D)
    for (f1, f2), wf in B.dual_coproduct(c, 2).items():
        for (g1, g2), wg in B.dual_coproduct(g, 2).items():
            for (p, q, r), u in phi.terms.items():
                val = B.pairing(g1, B.Hbasis(p)) * B.pairing(f2, B.Hbasis(r))
                if val.is_zero():
                    continue
                lhs = lhs + _Dmul(D, B.f(f1), B.hb(q), B.f(g2)).scale(wf * wg * u * val)
    rhs = _zero(D)
    for (f1, f2, f3), wf in B.dual_coproduct(c, 3).items():
        for (g1, g2, g3), wg in B.dual_coproduct(g, 3).items():
            gf = B.dual_vector(B.dual_product(g2, f2))
            if gf.is_zero():
                continue
            for (p1, q1, r1), u1 in phip.terms.items():
                v1 = B.pairing(g1, B.Hbasis(p1)) * B.pairing(f1, B.Hbasis(q1))
                if v1.is_zero():
                    continue
                for (p, q, r), u in phi.terms.items():
                    v = B.pairing(g3, B.Hbasis(q)) * B.pairing(f3, B.Hbasis(r))
                    if v.is_zero():
                        continue
                    rhs = rhs + _Dmul(D, B.hb(r1), gf, B.hb(p)).scale(wf * wg * u1 * v1 * u * v)
    return lhs, rhs


def verify_doufg(D: DPRInstance, phi_prime: Optional[TensorElement] = None, only=None) -> Report:
    """``phi_prime`` overrides the second associator copy (a mutation hook)."""
    report = Report("doufg", subject=D.group.label)
    if report.wants("doufg", only):
        B = PairedBases.of(D)
        witness = None
        for c in range(B.n):
            for g in range(B.n):
                lhs, rhs = doufg_sides(B, c, g, phi_prime)
                if lhs != rhs:
                    witness = {"f": c, "g": g, **first_difference(lhs, rhs)}
                    break
            if witness:
                break
        report.add("doufg", witness is None, witness)
    return report


# -- (doudelta) ----------------------------------------------------------------------


def _contract(B: PairedBases, t: TensorElement, leg: int, c: int) -> TensorElement:
    """Pair leg ``leg`` of an arity-3 tensor over H with f^c; the rest embedded in D (x) D."""
    D = B.D
    e = D.group.identity
    out: dict = {}
    for k, u in t.terms.items():
        val = B.pairing(c, B.Hbasis(k[leg]))
        if val.is_zero():
            continue
        rest = tuple(D.index(e, a) for i, a in enumerate(k) if i != leg)
        out[rest] = out.get(rest, CycScalar.zero(B.order)) + u * val
    return TensorElement(2, D.qhopf.dim, out, B.order)


def doudelta_rhs(B: PairedBases, c: int, phi_prime: Optional[TensorElement] = None) -> TensorElement:
    """<f1,phi'1><f3,phi^-2><f5,phi3> phi'2 f2 phi^-1 phi1 (x) phi'3 phi^-3 f4 phi2."""
    D, H = B.D, B.H
    alg = D.qhopf.algebra
    phi = H.associator
    phip = phi if phi_prime is None else phi_prime
    out = _zero(D, 2)
    for (c1, c2, c3, c4, c5), w in B.dual_coproduct(c, 5).items():
        A = _contract(B, phip, 0, c1)  # phi'2 (x) phi'3
        Bm = _contract(B, B.phi_inv, 1, c3)  # phi^-1 (x) phi^-3
        C = _contract(B, phi, 2, c5)  # phi1 (x) phi2
        for (b1, b2), u in Bm.terms.items():
            left = tensor_mul(B.f(c2), TensorElement.basis(alg.dim, (b1,), B.order), alg)
            right = tensor_mul(TensorElement.basis(alg.dim, (b2,), B.order), B.f(c4), alg)
            Z = outer(left, right)
            out = out + tensor_mul(tensor_mul(A, Z, alg), C, alg).scale(w * u)
    return out


def verify_doudelta(D: DPRInstance, phi_prime: Optional[TensorElement] = None, only=None) -> Report:
    report = Report("doudelta", subject=D.group.label)
    B = PairedBases.of(D)
    if report.wants("doudelta", only):
        witness = None
        for c in range(B.n):
            rhs = doudelta_rhs(B, c, phi_prime)
            lhs = _coproduct_of(D, B.f(c))
            if lhs != rhs:
                witness = {"f": c, **first_difference(lhs, rhs)}
                break
        report.add("doudelta", witness is None, witness)
    if report.wants("coproduct_h", only):
        witness = None
        e = D.group.identity
        for s in range(B.n):
            lhs = D.qhopf.coproduct[D.index(e, s)]
            rhs = TensorElement(
                2, D.qhopf.dim, {(D.index(e, a), D.index(e, b)): v for (a, b), v in B.H.coproduct[s].terms.items()}, B.order
            )
            if lhs != rhs:
                witness = {"h": s, **first_difference(lhs, rhs)}
                break
        report.add("coproduct_h", witness is None, witness)
    return report


def _coproduct_of(D: DPRInstance, v: TensorElement) -> TensorElement:
    out = _zero(D, 2)
    for (i,), c in v.terms.items():
        out = out + D.qhopf.coproduct[i].scale(c)
    return out


# -- (douR), (douphi), (douact) ------------------------------------------------------------


def verify_douR_douphi_douact(D: DPRInstance, only=None) -> Report:
    from .crossedmod import CrossedModuleError, regular_module, regular_object

    report = Report("douR/douphi/douact", subject=D.group.label)
    B = PairedBases.of(D)
    alg = D.qhopf.algebra

    if report.wants("douR", only):
        expected = _zero(D, 2)
        for a in range(B.n):
            expected = expected + outer(B.f(a), B.hb(a))
        R = D.qhopf.rmatrix
        ok = R is not None and R == expected
        report.add("douR", ok, None if ok else (first_difference(R, expected) if R is not None else {"error": "no R"}))

    if report.wants("douphi", only):
        e = D.group.identity
        expected = TensorElement(
            3, alg.dim, {tuple(D.index(e, a) for a in k): v for k, v in B.H.associator.terms.items()}, B.order
        )
        report.add("douphi", D.qhopf.associator == expected, first_difference(D.qhopf.associator, expected))

    if report.wants("douact", only):
        # (f^x (x) e_t) |> v = <f^x, (e_t |> v)^(1)> (e_t |> v)^(2), with the coaction
        # v -> sum_s e_s (x) v <| s and e_t |> v = e_t(|v|) v
        try:
            V = regular_object(D.group, D.cocycle, D)
        except CrossedModuleError as exc:
            report.add("douact", False, {"error": str(exc)})
            return report
        rho = regular_module(D).rho
        witness = None
        for x in range(B.n):
            for t in range(B.n):
                i = D.index(x, t)
                for v in range(V.dim):
                    hv = {v: CycScalar.one(B.order)} if int(V.grading[v]) == t else {}
                    acted: dict = {}
                    for u, cu in hv.items():
                        for s in range(B.n):
                            p = B.pairing(x, B.Hbasis(s))
                            if p.is_zero():
                                continue
                            for r, cr in V.act(u, s).items():
                                acted[r] = acted.get(r, CycScalar.zero(B.order)) + p * cu * cr
                    acted = {r: c for r, c in acted.items() if not c.is_zero()}
                    expected = rho[i].column(v)
                    if acted != expected:
                        witness = {"basis": [x, t], "vector": v}
                        break
                if witness:
                    break
            if witness:
                break
        report.add("douact", witness is None, witness)
    return report


RELATIONS = {
    "doufh": verify_doufh,
    "doufg": verify_doufg,
    "doudelta": verify_doudelta,
    "douR_douphi_douact": verify_douR_douphi_douact,
}


def verify_relations(D: DPRInstance, relations=("all",), only=None) -> Report:
    names = list(RELATIONS) if "all" in relations else list(relations)
    report = Report("reconstruct", subject=f"{D.group.label}, order {D.order}")
    for name in names:
        if name not in RELATIONS:
            raise ValueError(f"unknown relation {name!r}")
        prefix = name + "/"
        sub = None if only is None else {c[len(prefix) :] for c in only if c.startswith(prefix)}
        if sub is not None and not sub:
            continue
        report.extend(RELATIONS[name](D, only=sub), prefix=prefix)
    return report
