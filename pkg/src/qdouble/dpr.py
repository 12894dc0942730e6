"""The twisted quantum double D^phi(G) = kG^op >|_chi k(G).

Basis element x (x) delta_s has linear index ``x*n + s``.  Two embeddings are
used throughout:

* kG -> D,   x       |-> x (x) 1 = sum_t x (x) delta_t       (written X_x)
* k(G) -> D, delta_s |-> e (x) delta_s                     (written P_s)

so that x (x) delta_s = X_x P_s, X_x X_y = X_{yx} and P_s X_x = x (x) delta_{x s x^-1}.
The element x (x) delta_s is homogeneous of degree x^-1 s x for the left regular
grading, and the R-matrix is R = sum_x X_x (x) P_x.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cochain import AdCochain2, Cochain3, chi_from_phi, verify_3cocycle
from .cyclotomic import CycScalar
from .group import FiniteGroup
from .qhopf import (
    AlgebraData,
    QuasiHopfData,
    TensorElement,
    first_difference,
    multiply_out,
    tensor_mul,
    verify_antipode,
    verify_quasibialgebra,
    verify_quasitriangular,
)
from .report import Report


class DPRError(ValueError):
    pass


ATTACHED, ABSENT, NOT_ATTEMPTED = "attached", "absent", "not attempted"


@dataclass(eq=False)
class DPRInstance:
    group: FiniteGroup
    cocycle: Cochain3
    chi: AdCochain2
    qhopf: QuasiHopfData
    antipode_status: str = NOT_ATTEMPTED
    antipode_note: str = ""
    antipode_coeffs: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.group.size

    @property
    def order(self) -> int:
        return self.qhopf.order

    def index(self, x: int, s: int) -> int:
        return x * self.n + s

    def split(self, i: int) -> tuple[int, int]:
        return divmod(i, self.n)

    def degree(self, i: int) -> int:
        """Degree of x (x) delta_s in the left regular grading: x^-1 s x."""
        x, s = divmod(i, self.n)
        return self.group.conj(x, s)

    def X(self, x: int) -> TensorElement:
        one = CycScalar.one(self.order)
        return TensorElement.vector(self.n * self.n, {self.index(x, t): one for t in range(self.n)}, self.order)

    def P(self, s: int) -> TensorElement:
        return TensorElement.basis(self.n * self.n, (self.index(self.group.identity, s),), self.order)


def coproduct_ratio(phi: Cochain3, x: int, a: int, b: int) -> CycScalar:
    """phi(x, x^-1 a x, x^-1 b x) phi(a, b, x) / phi(a, x, x^-1 b x)."""
    g = phi.group
    ax, bx = g.conj(x, a), g.conj(x, b)
    t = phi.table
    return t[x][ax][bx] * t[a][b][x] / t[a][x][bx]


def build_dpr(group: FiniteGroup, phi: Cochain3, check: bool = True, chi: Optional[AdCochain2] = None) -> DPRInstance:
    """Structure constants of D^phi(G); ``chi`` overrides the induced 2-cocycle (used by mutation tests)."""
    if not group.same_as(phi.group):
        raise DPRError("cocycle lives on a different group")
    if check:
        rep = verify_3cocycle(phi)
        if not rep.ok:
            raise DPRError(f"cocycle is not a normalized 3-cocycle: {rep.failures()[0].to_json()}")
    g = group
    n, e = g.size, g.identity
    mt, inv = g.mul_table, g.inv_table
    order = phi.order
    chi = chi_from_phi(phi) if chi is None else chi
    c = chi.table
    one = CycScalar.one(order)
    d = n * n

    mul = []
    for x in range(n):
        for s in range(n):
            row = []
            for y in range(n):
                ysy = mt[mt[y][s]][inv[y]]
                for t in range(n):
                    if t == ysy:
                        row.append({mt[y][x] * n + t: c[y][x][t]})
                    else:
                        row.append({})
            mul.append(row)
    unit = {e * n + s: one for s in range(n)}
    alg = AlgebraData(d, mul, unit, order)

    cop = []
    for x in range(n):
        for s in range(n):
            terms = {}
            for a in range(n):
                b = mt[inv[a]][s]
                terms[(x * n + a, x * n + b)] = coproduct_ratio(phi, x, a, b)
            cop.append(TensorElement(2, d, terms, order))
    zero = CycScalar.zero(order)
    counit = tuple(one if s == e else zero for x in range(n) for s in range(n))
    tab = phi.table
    assoc = TensorElement(
        3, d, {(e * n + a, e * n + b, e * n + cc): tab[a][b][cc] for a in range(n) for b in range(n) for cc in range(n)}, order
    )
    R = TensorElement(2, d, {(x * n + t, e * n + x): one for x in range(n) for t in range(n)}, order)
    meta = {"label": f"D^phi({g.label})", "group": g.label, "order": order, "cocycle_trivial": phi.is_trivial()}
    H = QuasiHopfData(alg, tuple(cop), counit, assoc, rmatrix=R, meta=meta)
    return DPRInstance(g, phi, chi, H)


def literal_rmatrix(D: DPRInstance) -> TensorElement:
    """sum_{x,s} (e (x) delta_x) (x) (x (x) delta_s): the legs of R in the other order.

    Kept for comparison only; it fails the intertwining on nonabelian groups.
    """
    one = CycScalar.one(D.order)
    n, e = D.n, D.group.identity
    return TensorElement(2, n * n, {(e * n + x, x * n + s): one for x in range(n) for s in range(n)}, D.order)


def antipode_support(D: DPRInstance, x: int, s: int) -> int:
    """Index of x^-1 (x) delta_{x^-1 s^-1 x}, the support of S(x (x) delta_s)."""
    g = D.group
    xi = g.inv(x)
    return D.index(xi, g.conj(x, g.inv(s)))


def attach_antipode(D: DPRInstance) -> DPRInstance:
    """Solve for a monomial antipode with alpha = 1 and diagonal beta.

    S(x (x) delta_s) = c(x,s) x^-1 (x) delta_{x^-1 s^-1 x}.  The left antipode
    law at s = e determines every c(x,a) term by term; the associator law then
    determines beta.  The full verifier decides whether the candidate is kept.
    """
    H = D.qhopf
    alg = H.algebra
    n, d, order = D.n, H.dim, D.order
    one = CycScalar.one(order)
    g = D.group
    e = g.identity
    alpha = alg.unit
    coeffs = {}
    # clause: sum S(h1) alpha h2 = eps(h) alpha, at h = x (x) delta_e
    for x in range(n):
        dh = H.coproduct[D.index(x, e)]
        for (i, j), r in dh.terms.items():
            _, a = D.split(i)
            prod = tensor_mul(
                tensor_mul(TensorElement.basis(d, (antipode_support(D, x, a),), order), alpha, alg),
                TensorElement.basis(d, (j,), order),
                alg,
            )
            if len(prod) != 1:
                return _absent(D, f"S(h1) alpha h2 is not monomial at x={x}, a={a}")
            (k,), m = next(iter(prod.terms.items()))
            target = alpha.terms.get((k,))
            if target is None:
                return _absent(D, f"term lands outside alpha at x={x}, a={a}")
            coeffs[(x, a)] = target / (r * m)
    S = tuple(
        TensorElement.basis(d, (antipode_support(D, x, s),), order, coeffs[(x, s)]) for x in range(n) for s in range(n)
    )
    # clause: sum phi1 beta S(phi2) alpha phi3 = 1 with beta = sum beta_a P_a
    tab = D.cocycle.table
    beta_terms = {}
    for a in range(n):
        ai = g.inv(a)
        val = tab[a][ai][a] * coeffs[(e, ai)]
        beta_terms[D.index(e, a)] = one / val
    beta = TensorElement.vector(d, beta_terms, order)
    candidate = H.replace(antipode=S, alpha=alpha, beta=beta)
    report = verify_antipode(candidate)
    if not report.ok:
        bad = report.failures()[0]
        return _absent(D, f"monomial candidate fails {bad.name}", coeffs)
    D.qhopf = candidate
    D.antipode_status = ATTACHED
    D.antipode_note = "monomial antipode, alpha = 1"
    D.antipode_coeffs = coeffs
    return D


def _absent(D: DPRInstance, note: str, coeffs=None) -> DPRInstance:
    D.antipode_status = ABSENT
    D.antipode_note = note
    D.antipode_coeffs = dict(coeffs or {})
    return D


def function_algebra(group: FiniteGroup, phi: Cochain3) -> QuasiHopfData:
    """k^phi(G): functions on G, Delta delta_s = sum_{ab=s} delta_a (x) delta_b,
    S(delta_s) = delta_{s^-1}, alpha = 1, beta = sum phi(s,s^-1,s)^-1 delta_s."""
    n, e = group.size, group.identity
    mt, inv = group.mul_table, group.inv_table
    order = phi.order
    one, zero = CycScalar.one(order), CycScalar.zero(order)
    mul = [[({i: one} if i == j else {}) for j in range(n)] for i in range(n)]
    alg = AlgebraData(n, mul, {s: one for s in range(n)}, order)
    cop = tuple(TensorElement(2, n, {(a, mt[inv[a]][s]): one for a in range(n)}, order) for s in range(n))
    counit = tuple(one if s == e else zero for s in range(n))
    tab = phi.table
    assoc = TensorElement(3, n, {(a, b, c): tab[a][b][c] for a in range(n) for b in range(n) for c in range(n)}, order)
    S = tuple(TensorElement.basis(n, (inv[s],), order) for s in range(n))
    beta = TensorElement.vector(n, {s: one / tab[s][inv[s]][s] for s in range(n)}, order)
    return QuasiHopfData(alg, cop, counit, assoc, S, alg.unit, beta, None, {"label": f"k^phi({group.label})"})


def embed_function_tensor(D: DPRInstance, t: TensorElement) -> TensorElement:
    """Push a tensor over k(G) into D along delta_s -> P_s."""
    e = D.group.identity
    return TensorElement(t.arity, D.qhopf.dim, {tuple(D.index(e, s) for s in k): v for k, v in t.terms.items()}, D.order)


def verify_dpr(D: DPRInstance, only=None) -> Report:
    H = D.qhopf
    report = Report("dpr", subject=f"{D.group.label}, order {D.order}")

    def sub(prefix):
        if only is None:
            return None
        return {c[len(prefix) :] for c in only if c.startswith(prefix)}

    for prefix, fn in (
        ("bialgebra/", verify_quasibialgebra),
        ("quasitriangular/", verify_quasitriangular),
        ("antipode/", verify_antipode),
    ):
        o = sub(prefix)
        if o is not None and not o:
            continue
        report.extend(fn(H, only=o), prefix=prefix)

    K = function_algebra(D.group, D.cocycle)
    n, e = D.n, D.group.identity
    if report.wants("subalgebra_embedding", only):
        witness = None
        for s in range(n):
            Ps = D.P(s)
            for t in range(n):
                lhs = tensor_mul(Ps, D.P(t), H.algebra)
                rhs = embed_function_tensor(D, tensor_mul(K.algebra.basis(s), K.algebra.basis(t), K.algebra))
                if lhs != rhs:
                    witness = {"product": [s, t], **first_difference(lhs, rhs)}
                    break
            if witness:
                break
            lhs = H.coproduct[D.index(e, s)]
            rhs = embed_function_tensor(D, K.coproduct[s])
            if lhs != rhs:
                witness = {"coproduct": s, **first_difference(lhs, rhs)}
                break
            if H.counit[D.index(e, s)] != K.counit[s]:
                witness = {"counit": s, "lhs": H.counit[D.index(e, s)], "rhs": K.counit[s]}
                break
        report.add("subalgebra_embedding", witness is None, witness)
    if report.wants("associator_embedding", only):
        rhs = embed_function_tensor(D, K.associator)
        report.add("associator_embedding", H.associator == rhs, first_difference(H.associator, rhs))
    return report
