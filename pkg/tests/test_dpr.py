import itertools

import numpy as np
import pytest

from qdouble.catalog import DEFAULT, load
from qdouble.cochain import Cochain3
from qdouble.cyclotomic import CycScalar, root_of_unity
from qdouble.dpr import (
    ABSENT,
    ATTACHED,
    NOT_ATTEMPTED,
    DPRError,
    antipode_support,
    attach_antipode,
    build_dpr,
    literal_rmatrix,
    verify_dpr,
)
from qdouble.group import cyclic, symmetric
from qdouble.qhopf import (
    TensorElement,
    coproduct_extend,
    tensor_mul,
    unit_tensor,
    verify_antipode,
    verify_quasitriangular,
)

from oracles import DenseDouble, close, cyclic_table, std_phi, to_complex


def dense(t: TensorElement):
    out = np.zeros((t.dim,) * t.arity, dtype=complex)
    for k, c in t.terms.items():
        out[k] = to_complex(c)
    return out


@pytest.fixture(scope="module")
def z2():
    return build_dpr(*load("zn:2", "std:zn:2:p=1"))


def test_untwisted_z2_product():
    D = build_dpr(*load("zn:2", "trivial"))
    alg = D.qhopf.algebra
    for x, s, y, t in itertools.product(range(2), repeat=4):
        prod = tensor_mul(alg.basis(D.index(x, s)), alg.basis(D.index(y, t)), alg)
        expected = TensorElement.basis(4, (D.index((x + y) % 2, t),), 1) if s == t else TensorElement(1, 4, {}, 1)
        assert prod == expected


def test_twisted_z2_square(z2):
    alg = z2.qhopf.algebra
    b = alg.basis(z2.index(1, 1))
    assert tensor_mul(b, b, alg) == alg.basis(z2.index(0, 1)).scale(CycScalar.from_int(2, -1))


def test_counit(z2):
    for x, s in itertools.product(range(2), repeat=2):
        assert z2.qhopf.counit[z2.index(x, s)] == CycScalar.from_int(2, 1 if s == 0 else 0)


def test_embedded_generators():
    D = build_dpr(*load("s:3", "trivial"))
    alg = D.qhopf.algebra
    g = D.group
    for x, y in itertools.product(range(6), repeat=2):
        # kG enters with the opposite product
        assert tensor_mul(D.X(x), D.X(y), alg) == D.X(g.mul(y, x))
    for x, s in itertools.product(range(6), repeat=2):
        assert tensor_mul(D.X(x), D.P(s), alg) == alg.basis(D.index(x, s))
        lhs = tensor_mul(D.P(s), D.X(x), alg)
        assert lhs == alg.basis(D.index(x, g.mul(g.mul(x, s), g.inv(x))))


@pytest.mark.parametrize("gd,cd", [("zn:2", "std:zn:2:p=1"), ("zn:3", "std:zn:3:p=1"), ("zn:4", "std:zn:4:p=1")])
def test_structure_constants_match_dense_oracle(gd, cd):
    g, phi = load(gd, cd)
    n, p = g.size, int(cd.rsplit("=", 1)[1])
    D = build_dpr(g, phi)
    O = DenseDouble(cyclic_table(n), std_phi(n, p))
    d = n * n
    M = np.zeros((d, d, d), dtype=complex)
    for i, j in itertools.product(range(d), repeat=2):
        for k, c in D.qhopf.algebra.mul[i][j]:
            M[i, j, k] = to_complex(c)
    assert close(M, O.M)
    C = np.stack([dense(t) for t in D.qhopf.coproduct])
    assert close(C, O.C)
    assert close(dense(D.qhopf.rmatrix), O.R)


def test_s3_twisted_matches_dense_oracle(s3_sign):
    g, phi = s3_sign
    D = build_dpr(g, phi)
    O = DenseDouble([list(r) for r in g.mul_table], lambda a, b, c: to_complex(phi(a, b, c)))
    d = D.qhopf.dim
    M = np.zeros((d, d, d), dtype=complex)
    for i, j in itertools.product(range(d), repeat=2):
        for k, c in D.qhopf.algebra.mul[i][j]:
            M[i, j, k] = to_complex(c)
    assert close(M, O.M)
    assert close(np.stack([dense(t) for t in D.qhopf.coproduct]), O.C)


@pytest.mark.parametrize("n,p", [(2, 1), (3, 1)])
def test_dense_oracle_axioms(n, p):
    """The floating-point oracle confirms the axioms the exact verifier checks."""
    O = DenseDouble(cyclic_table(n), std_phi(n, p))
    d = O.d
    E = np.eye(d, dtype=complex)
    Phi = np.zeros((d, d, d), dtype=complex)
    Phi[:n, :n, :n] = O.Phi[:n, :n, :n]  # e (x) delta lives at indices 0..n-1
    Phi_inv = O.inverse(Phi)
    for h in range(d):
        dh = O.cop_leg(E[h], 0)
        left = O.mul(O.mul(Phi, O.cop_leg(dh, 0)), Phi_inv)
        assert close(left, O.cop_leg(dh, 1))
    R = O.R
    u = O.unit

    def leg(t, slots):
        out = np.einsum("ab,c->abc", t, u)
        order = [None] * 3
        for i, sl in enumerate(slots):
            order[int(sl) - 1] = "ab"[i]
        free = [i for i in range(3) if order[i] is None][0]
        order[free] = "c"
        return np.einsum("abc->" + "".join(order), out)

    def perm(t, slots):
        letters = "abc"
        order = [None] * 3
        for i, sl in enumerate(slots):
            order[int(sl) - 1] = letters[i]
        return np.einsum("abc->" + "".join(order), t)

    lhs = O.cop_leg(R, 0)
    rhs = O.mul(O.mul(O.mul(O.mul(perm(Phi, "312"), leg(R, "13")), perm(Phi_inv, "132")), leg(R, "23")), Phi)
    assert close(lhs, rhs)
    lhs = O.cop_leg(R, 1)
    rhs = O.mul(O.mul(O.mul(O.mul(perm(Phi_inv, "231"), leg(R, "13")), perm(Phi, "213")), leg(R, "12")), Phi_inv)
    assert close(lhs, rhs)


@pytest.mark.parametrize("gd,cd", DEFAULT)
def test_catalog_verifies(gd, cd):
    D = attach_antipode(build_dpr(*load(gd, cd)))
    rep = verify_dpr(D)
    assert rep.ok, rep.summary()
    assert not any(c.status == "skipped" for c in rep.clauses)


def test_trivial_group():
    g = cyclic(1)
    D = attach_antipode(build_dpr(g, Cochain3.trivial(g)))
    assert D.qhopf.dim == 1
    assert verify_dpr(D).ok


@pytest.mark.parametrize("gd", ["zn:2", "prod(zn:2,zn:2)", "s:3"])
def test_degeneration_to_ordinary_double(gd):
    D = build_dpr(*load(gd, "trivial"))
    H = D.qhopf
    assert H.associator == unit_tensor(H.algebra, 3)
    for i in range(H.dim):
        dh = H.coproduct[i]
        assert coproduct_extend(H, 0, dh) == coproduct_extend(H, 1, dh)
    D = attach_antipode(D)
    g = D.group
    for x, s in itertools.product(g.elements, repeat=2):
        S = D.qhopf.antipode[D.index(x, s)]
        assert S == H.algebra.basis(D.index(g.inv(x), g.conj(x, g.inv(s))))
    assert D.qhopf.beta == H.algebra.unit == D.qhopf.alpha
    assert verify_dpr(D).ok


def test_literal_rmatrix_fails_on_s3():
    D = build_dpr(*load("s:3", "trivial"))
    rep = verify_quasitriangular(D.qhopf.replace(rmatrix=literal_rmatrix(D)))
    assert rep.status("intertwining") == "fail"
    assert rep.status("qqua_left") == "fail"
    # on an abelian group the two leg orders happen to agree in every clause
    Dz = build_dpr(*load("zn:2", "trivial"))
    assert verify_quasitriangular(Dz.qhopf.replace(rmatrix=literal_rmatrix(Dz))).ok


def test_alternative_antipode_support_fails_on_s3():
    """x^-1 (x) delta_{x^-1 s^-1 x} is the support that works; x s^-1 x^-1 does not."""
    D = build_dpr(*load("s:3", "trivial"))
    g = D.group
    H = D.qhopf
    S = tuple(
        H.algebra.basis(D.index(g.inv(x), g.mul(g.mul(x, g.inv(s)), g.inv(x))))
        for x in g.elements
        for s in g.elements
    )
    assert all(antipode_support(D, x, s) == D.index(g.inv(x), g.conj(x, g.inv(s))) for x in g.elements for s in g.elements)
    rep = verify_antipode(H.replace(antipode=S, alpha=H.algebra.unit, beta=H.algebra.unit))
    assert not rep.ok


ANTIPODE_COEFFS = {
    ("zn:2", "std:zn:2:p=1"): ({}, [1, -1]),
    ("zn:3", "std:zn:3:p=1"): ({(1, 2): ("z", 1), (2, 1): ("-1-z", None)}, None),
    ("zn:4", "std:zn:4:p=1"): (
        {(1, 2): ("z", 1), (1, 3): ("z", 2), (2, 1): ("z", 3), (2, 3): ("z", 1), (3, 1): ("z", 2), (3, 2): ("z", 3)},
        None,
    ),
}


def _expected(n, spec):
    kind, k = spec
    if kind == "z":
        return root_of_unity(n, k)
    return -CycScalar.one(n) - root_of_unity(n, 1)


@pytest.mark.parametrize("key", sorted(ANTIPODE_COEFFS))
def test_frozen_antipode_coefficients(key):
    D = attach_antipode(build_dpr(*load(*key)))
    assert D.antipode_status == ATTACHED
    n = D.n
    special, _ = ANTIPODE_COEFFS[key]
    for (x, a), c in D.antipode_coeffs.items():
        want = _expected(n, special[(x, a)]) if (x, a) in special else CycScalar.one(n)
        assert c == want, (x, a)
    beta = [D.qhopf.beta.coeff(D.index(0, a)) for a in range(n)]
    tab = D.cocycle.table
    for a in range(n):
        assert beta[a] * tab[a][(-a) % n][a] * D.antipode_coeffs[(0, (-a) % n)] == CycScalar.one(n)


def test_z2_twisted_antipode(z2):
    D = attach_antipode(build_dpr(z2.group, z2.cocycle))
    c = D.antipode_coeffs[(1, 1)]
    assert c in {root_of_unity(4, k) for k in range(4)}
    assert [D.qhopf.beta.coeff(D.index(0, a)) for a in range(2)] == [CycScalar.one(2), CycScalar.from_int(2, -1)]
    assert verify_antipode(D.qhopf).ok


def test_antipode_status_default(z2):
    assert z2.antipode_status == NOT_ATTEMPTED
    assert ABSENT != ATTACHED


def test_unverified_cocycle_rejected():
    g = cyclic(2)
    bad = Cochain3.trivial(g).with_entry(1, 1, 0, CycScalar.from_int(2, -1))
    with pytest.raises(DPRError):
        build_dpr(g, bad)
    with pytest.raises(DPRError):
        build_dpr(symmetric(3), Cochain3.trivial(g))
