import itertools
import json

import numpy as np
import pytest

from qdouble.catalog import load
from qdouble.cochain import Cochain3
from qdouble.cyclotomic import CycScalar
from qdouble.crossedmod import (
    CrossedGModule,
    CrossedModuleError,
    LeftModule,
    MemoryGuardError,
    SparseMatrix,
    associator,
    braiding,
    check_representation,
    crossed_to_module,
    identity_map,
    inverse_degree,
    module_to_crossed,
    regular_module,
    regular_object,
    tensor_objects,
    trivial_object,
    verify_category,
    verify_hexagon,
    verify_morphism,
    verify_naturality,
    verify_object,
    verify_pentagon,
    verify_rmatrix_transport,
)
from qdouble.dpr import build_dpr
from qdouble.group import cyclic


def obj(gd, cd):
    g, phi = load(gd, cd)
    D = build_dpr(g, phi)
    return D, regular_object(g, phi, D)


@pytest.fixture(scope="module")
def z2t():
    return obj("zn:2", "std:zn:2:p=1")


def dense(M):
    return [[c for c in row] for row in M.to_dense()]


def test_trivial_object():
    g = cyclic(3)
    one = trivial_object(g, Cochain3.trivial(g))
    assert one.dim == 1
    assert verify_object(one).ok


def test_trivial_group_regular_object():
    g = cyclic(1)
    V = regular_object(g, Cochain3.trivial(g))
    assert V.dim == 1 and list(V.grading) == [0]
    assert verify_object(V).ok


def test_untwisted_z2_grading():
    _, V = obj("zn:2", "trivial")
    assert V.dim == 4
    assert sorted(V.grading) == [0, 0, 1, 1]


SIGN_TABLE = {
    # basis -> {x: (image, coefficient)}
    0: {0: (0, 1), 1: (2, 1)},
    1: {0: (1, 1), 1: (3, 1)},
    2: {0: (2, 1), 1: (0, 1)},
    3: {0: (3, 1), 1: (1, -1)},
}


def test_twisted_z2_action_signs(z2t):
    _, V = z2t
    assert list(V.grading) == [0, 1, 0, 1]
    for v, row in SIGN_TABLE.items():
        for x, (image, c) in row.items():
            assert V.act(v, x) == {image: CycScalar.from_int(2, c)}


@pytest.mark.parametrize("gd,cd", [("zn:2", "std:zn:2:p=1"), ("zn:3", "std:zn:3:p=1"), ("s:3", "trivial")])
def test_regular_objects_verify(gd, cd):
    _, V = obj(gd, cd)
    assert verify_object(V).ok
    assert verify_object(tensor_objects(V, V)).ok


def test_tensor_with_unit_keeps_action(z2t):
    _, V = z2t
    one = trivial_object(V.group, V.cocycle)
    for T in (tensor_objects(V, one), tensor_objects(one, V)):
        assert list(T.grading) == list(V.grading)
        for x in V.group.elements:
            assert T.action(x) == V.action(x)


def test_untwisted_tensor_is_kron():
    _, V = obj("s:3", "trivial")
    T = tensor_objects(V, V)
    for x in (1, 3):
        assert T.action(x) == V.action(x).kron(V.action(x))


def test_twisted_tensor_ratio(z2t):
    _, V = z2t
    T = tensor_objects(V, V)
    # v = w = basis 1 (degree 1); both map to basis 3 and the ratio is -1
    assert T.act(1 * 4 + 1, 1) == {3 * 4 + 3: CycScalar.from_int(2, -1)}
    assert T.act(1 * 4 + 1, 0) == {1 * 4 + 1: CycScalar.one(2)}


def test_associator_basics(z2t):
    _, U = obj("zn:2", "trivial")
    a = associator(U, U, U)
    assert a.matrix == SparseMatrix.identity(64, 1)
    _, V = z2t
    one = trivial_object(V.group, V.cocycle)
    for triple in ((one, V, V), (V, one, V), (V, V, one)):
        assert associator(*triple).matrix == SparseMatrix.identity(16, V.order)
    phi = associator(V, V, V)
    assert phi.matrix.is_monomial()
    assert verify_morphism(phi, iso=True).ok
    assert (phi @ associator(V, V, V, inverse=True)).matrix == SparseMatrix.identity(64, V.order)


def test_pentagon_on_four_objects():
    for gd, cd in (("zn:2", "std:zn:2:p=1"), ("zn:3", "std:zn:3:p=1")):
        _, V = obj(gd, cd)
        assert verify_pentagon(V, V, V, V).ok


def test_braiding_with_unit_is_flip(z2t):
    _, V = z2t
    one = trivial_object(V.group, V.cocycle)
    assert braiding(V, one).matrix == SparseMatrix.identity(4, V.order)
    assert braiding(one, V).matrix == SparseMatrix.identity(4, V.order)


def test_untwisted_abelian_trivial_action_is_flip():
    g = cyclic(3)
    phi = Cochain3.trivial(g)
    I = SparseMatrix.identity(2, 1)
    V = CrossedGModule(g, phi, [1, 2], [I] * 3)
    W = CrossedGModule(g, phi, [0, 1, 2], [SparseMatrix.identity(3, 1)] * 3)
    B = braiding(V, W).matrix
    for v, w in itertools.product(range(2), range(3)):
        assert B.column(v * 3 + w) == {w * 2 + v: CycScalar.one(1)}


def test_twisted_braiding_is_not_symmetric(z2t):
    _, V = z2t
    sq = braiding(V, V) @ braiding(V, V)
    assert sq.matrix != SparseMatrix.identity(16, V.order)
    diff = sq.matrix.difference(SparseMatrix.identity(16, V.order))
    assert diff is not None


def test_hexagons_on_trivial_data():
    g = cyclic(2)
    phi = Cochain3.trivial(g)
    one = trivial_object(g, phi)
    assert verify_hexagon(one, one, one).ok


@pytest.mark.parametrize("gd,cd", [("zn:2", "std:zn:2:p=1"), ("zn:3", "std:zn:3:p=1"), ("s:3", "trivial")])
def test_hexagons_on_regular_triples(gd, cd):
    _, V = obj(gd, cd)
    assert verify_hexagon(V, V, V).ok


def test_inverted_braiding_degree_fails():
    _, V = obj("s:3", "trivial")

    def wrong(a, b):
        return braiding(a, b, degree=inverse_degree)

    rep = verify_hexagon(V, V, V, braid=wrong)
    assert not rep.ok
    w = rep.failures()[0].witness
    assert len(w["source_basis"]) == 3


def test_naturality_and_transport(z2t):
    from qdouble.crossedmod import regular_endomorphisms

    D, V = z2t
    maps = regular_endomorphisms(D, V)
    assert all(verify_morphism(f).ok for f in maps)
    assert not verify_morphism(maps[-1], iso=True).ok  # right multiplication by P_t is a projection
    assert verify_naturality(V, V, maps).ok
    assert verify_rmatrix_transport(D, V, V).ok


def test_corrupted_grading_is_caught(z2t):
    _, V = z2t
    bad = V.with_grading([0, 1, 1, 1])
    rep = verify_object(bad)
    assert rep.status("grading_compatibility") == "fail"
    w = rep["grading_compatibility"].witness
    assert w["image_degree"] != w["expected"]


def test_module_round_trip(z2t):
    D, V = z2t
    M = crossed_to_module(V, D)
    assert check_representation(D, M) is None
    back = module_to_crossed(D, M)
    assert list(back.grading) == list(V.grading)
    for x in V.group.elements:
        assert back.action(x) == V.action(x)


def test_trivial_module_is_trivial_object(z2t):
    D, _ = z2t
    order = D.order
    eps = tuple(SparseMatrix.identity(1, order).scale(c) for c in D.qhopf.counit)
    V = module_to_crossed(D, LeftModule(1, eps))
    assert list(V.grading) == [0]
    assert all(V.action(x) == SparseMatrix.identity(1, order) for x in V.group.elements)


def test_corrupted_module_has_witness(z2t):
    D, _ = z2t
    M = regular_module(D)
    rho = list(M.rho)
    rho[D.index(1, 1)] = rho[D.index(1, 0)]
    w = check_representation(D, LeftModule(M.dim, tuple(rho)))
    assert w is not None and "pair" in w
    with pytest.raises(CrossedModuleError):
        module_to_crossed(D, LeftModule(M.dim, tuple(rho)))


def test_memory_guard():
    A = SparseMatrix.identity(3000, 1)
    with pytest.raises(MemoryGuardError):
        A.kron(A)
    with pytest.raises(MemoryGuardError):
        A.to_dense()
    with pytest.raises(MemoryGuardError):
        A.compose(A, max_nnz=10)


def test_sparse_arithmetic_against_dense():
    rng = np.random.default_rng(0)
    order = 4
    def rand(m, k):
        rows, cols, vals = [], [], []
        for i, j in itertools.product(range(m), range(k)):
            if rng.random() < 0.4:
                rows.append(i)
                cols.append(j)
                vals.append(CycScalar(order, [int(rng.integers(-3, 4)), int(rng.integers(-3, 4))]))
        return SparseMatrix.from_triples((m, k), rows, cols, vals, order)
    A, B = rand(4, 3), rand(3, 5)
    C = (A @ B).to_dense()
    Ad, Bd = A.to_dense(), B.to_dense()
    for i, j in itertools.product(range(4), range(5)):
        acc = CycScalar.zero(order)
        for k in range(3):
            acc = acc + Ad[i][k] * Bd[k][j]
        assert C[i][j] == acc
    K = A.kron(B).to_dense()
    for (i, j), (k, l) in itertools.product(itertools.product(range(4), range(3)), itertools.product(range(3), range(5))):
        assert K[i * 3 + k][j * 5 + l] == Ad[i][j] * Bd[k][l]


def test_json_round_trip(z2t):
    _, V = z2t
    back = CrossedGModule.from_json(json.loads(json.dumps(V.to_json())))
    assert list(back.grading) == list(V.grading)
    assert all(back.action(x) == V.action(x) for x in V.group.elements)


def test_action_count_checked():
    g = cyclic(2)
    with pytest.raises(CrossedModuleError):
        CrossedGModule(g, Cochain3.trivial(g), [0], [SparseMatrix.identity(1, 1)])
    with pytest.raises(CrossedModuleError):
        CrossedGModule(g, Cochain3.trivial(g), [2], [SparseMatrix.identity(1, 1)] * 2)


def test_category_report_on_z3():
    D, _ = obj("zn:3", "std:zn:3:p=1")
    rep = verify_category(D)
    assert rep.ok, rep.summary()
    prefixes = {c.name.split("/")[0] for c in rep.clauses}
    assert prefixes == {"object", "tensor", "braiding_morphism", "rtransport", "naturality", "hexagon"}


def test_identity_map_is_morphism(z2t):
    _, V = z2t
    assert verify_morphism(identity_map(V)).ok
