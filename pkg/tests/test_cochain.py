import cmath
import itertools
import random

import pytest

from qdouble.catalog import DEFAULT, load
from qdouble.cochain import (
    BudgetExceeded,
    Cochain2,
    Cochain3,
    CochainError,
    are_cohomologous_bruteforce,
    chi_from_phi,
    coboundary,
    parse_cocycle,
    random_cochain2,
    standard_cocycle_cyclic,
    twist,
    verify_3cocycle,
    verify_chi_2cocycle,
)
from qdouble.cyclotomic import CycScalar, root_of_unity
from qdouble.group import cyclic, symmetric

from oracles import cyclic_table, inverses, std_phi, to_complex


def z2_table(entries):
    """A cochain on Z2 from a dict of non-unit entries."""
    g = cyclic(2)
    one = CycScalar.one(2)
    return Cochain3.from_function(g, lambda a, b, c: entries.get((a, b, c), one))


def brute_pentagon(table, fn):
    n = len(table)
    for x, y, s, u in itertools.product(range(n), repeat=4):
        lhs = fn(y, s, u) * fn(x, table[y][s], u) * fn(x, y, s)
        rhs = fn(x, y, table[s][u]) * fn(table[x][y], s, u)
        if abs(lhs - rhs) > 1e-9:
            return False
    return True


def test_trivial_passes():
    assert verify_3cocycle(Cochain3.trivial(symmetric(3))).ok


def test_z2_sign_cocycle_all_16_quadruples():
    minus = CycScalar.from_int(2, -1)
    phi = z2_table({(1, 1, 1): minus})
    assert verify_3cocycle(phi).ok
    assert brute_pentagon(cyclic_table(2), lambda a, b, c: -1 if (a, b, c) == (1, 1, 1) else 1)


def test_z2_value_at_111_must_square_to_one():
    # the quadruple (1,1,1,1) forces phi(1,1,1)^2 = 1
    g = cyclic(2)
    for k, ok in ((0, True), (1, False), (2, False)):
        phi = Cochain3.from_function(g, lambda a, b, c: root_of_unity(3, k) if (a, b, c) == (1, 1, 1) else CycScalar.one(3))
        rep = verify_3cocycle(phi)
        assert rep.ok is ok
        if not ok:
            assert rep["pentagon"].witness["quadruple"] == [1, 1, 1, 1]


def test_non_normalized_entry_fails():
    phi = z2_table({(1, 1, 0): CycScalar.from_int(2, -1)})
    rep = verify_3cocycle(phi)
    assert rep.status("full_normalization") == "fail"
    assert rep["full_normalization"].witness == {"triple": [1, 1, 0]}
    assert not rep.ok


def test_middle_normalization_witness():
    phi = z2_table({(1, 0, 1): CycScalar.from_int(2, -1)})
    rep = verify_3cocycle(phi)
    assert rep["normalized"].witness["triple"] == [1, 0, 1]


def test_zero_entry_is_not_invertible():
    phi = z2_table({(1, 1, 1): CycScalar.zero(2)})
    rep = verify_3cocycle(phi)
    assert rep.status("invertible") == "fail"


def test_standard_cocycle_values():
    assert standard_cocycle_cyclic(5, 0).is_trivial()
    phi = standard_cocycle_cyclic(2, 1)
    for abc in itertools.product(range(2), repeat=3):
        assert phi(*abc) == (CycScalar.from_int(2, -1) if abc == (1, 1, 1) else CycScalar.one(2))
    phi3 = standard_cocycle_cyclic(3, 1)
    assert phi3(1, 2, 2) == root_of_unity(3, 1)
    assert phi3(2, 2, 2) == root_of_unity(3, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_standard_cocycle_matches_complex_formula(n):
    for p in range(n):
        phi = standard_cocycle_cyclic(n, p)
        ref = std_phi(n, p)
        for abc in itertools.product(range(n), repeat=3):
            assert abs(to_complex(phi(*abc)) - ref(*abc)) < 1e-9
        assert brute_pentagon(cyclic_table(n), ref)


def test_coboundary_examples():
    g = symmetric(3)
    ones = Cochain2.from_function(g, lambda x, y: CycScalar.one(1))
    assert coboundary(ones).is_trivial()
    rng = random.Random(7)
    for _ in range(4):
        beta = random_cochain2(cyclic(2), 4, rng)
        assert coboundary(beta)(1, 1, 1).is_one()
    for _ in range(20):
        assert verify_3cocycle(coboundary(random_cochain2(g, 6, rng))).ok


def test_coboundary_rejects_non_normalized():
    g = cyclic(2)
    beta = Cochain2.from_function(g, lambda x, y: CycScalar.from_int(2, -1) if (x, y) == (0, 1) else CycScalar.one(2))
    with pytest.raises(CochainError):
        coboundary(beta)


def test_cohomology_decisions():
    g = cyclic(2)
    triv, std = Cochain3.trivial(g), standard_cocycle_cyclic(2, 1)
    res = are_cohomologous_bruteforce(triv, std, 4)
    assert not res.cohomologous and res.candidates == 4
    same = are_cohomologous_bruteforce(std, std, 4)
    assert same.cohomologous
    assert all(v.is_one() for v in same.witness.values())


def test_cohomology_recovers_twist_witness():
    rng = random.Random(3)
    g = cyclic(3)
    phi = standard_cocycle_cyclic(3, 1)
    beta = random_cochain2(g, 2, rng)
    res = are_cohomologous_bruteforce(phi, twist(phi, beta), 2)
    assert res.cohomologous
    assert twist(phi, res.witness).table == twist(phi, beta).table


def test_cohomology_budget():
    with pytest.raises(BudgetExceeded):
        are_cohomologous_bruteforce(Cochain3.trivial(symmetric(3)), Cochain3.trivial(symmetric(3)), 4, budget=100)


def test_chi_examples():
    g = cyclic(2)
    assert all(v.is_one() for v in chi_from_phi(Cochain3.trivial(g)).values())
    chi = chi_from_phi(standard_cocycle_cyclic(2, 1))
    assert chi(1, 1, 1) == CycScalar.from_int(2, -1)
    assert sum(not v.is_one() for v in chi.values()) == 1


@pytest.mark.parametrize("gd,cd", DEFAULT)
def test_chi_normalized_and_cocycle(gd, cd):
    g, phi = load(gd, cd)
    chi = chi_from_phi(phi)
    assert verify_chi_2cocycle(chi).ok
    e = g.identity
    for x, s in itertools.product(g.elements, repeat=2):
        assert chi(x, e, s).is_one() and chi(e, x, s).is_one() and chi(x, s, e).is_one()


def test_chi_matches_complex_oracle(s3_sign):
    g, phi = s3_sign
    t, inv = [list(r) for r in g.mul_table], inverses([list(r) for r in g.mul_table])
    f = lambda a, b, c: to_complex(phi(a, b, c))  # noqa: E731
    for x, y, s in itertools.product(range(6), repeat=3):
        xy = t[x][y]
        s_xy = t[t[inv[xy]][s]][xy]
        s_x = t[t[inv[x]][s]][x]
        ref = f(x, y, s_xy) * f(s, x, y) / f(x, s_x, y)
        assert abs(to_complex(chi_from_phi(phi)(x, y, s)) - ref) < 1e-9


def test_abelian_chi_simplifies():
    phi = standard_cocycle_cyclic(4, 1)
    chi = chi_from_phi(phi)
    for x, y, s in itertools.product(range(4), repeat=3):
        assert chi(x, y, s) == phi(x, y, s) * phi(s, x, y) / phi(x, s, y)


def test_corrupted_chi_has_witness():
    chi = chi_from_phi(standard_cocycle_cyclic(2, 1))
    rep = verify_chi_2cocycle(chi.with_entry(1, 0, 1, CycScalar.from_int(2, -1)))
    assert rep["normalized"].witness == {"kind": "chi(x,e)", "x": 1, "y": 0, "s": 1}
    chi3 = chi_from_phi(standard_cocycle_cyclic(3, 1))
    rep3 = verify_chi_2cocycle(chi3.with_entry(1, 1, 1, CycScalar.from_int(3, -1)))
    assert rep3.status("normalized") == "pass"
    assert rep3.status("cocycle") == "fail"
    w = rep3["cocycle"].witness
    assert w["lhs"] != w["rhs"]


def test_parse_cocycle(tmp_path):
    g = cyclic(4)
    assert parse_cocycle("trivial", g).is_trivial()
    phi = parse_cocycle("std:zn:4:p=2", g)
    assert phi.order == 2
    path = tmp_path / "phi.json"
    import json

    path.write_text(json.dumps(phi.to_json()))
    back = parse_cocycle(str(path), g)
    assert back.table == phi.table
    with pytest.raises(CochainError):
        parse_cocycle("std:zn:3:p=1", g)
    with pytest.raises(CochainError):
        parse_cocycle("std:s:3:p=1")
    with pytest.raises(CochainError):
        parse_cocycle("nonsense")


def test_root_order_exponent_agrees_with_cmath():
    phi = standard_cocycle_cyclic(6, 5)
    assert abs(to_complex(phi(5, 5, 5)) - cmath.exp(2j * cmath.pi * 25 / 6)) < 1e-9
