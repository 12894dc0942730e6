import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qdouble.cyclotomic import (
    CycScalar,
    common_order,
    cyclotomic_poly,
    embed,
    euler_phi,
    inv,
    root_of_unity,
    scalar_from_json,
    scalar_to_json,
)

from oracles import to_complex

ORDERS = [1, 2, 3, 4, 5, 6, 8, 12]


def scalars(order):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.lists(coeff, min_size=0, max_size=order).map(lambda cs: CycScalar(order, cs))


def test_small_roots():
    assert root_of_unity(1, 0).is_one()
    assert root_of_unity(4, 2) == CycScalar.from_int(4, -1)
    assert root_of_unity(3, 1) + root_of_unity(3, 2) == CycScalar.from_int(3, -1)


def test_products_of_roots():
    z4, z6 = root_of_unity(4, 1), root_of_unity(6, 1)
    assert z4 * z4 == -CycScalar.one(4)
    assert z6 * z6 * z6 == -CycScalar.one(6)


def test_zeta6_cubed_by_polynomial_division():
    # x^3 mod (x^2 - x + 1) is -1
    x = sympy.symbols("x")
    assert sympy.rem(x**3, sympy.cyclotomic_poly(6, x), x) == -1


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_poly_matches_sympy(n):
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(n)) == [int(c) for c in ref]
    assert euler_phi(n) == sympy.totient(n)


def test_inverse_examples():
    z3, z4 = root_of_unity(3, 1), root_of_unity(4, 1)
    assert inv(1 + z3) == -z3
    assert inv(2 + z4) == (2 - z4) / 5
    assert (2 + z4) * CycScalar(4, [Fraction(2, 5), Fraction(-1, 5)]) == CycScalar.one(4)
    for n in (2, 3, 5, 7, 8, 12):
        for k in range(n):
            assert inv(root_of_unity(n, k)) == root_of_unity(n, n - k)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        inv(CycScalar.zero(5))
    with pytest.raises(ZeroDivisionError):
        CycScalar.one(3) / CycScalar.zero(3)


def test_invalid_order():
    with pytest.raises(ValueError):
        root_of_unity(0, 0)
    with pytest.raises(ValueError):
        CycScalar(0, [1])


def test_mismatched_orders_rejected():
    with pytest.raises(ValueError):
        root_of_unity(3, 1) + root_of_unity(4, 1)


def test_embed():
    assert embed(root_of_unity(2, 1), 4) == root_of_unity(4, 2)
    for m in (1, 2, 6, 12):
        assert embed(CycScalar.one(1), m).is_one()
    with pytest.raises(ValueError):
        embed(root_of_unity(3, 1), 4)
    assert common_order([root_of_unity(4, 1), root_of_unity(6, 1)]) == 12


def test_canonical_form_hashes_consistently():
    a = root_of_unity(3, 1) + root_of_unity(3, 2)
    b = CycScalar.from_int(3, -1)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


@pytest.mark.parametrize("n", ORDERS)
def test_roots_match_complex_values(n):
    for k in range(2 * n):
        assert abs(to_complex(root_of_unity(n, k)) - cmath.exp(2j * cmath.pi * k / n)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(lambda n: st.tuples(scalars(n), scalars(n), scalars(n))))
def test_field_axioms(abc):
    a, b, c = abc
    n = a.order
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + (-a)).is_zero()
    assert (a * CycScalar.one(n)) == a
    if not a.is_zero():
        assert (a * inv(a)).is_one()
        assert abs(to_complex(a) * to_complex(inv(a)) - 1) < 1e-9
    assert abs(to_complex(a * b) - to_complex(a) * to_complex(b)) < 1e-9
    assert abs(to_complex(a + b) - to_complex(a) - to_complex(b)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 4), (3, 6), (4, 12), (6, 12), (1, 5)]).flatmap(
    lambda nm: st.tuples(st.just(nm[1]), scalars(nm[0]), scalars(nm[0]))
))
def test_embed_is_a_homomorphism(args):
    m, a, b = args
    assert embed(a * b, m) == embed(a, m) * embed(b, m)
    assert embed(a + b, m) == embed(a, m) + embed(b, m)
    assert abs(to_complex(embed(a, m)) - to_complex(a)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(scalars))
def test_json_round_trip(a):
    assert scalar_from_json(scalar_to_json(a)) == a


def test_json_short_forms():
    assert scalar_from_json(3, order=4) == CycScalar.from_int(4, 3)
    assert scalar_from_json({"root": [6, 2]}) == root_of_unity(3, 1) * CycScalar.one(3)
    with pytest.raises(ValueError):
        scalar_from_json(True)


def test_immutable():
    a = CycScalar.one(3)
    with pytest.raises(AttributeError):
        a.order = 4
