from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from qaverify.laurent import LaurentMatrix, LaurentPolynomial

t = sympy.Symbol("t")

polys = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=6).map(LaurentPolynomial)


def to_sympy(p):
    return sum((c * t ** e for e, c in p.items()), sympy.Integer(0))


def test_zero_terms_dropped():
    p = LaurentPolynomial({1: 2, 0: 0, -1: -3})
    assert p.terms == {-1: -3, 1: 2}
    assert not LaurentPolynomial({3: 0})


def test_to_string_format():
    v = LaurentPolynomial({-1: 1, -3: 1, -4: -1})
    assert v.to_string() == "{-4:-1, -3:1, -1:1}"
    assert LaurentPolynomial().to_string() == "{}"


def test_pretty():
    assert LaurentPolynomial({1: 1, 0: -1, -1: 1}).pretty() == "t - 1 + t^-1"
    assert LaurentPolynomial({2: -3}).pretty() == "-3t^2"


def test_half_integer_exponents():
    p = LaurentPolynomial({Fraction(-5, 2): -1, Fraction(-1, 2): -1})
    assert p.to_string() == "{-5/2:-1, -1/2:-1}"
    assert LaurentPolynomial.from_string(p.to_string()) == p
    with pytest.raises(ValueError):
        p(2)


def test_from_string_errors():
    with pytest.raises(ValueError):
        LaurentPolynomial.from_string("1:2")
    with pytest.raises(ValueError):
        LaurentPolynomial.from_string("{1;2}")


def test_exact_divide():
    num = LaurentPolynomial({0: 1, 3: 1})
    assert num.exact_divide(LaurentPolynomial({0: 1, 1: 1})) == LaurentPolynomial({0: 1, 1: -1, 2: 1})
    with pytest.raises(ArithmeticError):
        num.exact_divide(LaurentPolynomial({0: 1, 1: 2}))
    with pytest.raises(ZeroDivisionError):
        num.exact_divide(LaurentPolynomial())


def test_determinant_2x2():
    one, tt = LaurentPolynomial.constant(1), LaurentPolynomial.monomial(1)
    m = LaurentMatrix([[tt, one], [one, tt]])
    assert m.det() == LaurentPolynomial({2: 1, 0: -1})


@given(polys, polys)
def test_ring_operations_match_sympy(p, q):
    assert sympy.expand(to_sympy(p + q) - (to_sympy(p) + to_sympy(q))) == 0
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p - q) - (to_sympy(p) - to_sympy(q))) == 0


@given(polys, polys)
def test_exact_divide_recovers_factor(p, q):
    if q:
        assert (p * q).exact_divide(q) == p


@given(polys, st.integers(-3, 3).filter(bool))
def test_evaluation_matches_sympy(p, x):
    assert p(x) == to_sympy(p).subs(t, x)


@given(polys)
def test_string_round_trip(p):
    assert LaurentPolynomial.from_string(p.to_string()) == p


@given(polys)
def test_substitute_power_is_an_involution_at_minus_one(p):
    assert p.substitute_power(-1).substitute_power(-1) == p
