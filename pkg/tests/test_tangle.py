import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qaverify.tangle import (ContinuedFraction, ExtendedRational, MontesinosPresentation, TangleError, cf_expand,
                             cf_value, montesinos_determinant, montesinos_trick_fraction)

R = ExtendedRational.parse

# every expansion printed alongside its fraction, plus an integer tangle
PRINTED_CF = [("[6,-2]", "13/2"), ("[0,1,-2]", "-2/3"), ("[-1,1,-2]", "-5/3"), ("[2,-2]", "5/2"),
              ("[0,4]", "-1/4"), ("[0,-2,2]", "2/5"), ("[0,1,-3]", "-3/4"), ("[0,-1,3]", "3/4"), ("[-2]", "-2")]


def test_extended_rational_normalizes():
    assert ExtendedRational(4, -6) == ExtendedRational(-2, 3)
    assert (ExtendedRational(-2, 3).p, ExtendedRational(-2, 3).q) == (-2, 3)
    assert ExtendedRational(-5, 0) == ExtendedRational.infinity() == R("inf")
    assert (ExtendedRational(-5, 0).p, ExtendedRational(-5, 0).q) == (1, 0)
    with pytest.raises(TangleError):
        ExtendedRational(0, 0)


def test_parse_and_str():
    assert str(R(" -10 / 4 ")) == "-5/2"
    assert str(R("7")) == "7"
    assert str(R("inf")) == "inf"
    for bad in ["", "1/", "a/2", "1.5", "0/0"]:
        with pytest.raises(TangleError):
            R(bad)


def test_arithmetic_with_infinity():
    inf = ExtendedRational.infinity()
    assert inf + 3 == inf
    assert -inf == inf
    assert inf.reciprocal() == 0 and ExtendedRational(0).reciprocal() == inf
    with pytest.raises(TangleError):
        inf + inf


@pytest.mark.parametrize("terms,value", PRINTED_CF)
def test_printed_expansions(terms, value):
    assert cf_value(ContinuedFraction.parse(terms)) == R(value)


def test_cf_value_examples():
    assert cf_value([5]) == 5
    assert cf_value([0]) == 0
    with pytest.raises(ZeroDivisionError):
        cf_value([1, 1, 1])


def test_cf_parse_errors():
    with pytest.raises(TangleError):
        ContinuedFraction.parse("[a,2]")
    with pytest.raises(TangleError):
        ContinuedFraction(())


def test_cf_expand_examples():
    assert cf_expand("13/2").terms == (6, -2)
    assert cf_expand(0).terms == (0,)
    assert cf_value(cf_expand("-5/3")) == R("-5/3")
    with pytest.raises(TangleError):
        cf_expand("inf")


def test_cf_round_trip_exhaustive():
    for q in range(1, 1001):
        for p in range(-1000, 1001):
            if math.gcd(p, q) == 1:
                r = ExtendedRational(p, q)
                assert cf_value(cf_expand(r)) == r


@given(st.fractions(max_denominator=10 ** 6))
def test_cf_expand_is_short(x):
    c = cf_expand(ExtendedRational.coerce(x))
    assert cf_value(c) == ExtendedRational.coerce(x)
    # each step at least halves the denominator
    assert len(c.terms) <= 2 + math.log2(x.denominator)


def test_trick_fraction():
    assert montesinos_trick_fraction("19/2", 3) == R("13/2")
    assert montesinos_trick_fraction("23/2", 5) == R("13/2")
    assert montesinos_trick_fraction("-11/3", -3) == R("-2/3")
    assert montesinos_trick_fraction("4/7", 0) == R("4/7")
    with pytest.raises(TangleError):
        montesinos_trick_fraction("inf", 1)


def independent_mdet(fracs):
    # |alpha_1 ... alpha_k * sum beta_i/alpha_i| done in Fraction arithmetic
    total = sum((Fraction(f) for f in fracs), Fraction(0))
    return abs(math.prod(Fraction(f).denominator for f in fracs) * total)


@pytest.mark.parametrize("fracs,det", [("3/5,2/3,-1/4", 61), ("2/3,2/5,-1/5", 65), ("4/7,3/4,-1/3", 83)])
def test_montesinos_determinants(fracs, det):
    m = MontesinosPresentation.parse(fracs)
    assert montesinos_determinant(m) == det
    assert independent_mdet(fracs.split(",")) == det
    assert montesinos_determinant([-f for f in m.fractions]) == det


def test_montesinos_presentation_checks():
    with pytest.raises(TangleError):
        MontesinosPresentation.parse("3/5,2")
    with pytest.raises(TangleError):
        MontesinosPresentation.parse("3/5,inf")
    assert str(MontesinosPresentation.parse("(3/5, 2/3, -1/4)")) == "(3/5, 2/3, -1/4)"


fractions_ge2 = st.tuples(st.integers(-30, 30), st.integers(2, 30)).filter(lambda t: math.gcd(*t) == 1)


@given(st.lists(fractions_ge2, min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_determinant_permutation_invariance(fr, rnd):
    m = [ExtendedRational(p, q) for p, q in fr]
    shuffled = list(m)
    rnd.shuffle(shuffled)
    assert montesinos_determinant(m) == montesinos_determinant(shuffled)


@given(st.lists(fractions_ge2, min_size=2, max_size=5), st.data())
def test_determinant_slide_invariance(fr, data):
    m = [ExtendedRational(p, q) for p, q in fr]
    i, j = data.draw(st.permutations(range(len(m))))[:2]
    slid = list(m)
    slid[i] = slid[i] + 1
    slid[j] = slid[j] - 1
    assert montesinos_determinant(m) == montesinos_determinant(slid)
