import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaverify.braid import BraidError, BraidWord, compose, conjugate, expand, exponent_sum, inverse, permutation
from qaverify.invariants import reduced_burau
from qaverify.wordproblem import UndecidedError, equals, handle_reduce, is_trivial, left_normal_form

from conftest import word_pairs, words


def W(n, *letters):
    return BraidWord(n, letters)


@pytest.mark.parametrize("method", ["handle", "garside"])
def test_trivial_examples(method):
    assert is_trivial(W(3, 1, 2, 1, -2, -1, -2), method)
    assert is_trivial(W(4, 1, 3, -1, -3), method)
    assert not is_trivial(W(2, 1), method)
    assert is_trivial(W(3), method)


@pytest.mark.parametrize("method", ["handle", "garside"])
def test_equals_examples(method):
    assert equals(W(3, 1, 2, 1), W(3, 2, 1, 2), method)
    assert not equals(W(3, 1), W(3, 2), method)


@pytest.mark.parametrize("method", ["handle", "garside"])
def test_printed_alpha_prime_identity(method):
    gamma = expand("1,2,1,3,3,2,2,3,4,3,2,1,3,2,1,3,2,4,2,4,1,4,2,1,3,2,3,4,3,4,3,2", 5)
    alpha_prime = expand("-3,1,2,3", 5)
    assert equals(conjugate(gamma, alpha_prime), expand("(1,2,3,4)^5,2,1,3,2,4,3,3,4,4,3,2,1", 5), method)


def test_strand_mismatch():
    with pytest.raises(BraidError):
        equals(W(3, 1), W(4, 1))


def test_unknown_method():
    with pytest.raises(ValueError):
        is_trivial(W(3, 1), "magic")


def test_cap_reports_undecided():
    # sigma_1 sigma_2^k sigma_1^-1 ... needs several rewrites
    w = expand("1,(2)^6,-1,(-2)^6,-1,2,1", 3)
    with pytest.raises(UndecidedError):
        is_trivial(w, cap=3)
    assert is_trivial(w) is False


def test_handle_reduce_examples():
    assert handle_reduce([1, 2, -1]) == [-2, 1, 2]
    assert handle_reduce([1, -1]) == []


def test_normal_form_of_delta():
    inf, factors = left_normal_form(expand("1,2,1", 3))
    assert (inf, factors) == (1, [])
    inf, factors = left_normal_form(expand("-1,-2,-1", 3))
    assert (inf, factors) == (-1, [])


@settings(max_examples=500)
@given(words(max_strands=5, max_len=16))
def test_handle_and_garside_agree(w):
    assert is_trivial(w, "handle") == is_trivial(w, "garside")


@settings(max_examples=300)
@given(words(max_strands=5, max_len=8))
def test_word_times_inverse_is_trivial(w):
    u = compose(w, inverse(w))
    assert is_trivial(u, "handle") and is_trivial(u, "garside")


@given(word_pairs(max_strands=5, max_len=8))
def test_equals_reflexive_symmetric_and_invariants(pair):
    u, v = pair
    assert equals(u, u)
    assert equals(u, v) == equals(v, u)
    if equals(u, v):
        assert permutation(u) == permutation(v)
        assert exponent_sum(u) == exponent_sum(v)


@settings(max_examples=300)
@given(word_pairs(max_strands=3, max_len=10))
def test_equals_matches_burau_on_three_strands(pair):
    # the Burau representation is faithful on B_3, which gives an independent oracle
    u, v = pair
    assert equals(u, v) == (reduced_burau(u) == reduced_burau(v))


@given(st.integers(2, 6))
def test_braid_relation_and_far_commutation(n):
    for i in range(1, n - 1):
        assert equals(W(n, i, i + 1, i), W(n, i + 1, i, i + 1))
    for i in range(1, n):
        for j in range(i + 2, n):
            assert equals(W(n, i, j), W(n, j, i))
