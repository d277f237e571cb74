"""Invariants of braid closures: components, Alexander, Jones, determinant, genus."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .braid import BraidError, BraidWord, exponent_sum, permutation
from .laurent import ONE, ZERO, LaurentMatrix, LaurentPolynomial

T = LaurentPolynomial.monomial(1)
T_INV = LaurentPolynomial.monomial(-1)
MINUS_T = LaurentPolynomial.monomial(1, -1)
MINUS_T_INV = LaurentPolynomial.monomial(-1, -1)


class InvariantError(ValueError):
    """An invariant was requested outside its domain (e.g. Alexander of a link)."""


def closure_component_count(w: BraidWord) -> int:
    return len(permutation(w).cycles())


# -- reduced Burau -----------------------------------------------------------


def _burau_generator(n: int, x: int) -> LaurentMatrix:
    d = n - 1
    i = abs(x) - 1  # 0-indexed row of the -t entry
    m = [[ONE if r == c else ZERO for c in range(d)] for r in range(d)]
    if x > 0:
        m[i][i] = MINUS_T
        if i > 0:
            m[i - 1][i] = T
        if i < d - 1:
            m[i + 1][i] = ONE
    else:
        m[i][i] = MINUS_T_INV
        if i > 0:
            m[i - 1][i] = ONE
        if i < d - 1:
            m[i + 1][i] = T_INV
    return LaurentMatrix(m)


def reduced_burau(w: BraidWord) -> LaurentMatrix:
    """Product of the (n-1)x(n-1) reduced Burau matrices of the letters, left to right."""
    if w.strands < 2:
        raise BraidError("reduced Burau needs at least 2 strands")
    out = LaurentMatrix.identity(w.strands - 1)
    for x in w.letters:
        out = out * _burau_generator(w.strands, x)
    return out


def normalize_alexander(p: LaurentPolynomial) -> LaurentPolynomial:
    """Pick the representative of p up to +-t^k that is symmetric with p(1) = 1."""
    if p.is_zero():
        return p
    total = p.min_degree() + p.max_degree()
    if total % 2:
        raise InvariantError(f"cannot center polynomial {p} with odd span")
    p = p.shift(-(total // 2))
    if p(1) < 0:
        p = -p
    return p


def alexander(w: BraidWord) -> LaurentPolynomial:
    """Alexander polynomial of a knot closure, symmetric with Delta(1) = 1."""
    if closure_component_count(w) != 1:
        raise InvariantError("Alexander polynomial is only computed for knot closures")
    n = w.strands
    if n == 1:
        return ONE
    burau = reduced_burau(w)
    det = (LaurentMatrix.identity(n - 1) - burau).det()
    # det(I - B) = Delta * (1 + t + ... + t^(n-1)) up to units
    cyclotomic = LaurentPolynomial({k: 1 for k in range(n)})
    try:
        delta = det.exact_divide(cyclotomic)
    except ArithmeticError as exc:  # pragma: no cover - indicates a bug
        raise AssertionError(f"Burau determinant {det} not divisible by {cyclotomic}") from exc
    return normalize_alexander(delta)


def determinant(w: BraidWord) -> int:
    return abs(alexander(w)(-1))


# -- Kauffman bracket via Temperley-Lieb -------------------------------------
# A TL diagram on n strands is a perfect matching on 2n points: 0..n-1 along
# the top, n..2n-1 along the bottom, stored as a tuple of partners.

A = LaurentPolynomial.monomial(1)
A_INV = LaurentPolynomial.monomial(-1)
LOOP = LaurentPolynomial({2: -1, -2: -1})  # delta = -A^2 - A^-2


def _identity_diagram(n: int) -> tuple[int, ...]:
    return tuple(list(range(n, 2 * n)) + list(range(n)))


def _times_e(d: tuple[int, ...], n: int, i: int) -> tuple[tuple[int, ...], bool]:
    """Stack e_i (0-indexed, joining positions i and i+1) below diagram d.

    Returns the new diagram and whether a closed loop was created.
    """
    b1, b2 = n + i, n + i + 1
    p, q = d[b1], d[b2]
    if p == b2:
        return d, True
    m = list(d)
    m[p], m[q] = q, p
    m[b1], m[b2] = b2, b1
    return tuple(m), False


@lru_cache(maxsize=None)
def _closure_loops(d: tuple[int, ...]) -> int:
    n = len(d) // 2
    seen = [False] * (2 * n)
    loops = 0
    for start in range(2 * n):
        if seen[start]:
            continue
        loops += 1
        a = start
        while not seen[a]:
            seen[a] = True
            b = d[a]
            seen[b] = True
            # closure strand joins top k to bottom k
            a = b - n if b >= n else b + n
    return loops


class TLElement:
    """Linear combination of TL diagrams with Laurent coefficients in A."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict[tuple[int, ...], LaurentPolynomial] | None = None):
        self.n = n
        self.terms = {d: c for d, c in (terms or {}).items() if c}

    @classmethod
    def identity(cls, n: int) -> TLElement:
        return cls(n, {_identity_diagram(n): ONE})

    def times_crossing(self, x: int) -> TLElement:
        """Right multiply by sigma_i^{+-1} = A^{+-1} + A^{-+1} e_i."""
        i = abs(x) - 1
        straight, smooth = (A, A_INV) if x > 0 else (A_INV, A)
        out: dict[tuple[int, ...], LaurentPolynomial] = {}
        for d, c in self.terms.items():
            cs = c * straight
            out[d] = out[d] + cs if d in out else cs
            nd, loop = _times_e(d, self.n, i)
            ce = c * smooth
            if loop:
                ce = ce * LOOP
            out[nd] = out[nd] + ce if nd in out else ce
        return TLElement(self.n, out)

    def closure(self) -> LaurentPolynomial:
        """Markov trace normalized so the closed one-strand diagram is 1."""
        total = ZERO
        for d, c in self.terms.items():
            total = total + c * LOOP ** (_closure_loops(d) - 1)
        return total


def kauffman_bracket(w: BraidWord) -> LaurentPolynomial:
    """Bracket of the closure, normalized so the unknot has bracket 1."""
    elem = TLElement.identity(w.strands)
    for x in w.letters:
        elem = elem.times_crossing(x)
    return elem.closure()


def jones(w: BraidWord) -> LaurentPolynomial:
    """Jones polynomial V(t) of the closure.

    The variable is fixed so that the closure of [1,1,1] in B_2 gives
    -t^-4 + t^-3 + t^-1 (t = A^4 for the bracket above).  Links with an even
    number of components get half-integer exponents.
    """
    writhe = exponent_sum(w)
    f = kauffman_bracket(w) * LaurentPolynomial.monomial(-3 * writhe, (-1) ** (writhe % 2))
    terms = {}
    for e, c in f.items():
        te = Fraction(e, 4)
        if te.denominator not in (1, 2):
            raise AssertionError(f"unexpected bracket exponent {e}")
        terms[te] = c
    return LaurentPolynomial(terms)


def jones_at_minus_one(v: LaurentPolynomial) -> int:
    """V(-1) for a knot (integer exponents only)."""
    return v(-1)


# -- genus and L-space form --------------------------------------------------


def positive_braid_genus(crossings: int, strands: int) -> int:
    """Genus (c - n + 1)/2 of a knot that closes a positive braid."""
    twice = crossings - strands + 1
    if twice % 2 or twice < 0:
        raise InvariantError(f"(c - n + 1)/2 is not a nonnegative integer for c={crossings}, n={strands}")
    return twice // 2


def genus_positive_braid(w: BraidWord) -> int:
    if any(x < 0 for x in w.letters):
        raise InvariantError("word is not positive")
    if closure_component_count(w) != 1:
        raise InvariantError("closure is not a knot")
    return positive_braid_genus(len(w.letters), w.strands)


def is_lspace_alexander_form(p: LaurentPolynomial) -> bool:
    """Coefficients are +-1, alternate in sign, and the extreme ones are +1."""
    coeffs = [c for _, c in sorted(p.items(), reverse=True)]
    if not coeffs or any(abs(c) != 1 for c in coeffs):
        return False
    if coeffs[0] != 1 or coeffs[-1] != 1:
        return False
    return all(a == -b for a, b in zip(coeffs, coeffs[1:]))
