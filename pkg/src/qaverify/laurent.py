"""Exact Laurent polynomials in one variable with integer coefficients.

Exponents are integers, except that half-integer exponents are allowed so the
Jones polynomial of a link with an even number of components can be stored
in the variable t.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = Union[int, Fraction]


def _norm_exp(e) -> Exponent:
    e = Fraction(e)
    if e.denominator == 1:
        return int(e)
    return e


class LaurentPolynomial:
    """Immutable; zero coefficients are never stored."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | None = None):
        clean: dict[Exponent, int] = {}
        if terms:
            for e, c in terms.items():
                c = int(c)
                if c:
                    e = _norm_exp(e)
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> LaurentPolynomial:
        p = cls.__new__(cls)
        p._terms = dict(sorted((e, c) for e, c in terms.items() if c))
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: int) -> LaurentPolynomial:
        return cls({0: c})

    @classmethod
    def monomial(cls, e: Exponent, c: int = 1) -> LaurentPolynomial:
        return cls({e: c})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[int], low: int = 0) -> LaurentPolynomial:
        """Coefficients listed from exponent ``low`` upward."""
        return cls({low + k: c for k, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> Exponent:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return next(iter(self._terms))

    def max_degree(self) -> Exponent:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return next(reversed(self._terms))

    def span(self) -> Exponent:
        return self.max_degree() - self.min_degree()

    def coefficient(self, e: Exponent) -> int:
        return self._terms.get(_norm_exp(e), 0)

    # arithmetic

    def _coerce(self, other) -> LaurentPolynomial:
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPolynomial:
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPolynomial({e * k: c ** -k})
        out = LaurentPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: Exponent) -> LaurentPolynomial:
        """Multiply by t^k."""
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, k: int) -> LaurentPolynomial:
        """Replace t by t^k (k = -1 gives the mirror image)."""
        return LaurentPolynomial({e * k: c for e, c in self._terms.items()})

    def exact_divide(self, divisor: LaurentPolynomial) -> LaurentPolynomial:
        """Return q with q * divisor == self; raise ArithmeticError otherwise."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        rem = dict(self._terms)
        dlead = divisor.max_degree()
        dcoef = divisor._terms[dlead]
        dlow = divisor.min_degree()
        quotient: dict = {}
        low = self.min_degree()
        while rem:
            top = max(rem)
            if top - dlead < low - dlow:
                raise ArithmeticError("inexact polynomial division")
            c = rem[top]
            if c % dcoef:
                raise ArithmeticError("inexact polynomial division")
            q = c // dcoef
            qe = top - dlead
            quotient[qe] = q
            for e, dc in divisor._terms.items():
                k = e + qe
                v = rem.get(k, 0) - q * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return LaurentPolynomial._raw(quotient)

    def __call__(self, x):
        """Evaluate at an integer or Fraction; half-integer exponents are rejected."""
        total = 0
        for e, c in self._terms.items():
            if isinstance(e, Fraction):
                raise ValueError("cannot evaluate half-integer powers")
            total += c * (Fraction(x) ** e if e < 0 else x ** e)
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    def is_symmetric(self) -> bool:
        return all(self._terms.get(-e, 0) == c for e, c in self._terms.items())

    # comparisons, hashing, text

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.to_string()})"

    def to_string(self) -> str:
        """Serialize as sorted exponent:coefficient pairs, e.g. ``{-4:-1, -3:1, -1:1}``."""
        return "{" + ", ".join(f"{e}:{c}" for e, c in self._terms.items()) + "}"

    __str__ = to_string

    def pretty(self, var: str = "t") -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                ex = "" if e == 1 else f"^{e}" if isinstance(e, int) else f"^({e})"
                body = (f"{mag}" if mag != 1 else "") + var + ex
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    _PAIR = re.compile(r"\s*([+-]?\d+(?:/\d+)?)\s*:\s*([+-]?\d+)\s*")

    @classmethod
    def from_string(cls, text: str) -> LaurentPolynomial:
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"expected {{exp:coeff, ...}}, got {text!r}")
        body = body[1:-1].strip()
        terms: dict = {}
        if body:
            for chunk in body.split(","):
                m = cls._PAIR.fullmatch(chunk)
                if not m:
                    raise ValueError(f"bad term {chunk!r} in {text!r}")
                e = _norm_exp(Fraction(m.group(1)))
                terms[e] = terms.get(e, 0) + int(m.group(2))
        return cls(terms)


T = LaurentPolynomial.monomial(1)
ONE = LaurentPolynomial.constant(1)
ZERO = LaurentPolynomial()


class LaurentMatrix:
    """Square matrix of Laurent polynomials (row-major tuple of tuples)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(x if isinstance(x, LaurentPolynomial) else LaurentPolynomial.constant(x) for x in r)
                     for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("LaurentMatrix must be square")
        self.rows = rows

    @classmethod
    def identity(cls, d: int) -> LaurentMatrix:
        return cls([[ONE if i == j else ZERO for j in range(d)] for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "LaurentMatrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"

    def __mul__(self, other: LaurentMatrix) -> LaurentMatrix:
        d = self.dim
        if other.dim != d:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = ZERO
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __sub__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def det(self) -> LaurentPolynomial:
        """Fraction-free (Bareiss) elimination; every division is exact."""
        d = self.dim
        if d == 0:
            return ONE
        m = [list(r) for r in self.rows]
        sign = 1
        prev = ONE
        for k in range(d - 1):
            if m[k][k].is_zero():
                for r in range(k + 1, d):
                    if not m[r][k].is_zero():
                        m[k], m[r] = m[r], m[k]
                        sign = -sign
                        break
                else:
                    return ZERO
            for i in range(k + 1, d):
                for j in range(k + 1, d):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_divide(prev)
            prev = m[k][k]
        return m[d - 1][d - 1] if sign > 0 else -m[d - 1][d - 1]
