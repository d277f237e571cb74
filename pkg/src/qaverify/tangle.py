"""Rational tangle arithmetic: extended rationals, continued fractions, Montesinos data.

Continued fractions use the subtractive convention

    [a_1, a_2, ..., a_k] = a_1 - 1/(a_2 - 1/(... - 1/a_k))

so that, for example, [6, -2] = 13/2 and [0, 1, -2] = -2/3.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class TangleError(ValueError):
    pass


_FRACTION = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?")


@dataclass(frozen=True, order=False)
class ExtendedRational:
    """p/q in lowest terms with q >= 0; infinity is exactly (1, 0)."""

    p: int
    q: int = 1

    def __post_init__(self) -> None:
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise TangleError("0/0 is not an extended rational")
        if q == 0:
            p = 1
        else:
            g = math.gcd(p, q)
            p, q = p // g, q // g
            if q < 0:
                p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def infinity(cls) -> ExtendedRational:
        return cls(1, 0)

    @classmethod
    def coerce(cls, value: RationalLike) -> ExtendedRational:
        if isinstance(value, ExtendedRational):
            return value
        if isinstance(value, int):
            return cls(value, 1)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot make an extended rational from {value!r}")

    @classmethod
    def parse(cls, text: str) -> ExtendedRational:
        s = text.strip()
        if s.lower() in ("inf", "infinity", "oo", "1/0", "-1/0"):
            return cls.infinity()
        m = _FRACTION.fullmatch(s)
        if not m:
            raise TangleError(f"not a fraction: {text!r}")
        q = int(m.group(2)) if m.group(2) is not None else 1
        return cls(int(m.group(1)), q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def to_fraction(self) -> Fraction:
        if self.is_infinite:
            raise TangleError("infinity has no finite value")
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"

    def __repr__(self) -> str:
        return f"ExtendedRational({self})"

    def __neg__(self) -> ExtendedRational:
        return self if self.is_infinite else ExtendedRational(-self.p, self.q)

    def __add__(self, other: RationalLike) -> ExtendedRational:
        other = ExtendedRational.coerce(other)
        if self.is_infinite or other.is_infinite:
            if self.is_infinite and other.is_infinite:
                raise TangleError("inf + inf is undefined")
            return ExtendedRational.infinity()
        return ExtendedRational.coerce(self.to_fraction() + other.to_fraction())

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> ExtendedRational:
        return self + (-ExtendedRational.coerce(other))

    def __rsub__(self, other: RationalLike) -> ExtendedRational:
        return ExtendedRational.coerce(other) + (-self)

    def reciprocal(self) -> ExtendedRational:
        """1/x, with 1/0 = inf and 1/inf = 0."""
        if self.is_infinite:
            return ExtendedRational(0, 1)
        if self.p == 0:
            return ExtendedRational.infinity()
        return ExtendedRational(self.q, self.p)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, str)):
            try:
                other = ExtendedRational.coerce(other)
            except (TangleError, TypeError):
                return False
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        return (self.p, self.q) == (other.p, other.q)

    def __hash__(self) -> int:
        return hash((self.p, self.q))


RationalLike = Union[ExtendedRational, int, Fraction, str]
INFINITY = ExtendedRational.infinity()


# -- continued fractions -------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        terms = tuple(int(a) for a in self.terms)
        if not terms:
            raise TangleError("a continued fraction needs at least one term")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text: str) -> ContinuedFraction:
        s = text.strip()
        if s.startswith("[") and s.endswith("]"):
            s = s[1:-1]
        try:
            return cls(tuple(int(x) for x in s.split(",")))
        except ValueError as exc:
            raise TangleError(f"not a continued fraction: {text!r}") from exc

    def __str__(self) -> str:
        return "[" + ",".join(str(a) for a in self.terms) + "]"


def cf_value(c: ContinuedFraction | Sequence[int]) -> ExtendedRational:
    terms = c.terms if isinstance(c, ContinuedFraction) else tuple(c)
    if not terms:
        raise TangleError("empty continued fraction")
    # value = num/den, folded from the last term with integer arithmetic
    num, den = int(terms[-1]), 1
    for a in reversed(terms[:-1]):
        if num == 0:
            raise ZeroDivisionError(f"continued fraction {list(terms)} divides by zero")
        num, den = a * num - den, num
    return ExtendedRational(num, den)


def cf_expand(r: RationalLike) -> ContinuedFraction:
    """Greedy subtractive expansion with nearest-integer terms.

    a_1 is r rounded to the nearest integer (halves round down), then
    1/(a_1 - r) is expanded.  Each remainder is at most 1/2, so the length is
    logarithmic in the denominator; 13/2 gives [6, -2].
    """
    r = ExtendedRational.coerce(r)
    if r.is_infinite:
        raise TangleError("infinity has no continued fraction expansion")
    p, q = r.p, r.q
    terms = []
    while True:
        a = -((q - 2 * p) // (2 * q))  # ceil(p/q - 1/2)
        terms.append(a)
        if a * q == p:
            return ContinuedFraction(tuple(terms))
        p, q = q, a * q - p
        if q < 0:
            p, q = -p, -q


def montesinos_trick_fraction(coefficient: RationalLike, writhe: int) -> ExtendedRational:
    """Fraction of the rational tangle replacing the quotient arc: coefficient - writhe."""
    coefficient = ExtendedRational.coerce(coefficient)
    if coefficient.is_infinite:
        raise TangleError("coefficient must be finite")
    return coefficient - writhe


@dataclass(frozen=True)
class MontesinosPresentation:
    fractions: tuple[ExtendedRational, ...]

    def __post_init__(self) -> None:
        fr = tuple(ExtendedRational.coerce(f) for f in self.fractions)
        for f in fr:
            if f.is_infinite or f.q < 2:
                raise TangleError(f"Montesinos fraction {f} must have denominator >= 2")
        object.__setattr__(self, "fractions", fr)

    @classmethod
    def parse(cls, text: str) -> MontesinosPresentation:
        s = text.strip()
        if s[:1] in "([" and s[-1:] in ")]":
            s = s[1:-1]
        return cls(tuple(ExtendedRational.parse(x) for x in s.split(",")))

    def __str__(self) -> str:
        return "(" + ", ".join(str(f) for f in self.fractions) + ")"


def montesinos_determinant(m: MontesinosPresentation | Iterable[RationalLike]) -> int:
    """|prod(alpha_i) * sum(beta_i/alpha_i)|, the order of H_1 of the double branched cover.

    Zero means infinite first homology.
    """
    if not isinstance(m, MontesinosPresentation):
        m = MontesinosPresentation(tuple(m))
    prod = math.prod(f.q for f in m.fractions)
    total = sum((f.to_fraction() for f in m.fractions), Fraction(0))
    value = prod * total
    assert value.denominator == 1
    return abs(int(value))
