"""Braid words in the Artin braid group B_n.

A word is a tuple of nonzero integers: ``i`` is the generator sigma_i and
``-i`` its inverse, with 1 <= i <= n-1.  All operations are letter-level and
return new immutable values; deciding group equality is delegated to
:mod:`qaverify.wordproblem`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class BraidError(ValueError):
    """Malformed braid word or an operation applied outside its domain."""


class WordSyntaxError(BraidError):
    """A word expression could not be parsed."""

    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.position = position
        self.text = text


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise BraidError(f"strand count must be >= 1, got {self.strands}")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.strands - 1:
                raise BraidError(f"letter {x} out of range for B_{self.strands}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        return compose(self, other)

    def __pow__(self, k: int) -> BraidWord:
        return power(self, k)

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.letters) + "]"

    @classmethod
    def parse(cls, strands: int, text: str) -> BraidWord:
        return expand(text, strands)


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}; ``images[k-1]`` is the image of k."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise BraidError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        return Permutation(tuple(other.images[p - 1] for p in self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, len(self.images) + 1):
            if start in seen:
                continue
            cyc = []
            k = start
            while k not in seen:
                seen.add(k)
                cyc.append(k)
                k = self(k)
            out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(p == k for k, p in enumerate(self.images, 1))


def _same_strands(u: BraidWord, v: BraidWord) -> None:
    if u.strands != v.strands:
        raise BraidError(f"strand mismatch: B_{u.strands} vs B_{v.strands}")


def compose(u: BraidWord, v: BraidWord) -> BraidWord:
    _same_strands(u, v)
    return BraidWord(u.strands, u.letters + v.letters)


def inverse(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(-x for x in reversed(w.letters)))


def power(w: BraidWord, k: int) -> BraidWord:
    base = w if k >= 0 else inverse(w)
    return BraidWord(w.strands, base.letters * abs(k))


def free_reduce_letters(letters: Iterable[int]) -> list[int]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def free_reduce(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(free_reduce_letters(w.letters)))


def conjugate(w: BraidWord, a: BraidWord) -> BraidWord:
    """Return a^-1 w a, without any simplification."""
    _same_strands(w, a)
    return BraidWord(w.strands, inverse(a).letters + w.letters + a.letters)


def flip(w: BraidWord) -> BraidWord:
    """Rename sigma_i to sigma_{n-i}; this is conjugation by the half twist."""
    n = w.strands
    return BraidWord(n, tuple((n - x) if x > 0 else -(n + x) for x in w.letters))


def mirror(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(-x for x in w.letters))


def reverse(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple(reversed(w.letters)))


def half_twist(n: int) -> BraidWord:
    """Positive half twist (sigma_1 ... sigma_{n-1})(sigma_1 ... sigma_{n-2}) ... sigma_1."""
    letters: list[int] = []
    for top in range(n - 1, 0, -1):
        letters.extend(range(1, top + 1))
    return BraidWord(n, tuple(letters))


def full_twist(n: int, k: int = 1) -> BraidWord:
    if n < 2:
        raise BraidError("full twist needs at least 2 strands")
    return power(BraidWord(n, tuple(range(1, n)) * n), k)


def permutation(w: BraidWord) -> Permutation:
    # position p -> current strand label; sigma_i swaps positions i and i+1
    at = list(range(w.strands + 1))
    for x in w.letters:
        i = abs(x)
        at[i], at[i + 1] = at[i + 1], at[i]
    # strand starting at position at[p] ends at position p
    images = [0] * w.strands
    for p in range(1, w.strands + 1):
        images[at[p] - 1] = p
    return Permutation(tuple(images))


def exponent_sum(w: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in w.letters)


def stabilize(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands + 1, w.letters + (w.strands,))


def destabilize(w: BraidWord) -> BraidWord:
    """Inverse Markov move; the last letter must be the only occurrence of sigma_{n-1}^{+-1}."""
    n = w.strands
    if n < 2 or not w.letters:
        raise BraidError("nothing to destabilize")
    top = n - 1
    last = w.letters[-1]
    if abs(last) != top or any(abs(x) == top for x in w.letters[:-1]):
        raise BraidError(f"sigma_{top} must occur exactly once, as the last letter")
    return BraidWord(n - 1, w.letters[:-1])


# -- word expressions ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>[+-]?\d+)|(?P<sym>[(),^\[\]]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError("unexpected character", pos, text)
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), m.start("int")))
        else:
            tokens.append((m.group("sym"), m.group("sym"), m.start("sym")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            found = self.peek() or "end of input"
            raise WordSyntaxError(f"expected {kind!r}, found {found!r}", self.pos(), self.text)
        tok = self.tokens[self.i][1]
        self.i += 1
        return tok

    def parse(self) -> list[int]:
        if self.peek() is None:
            return []
        if self.peek() == "[":
            self.take("[")
            letters = self.sequence(closing="]")
            self.take("]")
        else:
            letters = self.sequence(closing=None)
        if self.peek() is not None:
            raise WordSyntaxError("trailing input", self.pos(), self.text)
        return letters

    def sequence(self, closing: str | None) -> list[int]:
        if self.peek() == closing:
            return []
        out = self.item()
        while self.peek() == ",":
            self.take(",")
            out.extend(self.item())
        return out

    def item(self) -> list[int]:
        if self.peek() == "int":
            value = int(self.take("int"))
            if value == 0:
                raise WordSyntaxError("zero is not a braid letter", self.pos(), self.text)
            group = [value]
        elif self.peek() == "(":
            self.take("(")
            group = self.sequence(closing=")")
            self.take(")")
        else:
            found = self.peek() or "end of input"
            raise WordSyntaxError(f"expected letter or group, found {found!r}", self.pos(), self.text)
        if self.peek() == "^":
            self.take("^")
            k = int(self.take("int"))
            group = group * k if k >= 0 else [-x for x in reversed(group)] * (-k)
        return group


def parse_letters(text: str) -> list[int]:
    """Flatten a word expression such as ``(1,2,3)^8,-2,-1`` into letters."""
    return _Parser(text).parse()


def expand(text: str, strands: int | None = None) -> BraidWord:
    """Parse a word expression; with no strand count, use the smallest that fits."""
    letters = parse_letters(text)
    if strands is None:
        strands = max((abs(x) for x in letters), default=0) + 1
    return BraidWord(strands, tuple(letters))


def format_letters(letters: Sequence[int]) -> str:
    return ",".join(str(x) for x in letters)
