"""Deciding triviality in B_n.

Two independent procedures:

* handle reduction (Dehornoy), the default: repeatedly reduce the handle with
  the leftmost right end until the word is empty or handle free.  A handle
  free nonempty word is sigma-positive or sigma-negative, hence nontrivial.
* the left greedy (Garside) normal form, computed with permutation braids as
  simple elements.  Used as a cross-check.
"""

from __future__ import annotations

from typing import Sequence

from .braid import BraidError, BraidWord, compose, exponent_sum, inverse, permutation

DEFAULT_STEP_CAP = 10_000_000


class UndecidedError(RuntimeError):
    """The reduction step cap was hit before a verdict was reached."""

    def __init__(self, steps: int):
        super().__init__(f"handle reduction exceeded {steps} steps")
        self.steps = steps


def handle_reduce(letters: Sequence[int], cap: int = DEFAULT_STEP_CAP) -> list[int]:
    """Reduce all handles; the result is empty iff the input is trivial.

    ``cap`` bounds the number of letters rewritten, summed over all
    reductions.
    """
    w = list(letters)
    steps = 0
    j = 1
    while j < len(w):
        x = w[j]
        i = abs(x)
        k = j - 1
        while k >= 0 and abs(w[k]) > i:
            k -= 1
        if k < 0 or w[k] != -x:
            j += 1
            continue
        # w[k] .. w[j] is a sigma_i-handle; every inner letter has index > i
        e = 1 if w[k] > 0 else -1
        up = i + 1
        middle: list[int] = []
        for y in w[k + 1 : j]:
            if abs(y) == up:
                s = 1 if y > 0 else -1
                for z in (-e * up, s * i, e * up):
                    if middle and middle[-1] == -z:
                        middle.pop()
                    else:
                        middle.append(z)
            else:
                if middle and middle[-1] == -y:
                    middle.pop()
                else:
                    middle.append(y)
        steps += j - k + 1
        if steps > cap:
            raise UndecidedError(cap)
        w[k : j + 1] = middle
        # no handle ends before k; resume just after it
        j = max(k, 1)
    return w


# -- Garside normal form ----------------------------------------------------
# A simple element is stored as a tuple ``p`` with p[a] = final position of the
# strand starting at position a (0-indexed).  Product xy means x then y.


def _simple_times_gen(p: tuple[int, ...], i: int) -> tuple[int, ...]:
    # right multiply by sigma_i (0-indexed positions i, i+1)
    return tuple(i + 1 if q == i else i if q == i + 1 else q for q in p)


def _gen_inverse_times_simple(p: tuple[int, ...], i: int) -> tuple[int, ...]:
    # sigma_i^-1 * p, valid when sigma_i is a left divisor of p
    q = list(p)
    q[i], q[i + 1] = q[i + 1], q[i]
    return tuple(q)


def _left_weight(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Move generators from the front of b to the back of a until (a, b) is left weighted."""
    n = len(a)
    changed = True
    while changed:
        changed = False
        inv = [0] * n
        for pos, img in enumerate(a):
            inv[img] = pos
        for i in range(n - 1):
            if b[i] > b[i + 1] and inv[i] < inv[i + 1]:
                a = _simple_times_gen(a, i)
                b = _gen_inverse_times_simple(b, i)
                changed = True
                break
    return a, b


def _renormalize(factors: list[tuple[int, ...]], ident: tuple[int, ...]) -> None:
    """Sweep right to left making adjacent pairs left weighted, until stable."""
    dirty = True
    while dirty:
        dirty = False
        k = len(factors) - 2
        while k >= 0:
            a, b = _left_weight(factors[k], factors[k + 1])
            if (a, b) != (factors[k], factors[k + 1]):
                factors[k], factors[k + 1] = a, b
                dirty = True
                if b == ident:
                    del factors[k + 1]
            elif not dirty:
                # untouched pair on the first sweep: everything left of it is already normal
                break
            k -= 1


def _tau(p: tuple[int, ...]) -> tuple[int, ...]:
    n = len(p)
    return tuple(n - 1 - p[n - 1 - a] for a in range(n))


def left_normal_form(w: BraidWord) -> tuple[int, list[tuple[int, ...]]]:
    """Return (inf, factors) with w = Delta^inf * factors[0] * ... in left normal form."""
    n = w.strands
    ident = tuple(range(n))
    delta = tuple(range(n - 1, -1, -1))
    if n == 1:
        return 0, []
    # sigma_i^-1 = Delta^-1 * X_i with X_i = Delta sigma_i^-1 simple; push every
    # Delta^-1 to the front, applying tau to the factors it crosses
    raw: list[tuple[int, ...]] = []
    for x in w.letters:
        i = abs(x) - 1
        if x > 0:
            raw.append(_simple_times_gen(ident, i))
        else:
            raw.append(tuple(i + 1 if d == i else i if d == i + 1 else d for d in delta))
    # the Delta^-1 attached to a negative letter sits to the left of its factor,
    # so that factor itself is not conjugated by it
    fixed: list[tuple[int, ...]] = []
    seen_right = 0
    for x, f in zip(reversed(w.letters), reversed(raw)):
        fixed.append(_tau(f) if seen_right % 2 else f)
        if x < 0:
            seen_right += 1
    fixed.reverse()
    inf = -seen_right

    factors: list[tuple[int, ...]] = []
    for f in fixed:
        if f == ident:
            continue
        factors.append(f)
        _renormalize(factors, ident)
    while factors and factors[0] == delta:
        factors.pop(0)
        inf += 1
    while factors and factors[-1] == ident:
        factors.pop()
    return inf, factors


# -- public decision procedures --------------------------------------------


def is_trivial(w: BraidWord, method: str = "handle", cap: int = DEFAULT_STEP_CAP) -> bool:
    """Decide whether ``w`` is the identity of B_n.

    ``method`` is ``"handle"`` (handle reduction) or ``"garside"``.  Raises
    :class:`UndecidedError` when handle reduction exceeds ``cap`` steps.
    """
    if method == "handle":
        return not handle_reduce(w.letters, cap)
    if method == "garside":
        inf, factors = left_normal_form(w)
        return inf == 0 and not factors
    raise ValueError(f"unknown method {method!r}")


def equals(u: BraidWord, v: BraidWord, method: str = "handle", cap: int = DEFAULT_STEP_CAP) -> bool:
    if u.strands != v.strands:
        raise BraidError(f"strand mismatch: B_{u.strands} vs B_{v.strands}")
    if exponent_sum(u) != exponent_sum(v) or permutation(u) != permutation(v):
        return False
    return is_trivial(compose(u, inverse(v)), method=method, cap=cap)
