"""Rolfsen twist calculus on rational surgery presentations.

A presentation is a list of unknotted (declared, not computed) components with
extended rational coefficients and a symmetric integer linking matrix.  Only
coefficients, linking numbers and the order of first homology are tracked;
the knot types of components are not.

Script files are JSON::

    {
      "components": [{"id": "C0", "coeff": "5/2", "unknotted": true}, ...],
      "linking": [[0, 1, 3], [1, 0, 3], [3, 3, 0]],
      "moves": [{"target": "C1", "t": -2}, {"target": "C1", "delete": true}, ...],
      "assert": [{"after": 0, "coeffs": {"C1": "inf", "C2": "-19"}}, ...]
    }

``after`` is a 0-based move index; ``-1`` asserts on the initial
presentation.  ``assert`` may also be a single object.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence, Union

import numpy as np

from .tangle import ExtendedRational, RationalLike


class SurgeryError(ValueError):
    """A move was applied outside its domain, or a presentation is malformed."""


class ScriptAssertionError(SurgeryError):
    def __init__(self, after: int, component: str, expected: ExtendedRational, actual: ExtendedRational | None):
        super().__init__(f"after move {after}: {component} expected {expected}, got {actual}")
        self.after = after
        self.component = component
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True)
class SurgeryComponent:
    id: str
    coeff: ExtendedRational
    unknotted: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", ExtendedRational.coerce(self.coeff))


@dataclass(frozen=True)
class SurgeryPresentation:
    components: tuple[SurgeryComponent, ...]
    linking: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        lk = tuple(tuple(int(x) for x in row) for row in self.linking)
        n = len(comps)
        if len(lk) != n or any(len(r) != n for r in lk):
            raise SurgeryError(f"linking matrix must be {n}x{n}")
        for i in range(n):
            if lk[i][i] != 0:
                raise SurgeryError("linking matrix diagonal must be zero")
            for j in range(i):
                if lk[i][j] != lk[j][i]:
                    raise SurgeryError("linking matrix must be symmetric")
        ids = [c.id for c in comps]
        if len(set(ids)) != n:
            raise SurgeryError(f"duplicate component ids in {ids}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "linking", lk)

    @classmethod
    def build(cls, coeffs: Sequence[RationalLike], linking: Sequence[Sequence[int]],
              ids: Sequence[str] | None = None, unknotted: Sequence[bool] | None = None) -> SurgeryPresentation:
        ids = list(ids) if ids is not None else [f"C{k}" for k in range(len(coeffs))]
        flags = list(unknotted) if unknotted is not None else [True] * len(coeffs)
        comps = tuple(SurgeryComponent(i, ExtendedRational.coerce(c), f) for i, c, f in zip(ids, coeffs, flags))
        return cls(comps, tuple(tuple(r) for r in linking))

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.components]

    def index(self, u: str) -> int:
        for k, c in enumerate(self.components):
            if c.id == u:
                return k
        raise SurgeryError(f"no component {u!r} (have {self.ids})")

    def coeff(self, u: str) -> ExtendedRational:
        return self.components[self.index(u)].coeff

    def coefficients(self) -> dict[str, ExtendedRational]:
        return {c.id: c.coeff for c in self.components}

    def lk(self, u: str, v: str) -> int:
        return self.linking[self.index(u)][self.index(v)]

    def __len__(self) -> int:
        return len(self.components)


EMPTY = SurgeryPresentation((), ())


def rolfsen_twist(P: SurgeryPresentation, u: str, t: int) -> SurgeryPresentation:
    k = P.index(u)
    target = P.components[k]
    if not target.unknotted:
        raise SurgeryError(f"{u} is not flagged unknotted")
    if target.coeff.is_infinite:
        raise SurgeryError(f"cannot twist along {u}: coefficient is inf")
    if t == 0:
        return P
    lam = [row[k] for row in P.linking]
    comps = []
    for i, c in enumerate(P.components):
        if i == k:
            new = ExtendedRational(c.coeff.p, c.coeff.q + t * c.coeff.p)
        elif c.coeff.is_infinite:
            new = c.coeff
        else:
            new = c.coeff + t * lam[i] * lam[i]
        comps.append(SurgeryComponent(c.id, new, c.unknotted))
    n = len(P)
    lk = [list(r) for r in P.linking]
    for i in range(n):
        for j in range(n):
            if i != j and i != k and j != k:
                lk[i][j] += t * lam[i] * lam[j]
    return SurgeryPresentation(tuple(comps), tuple(tuple(r) for r in lk))


def delete_infinity(P: SurgeryPresentation, u: str) -> SurgeryPresentation:
    k = P.index(u)
    if not P.components[k].coeff.is_infinite:
        raise SurgeryError(f"cannot delete {u}: coefficient {P.components[k].coeff} is not inf")
    keep = [i for i in range(len(P)) if i != k]
    return SurgeryPresentation(
        tuple(P.components[i] for i in keep),
        tuple(tuple(P.linking[i][j] for j in keep) for i in keep),
    )


def integer_det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def presentation_matrix(P: SurgeryPresentation) -> list[list[int]]:
    n = len(P)
    return [[P.components[i].coeff.p if i == j else P.components[i].coeff.q * P.linking[i][j]
             for j in range(n)] for i in range(n)]


def h1_order(P: SurgeryPresentation) -> int:
    """|H_1| of the surgered manifold; 0 means H_1 is infinite."""
    return abs(integer_det(presentation_matrix(P)))


# -- scripts -----------------------------------------------------------------


@dataclass(frozen=True)
class Twist:
    target: str
    t: int

    def apply(self, P: SurgeryPresentation) -> SurgeryPresentation:
        return rolfsen_twist(P, self.target, self.t)

    def __str__(self) -> str:
        return f"twist {self.target} by {self.t:+d}"


@dataclass(frozen=True)
class Delete:
    target: str

    def apply(self, P: SurgeryPresentation) -> SurgeryPresentation:
        return delete_infinity(P, self.target)

    def __str__(self) -> str:
        return f"delete {self.target}"


Move = Union[Twist, Delete]


@dataclass(frozen=True)
class Assertion:
    after: int
    coeffs: tuple[tuple[str, ExtendedRational], ...]

    @classmethod
    def of(cls, after: int, coeffs: Mapping[str, RationalLike]) -> Assertion:
        return cls(after, tuple((k, ExtendedRational.coerce(v)) for k, v in coeffs.items()))


@dataclass(frozen=True)
class TwistScript:
    initial: SurgeryPresentation
    moves: tuple[Move, ...] = ()
    assertions: tuple[Assertion, ...] = ()

    def __post_init__(self) -> None:
        for a in self.assertions:
            if not -1 <= a.after < len(self.moves):
                raise SurgeryError(f"assertion after move {a.after} is out of range")


@dataclass
class AssertionVerdict:
    after: int
    component: str
    expected: ExtendedRational
    actual: ExtendedRational | None
    ok: bool


@dataclass
class ScriptReport:
    steps: list[tuple[int, str, dict[str, ExtendedRational]]] = field(default_factory=list)
    verdicts: list[AssertionVerdict] = field(default_factory=list)
    error: str | None = None

    @property
    def failures(self) -> list[AssertionVerdict]:
        return [v for v in self.verdicts if not v.ok]

    @property
    def ok(self) -> bool:
        return self.error is None and not self.failures


def _check(P: SurgeryPresentation, after: int, assertions: Iterable[Assertion],
           report: ScriptReport, strict: bool) -> None:
    for a in assertions:
        if a.after != after:
            continue
        have = P.coefficients()
        for comp, expected in a.coeffs:
            actual = have.get(comp)
            verdict = AssertionVerdict(after, comp, expected, actual, actual == expected)
            report.verdicts.append(verdict)
            if strict and not verdict.ok:
                raise ScriptAssertionError(after, comp, expected, actual)


def run_script(s: TwistScript, strict: bool = True) -> tuple[SurgeryPresentation, ScriptReport]:
    """Apply the moves in order, checking assertions.

    With ``strict`` the first failed assertion or invalid move raises.
    Otherwise assertion failures are collected and an invalid move stops the
    run with ``report.error`` set; the presentation reached so far is
    returned.
    """
    report = ScriptReport()
    P = s.initial
    _check(P, -1, s.assertions, report, strict)
    for idx, move in enumerate(s.moves):
        try:
            P = move.apply(P)
        except SurgeryError as exc:
            if strict:
                raise SurgeryError(f"move {idx} ({move}): {exc}") from exc
            report.error = f"move {idx} ({move}): {exc}"
            return P, report
        report.steps.append((idx, str(move), P.coefficients()))
        _check(P, idx, s.assertions, report, strict)
    return P, report


# -- JSON format ---------------------------------------------------------------


def move_from_json(obj: Mapping[str, Any]) -> Move:
    if "target" not in obj:
        raise SurgeryError(f"move without target: {obj}")
    if obj.get("delete"):
        return Delete(str(obj["target"]))
    if "t" in obj:
        return Twist(str(obj["target"]), int(obj["t"]))
    raise SurgeryError(f"move needs 't' or 'delete': {obj}")


def move_to_json(m: Move) -> dict[str, Any]:
    if isinstance(m, Delete):
        return {"target": m.target, "delete": True}
    return {"target": m.target, "t": m.t}


def script_from_json(obj: Mapping[str, Any]) -> TwistScript:
    comps = tuple(
        SurgeryComponent(str(c["id"]), ExtendedRational.coerce(str(c["coeff"])), bool(c.get("unknotted", True)))
        for c in obj["components"]
    )
    linking = obj.get("linking")
    if linking is None:
        linking = [[0] * len(comps) for _ in comps]
    moves = tuple(move_from_json(m) for m in obj.get("moves", []))
    raw = obj.get("assert", [])
    if isinstance(raw, Mapping):
        raw = [raw]
    assertions = tuple(Assertion.of(int(a["after"]), {k: str(v) for k, v in a["coeffs"].items()}) for a in raw)
    return TwistScript(SurgeryPresentation(comps, tuple(tuple(r) for r in linking)), moves, assertions)


def script_to_json(s: TwistScript) -> dict[str, Any]:
    return {
        "components": [{"id": c.id, "coeff": str(c.coeff), "unknotted": c.unknotted} for c in s.initial.components],
        "linking": [list(r) for r in s.initial.linking],
        "moves": [move_to_json(m) for m in s.moves],
        "assert": [{"after": a.after, "coeffs": {k: str(v) for k, v in a.coeffs}} for a in s.assertions],
    }


# -- linking matrix fitting ------------------------------------------------------


@dataclass(frozen=True)
class FitConstraint:
    """One proof chain on a link: initial coefficients, moves, assertions, and |H_1|."""

    coeffs: tuple[ExtendedRational, ...]
    moves: tuple[Move, ...] = ()
    assertions: tuple[Assertion, ...] = ()
    h1: int | None = None

    def script(self, ids: Sequence[str], unknotted: Sequence[bool], linking) -> TwistScript:
        P = SurgeryPresentation.build(self.coeffs, linking, ids, unknotted)
        return TwistScript(P, self.moves, self.assertions)


def _matrix_from_upper(n: int, upper: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    m = [[0] * n for _ in range(n)]
    for (i, j), v in zip(itertools.combinations(range(n), 2), upper):
        m[i][j] = m[j][i] = int(v)
    return tuple(tuple(r) for r in m)


def satisfies(ids: Sequence[str], unknotted: Sequence[bool], linking, constraints: Iterable[FitConstraint]) -> bool:
    """Exact check of one candidate matrix against every constraint."""
    for c in constraints:
        s = c.script(ids, unknotted, linking)
        if c.h1 is not None and h1_order(s.initial) != c.h1:
            return False
        try:
            _, report = run_script(s, strict=False)
        except SurgeryError:
            return False
        if not report.ok:
            return False
    return True


_SAFE = 1 << 18  # beyond this, int64 products in the next twist might overflow


def _simulate(c: FitConstraint, ids: Sequence[str], lk: dict[tuple[int, int], np.ndarray]
              ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized run of one constraint over candidate linking matrices.

    Returns (ok, suspect) boolean masks.  Suspect rows grew too large for
    int64 arithmetic and must be rechecked exactly.  Failed rows are dropped
    after every move so later moves only touch live candidates.
    """
    size = next(iter(lk.values())).shape[0]
    n = len(ids)
    pos = {name: k for k, name in enumerate(ids)}
    ok_out = np.zeros(size, dtype=bool)
    suspect_out = np.zeros(size, dtype=bool)
    rows = np.arange(size)
    p = {k: np.full(size, c.coeffs[k].p, dtype=np.int64) for k in range(n)}
    q = {k: np.full(size, c.coeffs[k].q, dtype=np.int64) for k in range(n)}
    L = {(i, j): lk[(i, j)].copy() for i, j in itertools.combinations(range(n), 2)}
    alive = list(range(n))

    def link(i: int, j: int) -> np.ndarray:
        return L[(i, j)] if i < j else L[(j, i)]

    def keep(mask: np.ndarray) -> None:
        nonlocal rows
        rows = rows[mask]
        for d in (p, q, L):
            for key in d:
                d[key] = d[key][mask]

    def check(after: int) -> bool:
        mask = np.ones(rows.shape[0], dtype=bool)
        for a in c.assertions:
            if a.after != after:
                continue
            for comp, e in a.coeffs:
                k = pos.get(comp)
                if k is None or k not in alive:
                    return False
                mask &= p[k] * e.q == e.p * q[k]
        keep(mask)
        return True

    if not check(-1):
        return ok_out, suspect_out
    for idx, move in enumerate(c.moves):
        if rows.shape[0] == 0:
            break
        k = pos.get(move.target)
        if k is None or k not in alive:
            return ok_out, suspect_out
        if isinstance(move, Delete):
            keep(q[k] == 0)
            alive.remove(k)
        else:
            t = move.t
            big = np.zeros(rows.shape[0], dtype=bool)
            for i in alive:
                big |= (np.abs(p[i]) > _SAFE) | (q[i] > _SAFE)
            for i, j in itertools.combinations(alive, 2):
                big |= np.abs(link(i, j)) > _SAFE
            suspect_out[rows[big]] = True
            keep(~big & (q[k] != 0))
            qk = q[k] + t * p[k]
            pk = np.where(qk < 0, -p[k], p[k])
            qk = np.abs(qk)
            p[k] = np.where(qk == 0, 1, pk)
            q[k] = qk
            lam = {i: link(i, k) for i in alive if i != k}
            for i, li in lam.items():
                p[i] = p[i] + t * li * li * q[i]
            for i, j in itertools.combinations(lam, 2):
                L[(min(i, j), max(i, j))] = link(i, j) + t * lam[i] * lam[j]
        if not check(idx):
            return ok_out, suspect_out
    ok_out[rows] = True
    return ok_out, suspect_out


def _h1_vectorized(c: FitConstraint, n: int, lk: dict[tuple[int, int], np.ndarray]) -> np.ndarray:
    size = next(iter(lk.values())).shape[0]
    entries = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                entries[i][j] = np.full(size, c.coeffs[i].p, dtype=np.int64)
            else:
                entries[i][j] = c.coeffs[i].q * lk[(min(i, j), max(i, j))]
    det = np.zeros(size, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = np.ones(size, dtype=np.int64)
        for i, j in enumerate(perm):
            term = term * entries[i][j]
        det = det - term if inversions % 2 else det + term
    return np.abs(det) == c.h1


def _canonical_key(upper: tuple[int, ...]) -> tuple:
    return (sum(abs(v) for v in upper), tuple((abs(v), v < 0) for v in upper))


def fit_linking_matrix(ids: Sequence[str], constraints: Sequence[FitConstraint], bound: int = 10,
                       unknotted: Sequence[bool] | None = None, chunk: int = 1 << 20
                       ) -> list[tuple[tuple[int, ...], ...]]:
    """All symmetric zero-diagonal matrices with entries in [-bound, bound] meeting every constraint.

    The search is exhaustive; numpy filters candidates in chunks and every
    survivor is confirmed with exact arithmetic.  Solutions are sorted by
    total absolute linking, then entrywise.
    """
    n = len(ids)
    flags = list(unknotted) if unknotted is not None else [True] * n
    pairs = list(itertools.combinations(range(n), 2))
    m = len(pairs)
    if m == 0:
        return [tuple(tuple(0 for _ in range(n)) for _ in range(n))] if satisfies(ids, flags, [[0] * n] * n, constraints) else []
    base = 2 * bound + 1
    total = base ** m
    # h1 checks need n! terms per candidate; with many components use exact checks instead
    use_vector_h1 = n <= 5
    found: set[tuple[int, ...]] = set()
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = []
        rest = idx
        for _ in range(m):
            digits.append(rest % base - bound)
            rest = rest // base
        lk = {pair: d for pair, d in zip(pairs, digits)}
        keep = np.ones(idx.shape[0], dtype=bool)
        exact = np.zeros(idx.shape[0], dtype=bool)
        # chain simulation prunes hard and is cheap; determinants only on survivors
        for c in constraints:
            sel = np.nonzero(keep)[0]
            if sel.size == 0:
                break
            ok, suspect = _simulate(c, ids, {k: v[sel] for k, v in lk.items()})
            exact[sel[suspect]] = True
            keep[sel[~ok]] = False
        for c in constraints:
            sel = np.nonzero(keep)[0]
            if c.h1 is None or not use_vector_h1 or sel.size == 0:
                continue
            keep[sel[~_h1_vectorized(c, n, {k: v[sel] for k, v in lk.items()})]] = False
        for r in np.nonzero(keep | exact)[0]:
            upper = tuple(int(d[r]) for d in digits)
            if satisfies(ids, flags, _matrix_from_upper(n, upper), constraints):
                found.add(upper)
    return [_matrix_from_upper(n, u) for u in sorted(found, key=_canonical_key)]


def upper_entries(linking: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(linking)
    return tuple(linking[i][j] for i, j in itertools.combinations(range(n), 2))
