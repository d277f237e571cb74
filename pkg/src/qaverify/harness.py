"""Runs every corpus check and assembles a deterministic report.

Per case: the braid chain from the surgery-side word to a labelled word,
the census chain from the tabulated word to the same label, mirror parity,
invariant cross-checks, the twist script, |H_1| = slope, the quotient-side
script and the tangle arithmetic.  Per knot: closure is a knot, L-space
Alexander form, genus, the census chain, and agreement of the two cases.

Verdicts are ``pass``, ``fail`` or ``undecided``.  Undecided means a
reduction cap or the per-case time budget ran out; it is never reported as
a failure.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Mapping, Sequence

from .braid import (BraidError, BraidWord, conjugate, destabilize, expand, flip, format_letters,
                    free_reduce, mirror, reverse, stabilize)
from .corpus import Corpus, CorpusError, assertions_from_json, initial_presentation
from .invariants import (InvariantError, alexander, closure_component_count, genus_positive_braid,
                         is_lspace_alexander_form, jones)
from .laurent import LaurentPolynomial
from .surgery import SurgeryError, TwistScript, h1_order, move_from_json, run_script
from .tangle import (ContinuedFraction, ExtendedRational, MontesinosPresentation, TangleError, cf_value,
                     montesinos_determinant, montesinos_trick_fraction)
from .wordproblem import DEFAULT_STEP_CAP, UndecidedError, equals

PASS, FAIL, UNDECIDED = "pass", "fail", "undecided"
DEFAULT_TIMEOUT = 120.0

KNOT_CHECKS = ("cases-agree", "census-chain", "genus", "knot-closure", "lspace-form")


@dataclass(frozen=True)
class CheckResult:
    case: str
    check: str
    verdict: str
    expected: str = ""
    actual: str = ""
    detail: str = ""

    def to_json(self) -> dict[str, str]:
        d = {"case": self.case, "check": self.check, "verdict": self.verdict,
             "expected": self.expected, "actual": self.actual}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)
    case_ids: list[str] = field(default_factory=list)
    knot_ids: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.results.sort(key=lambda r: (r.case, r.check))

    def verdict_of(self, name: str) -> str:
        vs = {r.verdict for r in self.results if r.case == name}
        if FAIL in vs:
            return FAIL
        if UNDECIDED in vs:
            return UNDECIDED
        return PASS

    def case_verdicts(self) -> dict[str, str]:
        return {c: self.verdict_of(c) for c in sorted(self.case_ids)}

    def knot_verdicts(self) -> dict[str, str]:
        return {k: self.verdict_of(k) for k in sorted(self.knot_ids)}

    @property
    def exit_code(self) -> int:
        vs = {r.verdict for r in self.results}
        if FAIL in vs:
            return 1
        if UNDECIDED in vs:
            return 3
        return 0

    def summary(self) -> dict[str, Any]:
        cv = self.case_verdicts()
        kv = self.knot_verdicts()
        return {
            "cases": len(cv),
            "cases_passed": sum(v == PASS for v in cv.values()),
            "knots": len(kv),
            "knots_passed": sum(v == PASS for v in kv.values()),
            "checks": len(self.results),
            "failed": sum(r.verdict == FAIL for r in self.results),
            "undecided": sum(r.verdict == UNDECIDED for r in self.results),
        }

    def to_json(self) -> dict[str, Any]:
        return {"summary": self.summary(), "checks": [r.to_json() for r in self.results]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            line = f"{r.verdict.upper():9} {r.case:14} {r.check:17}"
            if r.verdict != PASS:
                line += f" expected {r.expected}; got {r.actual}"
                if r.detail:
                    line += f" ({r.detail})"
            lines.append(line.rstrip())
        s = self.summary()
        lines.append(f"{s['cases_passed']}/{s['cases']} cases passed, {s['knots_passed']}/{s['knots']} knots passed, "
                     f"{s['failed']} failed checks, {s['undecided']} undecided")
        return "\n".join(lines) + "\n"


# -- braid chains ---------------------------------------------------------------------


class StepFailure(Exception):
    def __init__(self, index: int, op: str, message: str, expected: str = "", actual: str = ""):
        super().__init__(f"step {index} ({op}): {message}")
        self.index = index
        self.op = op
        self.expected = expected
        self.actual = actual


class StepUndecided(Exception):
    pass


class CaseTimeout(Exception):
    pass


class Clock:
    def __init__(self, budget: float | None):
        self.deadline = None if budget is None else time.monotonic() + budget

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise CaseTimeout()


@lru_cache(maxsize=512)
def _alexander(w: BraidWord) -> LaurentPolynomial:
    return alexander(w)


@lru_cache(maxsize=512)
def _jones(w: BraidWord) -> LaurentPolynomial:
    return jones(w)


def _same_invariants(a: BraidWord, b: BraidWord, mirrored: bool) -> str | None:
    """None if the closures agree on Alexander and Jones (b read through the mirror if asked)."""
    if closure_component_count(a) != 1 or closure_component_count(b) != 1:
        return "closures are not both knots"
    if _alexander(a) != _alexander(b):
        return f"Alexander differs: {_alexander(a).to_string()} vs {_alexander(b).to_string()}"
    jb = _jones(b).substitute_power(-1) if mirrored else _jones(b)
    if _jones(a) != jb:
        return f"Jones differs: {_jones(a).to_string()} vs {jb.to_string()}"
    return None


@dataclass
class ChainOutcome:
    word: BraidWord
    parity: int
    reached: dict[str, int]


def resolve(expr: str, labels: Mapping[str, Any], strands: int) -> BraidWord:
    if expr.startswith("@"):
        name = expr[1:]
        if name not in labels:
            raise CorpusError(f"unknown label {name!r}")
        return expand(labels[name]["word"], strands)
    return expand(expr, strands)


def run_chain(start: BraidWord, steps: Sequence[Mapping[str, Any]], labels: Mapping[str, Any],
              cap: int = DEFAULT_STEP_CAP, clock: Clock | None = None, parity: int = 0) -> ChainOutcome:
    """Execute closure moves, comparing with each printed word and then continuing from it."""
    cur = start
    reached: dict[str, int] = {}
    for i, step in enumerate(steps):
        if clock:
            clock.check()
        op = step["op"]
        try:
            if op == "conjugate":
                result = conjugate(cur, expand(step["by"], cur.strands))
            elif op == "flip":
                result = flip(cur)
            elif op == "mirror":
                result = mirror(cur)
                parity ^= 1
            elif op == "reverse":
                result = reverse(cur)
            elif op == "stabilize":
                result = stabilize(cur)
            elif op == "destabilize":
                result = destabilize(cur)
            elif op in ("equal", "deform"):
                result = cur
            else:
                raise StepFailure(i, op, "unknown operation")
            if op == "deform" and step.get("mirror"):
                parity ^= 1
            expected = resolve(step["expect"], labels, result.strands) if "expect" in step else None
        except (BraidError, CorpusError) as exc:
            raise StepFailure(i, op, str(exc)) from exc

        if expected is not None:
            check = step.get("check", "invariants" if op == "deform" else "group")
            if check == "literal":
                ok = free_reduce(result).letters == free_reduce(expected).letters
                why = "words differ after free reduction"
            elif check == "group":
                try:
                    ok = equals(result, expected, cap=cap)
                except UndecidedError as exc:
                    raise StepUndecided(f"step {i} ({op}): {exc}") from exc
                why = "not equal in the braid group"
            else:
                why = _same_invariants(result, expected, bool(step.get("mirror")))
                ok = why is None
            if not ok:
                raise StepFailure(i, op, why, step["expect"], format_letters(result.letters))
            cur = expected
            if step["expect"].startswith("@"):
                reached[step["expect"][1:]] = parity
        else:
            cur = result
    return ChainOutcome(cur, parity, reached)


class _KnotCache:
    """Census chains are shared by both cases of a knot; run each once per report."""

    def __init__(self, doc: Corpus, cap: int):
        self.doc = doc
        self.cap = cap
        self.census: dict[str, ChainOutcome | Exception] = {}

    def census_chain(self, knot_id: str, clock: Clock | None) -> ChainOutcome:
        if knot_id not in self.census:
            knot = self.doc["knots"][knot_id]
            try:
                start = expand(knot["word"], knot["strands"])
                self.census[knot_id] = run_chain(start, knot["census_chain"], knot["labels"], self.cap, clock)
            except (StepFailure, StepUndecided, BraidError) as exc:
                self.census[knot_id] = exc
        out = self.census[knot_id]
        if isinstance(out, Exception):
            raise out
        return out


# -- case checks ------------------------------------------------------------------


def _count(n: int, noun: str) -> str:
    return f"{n} {noun}" + ("" if n == 1 else "s")


def _frac(x: Any) -> str:
    return str(ExtendedRational.coerce(str(x)))


def _run_case_chain(doc: Corpus, case: Mapping[str, Any], cap: int, clock: Clock) -> tuple[ChainOutcome, BraidWord]:
    chain = case["braid_chain"]
    labels = doc["knots"][case["knot"]]["labels"]
    try:
        start = resolve(chain["start"], labels, chain["strands"])
    except (BraidError, CorpusError) as exc:
        raise StepFailure(-1, "start", str(exc)) from exc
    out = run_chain(start, chain["steps"], labels, cap, clock)
    if chain["start"] == "@" + chain["end"]:
        out.reached.setdefault(chain["end"], out.parity)
    return out, start


def verify_braid_chain(doc: Corpus, case: Mapping[str, Any], cache: _KnotCache, cap: int,
                       clock: Clock) -> list[CheckResult]:
    cid = case["id"]
    chain = case["braid_chain"]
    end = chain["end"]
    out: list[CheckResult] = []

    def note(check: str, verdict: str, expected: str, actual: str, detail: str = "") -> None:
        out.append(CheckResult(cid, check, verdict, expected, actual, detail))

    case_out = start = None
    try:
        case_out, start = _run_case_chain(doc, case, cap, clock)
        if end not in case_out.reached:
            note("braid-chain", FAIL, f"reaches @{end}", "chain ends elsewhere")
            case_out = None
        else:
            note("braid-chain", PASS, f"reaches @{end}", f"reached @{end}")
    except StepFailure as exc:
        note("braid-chain", FAIL, exc.expected or f"reaches @{end}", exc.actual or "step failed", str(exc))
    except StepUndecided as exc:
        note("braid-chain", UNDECIDED, f"reaches @{end}", "cap exceeded", str(exc))

    census = None
    try:
        census = cache.census_chain(case["knot"], clock)
        if end not in census.reached:
            note("census-chain", FAIL, f"reaches @{end}", "label not reached from the census word")
            census = None
        else:
            note("census-chain", PASS, f"reaches @{end}", f"reached @{end}")
    except StepFailure as exc:
        note("census-chain", FAIL, exc.expected or f"reaches @{end}", exc.actual or "step failed", str(exc))
    except StepUndecided as exc:
        note("census-chain", UNDECIDED, f"reaches @{end}", "cap exceeded", str(exc))

    claim = "mirror" if case["mirror"] else "plain"
    if case_out is None or census is None:
        # a chain that could not be decided leaves these undecided, not failed
        verdict = FAIL if any(r.verdict == FAIL for r in out) else UNDECIDED
        why = "a braid chain failed" if verdict == FAIL else "a braid chain was undecided"
        note("mirror-parity", verdict, claim, "unknown", why)
        note("chain-invariants", verdict, "agree", "unknown", why)
        return out
    recovered = int(chain["start_mirror"]) ^ case_out.parity ^ census.reached[end]
    note("mirror-parity", PASS if recovered == int(case["mirror"]) else FAIL, claim,
         "mirror" if recovered else "plain",
         f"start {int(chain['start_mirror'])}, chain {case_out.parity}, census {census.reached[end]}")

    clock.check()
    end_word = resolve("@" + end, doc["knots"][case["knot"]]["labels"], chain["strands"])
    why = _same_invariants(start, end_word, bool(case_out.parity))
    note("chain-invariants", PASS if why is None else FAIL, "agree", "agree" if why is None else "differ",
         why or "")
    return out


def _surgery_script(doc: Corpus, case: Mapping[str, Any], part: str) -> TwistScript:
    s = case[part]
    moves = tuple(move_from_json(m) for m in s["moves"])
    final = case["surgery"]["final"] if part == "surgery" else None
    return TwistScript(initial_presentation(doc, case), moves, assertions_from_json(s["assert"], final, len(moves)))


def verify_surgery_chain(doc: Corpus, case: Mapping[str, Any]) -> list[CheckResult]:
    cid = case["id"]
    slope = case["slope"]
    final = case["surgery"]["final"]
    out = []
    try:
        script = _surgery_script(doc, case, "surgery")
    except (SurgeryError, TangleError, CorpusError) as exc:
        msg = str(exc)
        return [CheckResult(cid, c, FAIL, "valid presentation", "invalid", msg)
                for c in ("h1-order", "surgery-chain", "surgery-slope")]

    h1 = h1_order(script.initial)
    out.append(CheckResult(cid, "h1-order", PASS if h1 == slope else FAIL, str(slope), str(h1)))

    P, report = run_script(script, strict=False)
    expected = f"{final['component']} = {_frac(final['coeff'])}"
    if not report.ok:
        bad = report.failures[0] if report.failures else None
        detail = report.error or f"after move {bad.after}: {bad.component} expected {bad.expected}, got {bad.actual}"
        actual = f"{bad.component} = {bad.actual}" if bad else "invalid move"
        out.append(CheckResult(cid, "surgery-chain", FAIL, expected, actual, detail))
    elif len(P) != 1 or P.ids != [final["component"]] or final["component"] != case["surgery"]["knot_component"]:
        out.append(CheckResult(cid, "surgery-chain", FAIL, expected, f"components {P.ids}",
                               "the knot component must be the only one left"))
    else:
        out.append(CheckResult(cid, "surgery-chain", PASS, expected, f"{P.ids[0]} = {P.components[0].coeff}",
                               _count(len(report.verdicts), "assertion")))

    want = ExtendedRational(-slope if case["mirror"] else slope)
    got = P.components[0].coeff if len(P) == 1 else None
    out.append(CheckResult(cid, "surgery-slope", PASS if got == want else FAIL, str(want), str(got),
                           "negative coefficient on the mirror" if case["mirror"] else ""))
    return out


def verify_quotient_chain(doc: Corpus, case: Mapping[str, Any]) -> CheckResult:
    cid = case["id"]
    if not case.get("quotient"):
        return CheckResult(cid, "quotient-chain", PASS, "no data", "no data")
    try:
        script = _surgery_script(doc, case, "quotient")
    except (SurgeryError, TangleError, CorpusError) as exc:
        return CheckResult(cid, "quotient-chain", FAIL, "valid script", "invalid", str(exc))
    P, report = run_script(script, strict=False)
    n = _count(len(report.verdicts), "assertion")
    if report.ok:
        return CheckResult(cid, "quotient-chain", PASS, n, n)
    if report.error:
        return CheckResult(cid, "quotient-chain", FAIL, "valid moves", "invalid move", report.error)
    bad = report.failures[0]
    return CheckResult(cid, "quotient-chain", FAIL, f"{bad.component} = {bad.expected}",
                       f"{bad.component} = {bad.actual}", f"after move {bad.after}")


def verify_tangle_checks(case: Mapping[str, Any]) -> list[CheckResult]:
    cid = case["id"]
    t = case.get("tangle", {})
    out = []

    bad = []
    for item in t.get("cf", []):
        try:
            v = cf_value(ContinuedFraction.parse(item["terms"]))
        except (TangleError, ZeroDivisionError) as exc:
            bad.append((item["terms"], item["value"], str(exc)))
            continue
        if v != ExtendedRational.parse(item["value"]):
            bad.append((item["terms"], item["value"], str(v)))
    n = len(t.get("cf", []))
    if bad:
        terms, want, got = bad[0]
        out.append(CheckResult(cid, "tangle-cf", FAIL, f"{terms} = {want}", f"{terms} = {got}"))
    else:
        out.append(CheckResult(cid, "tangle-cf", PASS, _count(n, "expansion"), _count(n, "expansion")))

    bad = []
    for item in t.get("trick", []):
        if "writhe" not in item:
            continue
        v = montesinos_trick_fraction(item["coeff"], item["writhe"])
        if v != ExtendedRational.parse(item["value"]):
            bad.append((item, v))
    n = sum("writhe" in item for item in t.get("trick", []))
    if bad:
        item, v = bad[0]
        out.append(CheckResult(cid, "tangle-trick", FAIL, f"{item['coeff']} - {item['writhe']} = {item['value']}",
                               str(v)))
    else:
        out.append(CheckResult(cid, "tangle-trick", PASS, _count(n, "fraction"), _count(n, "fraction")))

    m = t.get("montesinos")
    if m is None:
        out.append(CheckResult(cid, "montesinos-det", PASS, "no data", "no data"))
    else:
        try:
            det = montesinos_determinant(MontesinosPresentation.parse(m["fractions"]))
        except TangleError as exc:
            out.append(CheckResult(cid, "montesinos-det", FAIL, str(case["slope"]), "invalid", str(exc)))
        else:
            out.append(CheckResult(cid, "montesinos-det", PASS if det == case["slope"] else FAIL,
                                   str(case["slope"]), str(det), f"({m['fractions']})"))
    return out


def verify_auxiliary(case: Mapping[str, Any]) -> list[CheckResult]:
    cid = case["id"]
    items = case.get("auxiliary_braids") or []
    if not items:
        return []
    for k, item in enumerate(items):
        try:
            w = expand(item["word"], item["strands"])
            if closure_component_count(w) != 1:
                return [CheckResult(cid, "auxiliary-braids", FAIL, "knot closure", "link closure", f"braid {k}")]
            if item.get("lspace") and not is_lspace_alexander_form(_alexander(w)):
                return [CheckResult(cid, "auxiliary-braids", FAIL, "L-space Alexander form",
                                    _alexander(w).to_string(), f"braid {k}")]
        except (BraidError, InvariantError) as exc:
            return [CheckResult(cid, "auxiliary-braids", FAIL, "valid braid", "invalid", str(exc))]
    return [CheckResult(cid, "auxiliary-braids", PASS, _count(len(items), "braid"), _count(len(items), "braid"))]


def verify_case(doc: Corpus, case: Mapping[str, Any], cache: _KnotCache | None = None,
                cap: int = DEFAULT_STEP_CAP, timeout: float | None = DEFAULT_TIMEOUT) -> list[CheckResult]:
    cache = cache or _KnotCache(doc, cap)
    clock = Clock(timeout)
    cid = case["id"]
    parts: list[Callable[[], list[CheckResult]]] = [
        lambda: verify_braid_chain(doc, case, cache, cap, clock),
        lambda: verify_surgery_chain(doc, case),
        lambda: [verify_quotient_chain(doc, case)],
        lambda: verify_tangle_checks(case),
        lambda: verify_auxiliary(case),
    ]
    names = [("braid-chain", "census-chain", "mirror-parity", "chain-invariants"),
             ("h1-order", "surgery-chain", "surgery-slope"), ("quotient-chain",),
             ("tangle-cf", "tangle-trick", "montesinos-det"), ()]
    out: list[CheckResult] = []
    for part, checks in zip(parts, names):
        try:
            clock.check()
            out.extend(part())
        except CaseTimeout:
            done = {r.check for r in out}
            out.extend(CheckResult(cid, c, UNDECIDED, "within time budget", "timed out")
                       for c in checks if c not in done)
            clock = Clock(0.0)
    return out


# -- knot checks ------------------------------------------------------------------


def verify_knot(doc: Corpus, knot_id: str, cache: _KnotCache, case_results: Mapping[str, list[CheckResult]]
                ) -> list[CheckResult]:
    knot = doc["knots"][knot_id]
    out = []
    try:
        w = expand(knot["word"], knot["strands"])
    except BraidError as exc:
        return [CheckResult(knot_id, c, FAIL, "valid word", "invalid", str(exc)) for c in KNOT_CHECKS]

    comps = closure_component_count(w)
    out.append(CheckResult(knot_id, "knot-closure", PASS if comps == 1 else FAIL, "1 component", f"{comps} components"))
    if comps != 1:
        out.append(CheckResult(knot_id, "lspace-form", FAIL, "L-space form", "not a knot"))
        out.append(CheckResult(knot_id, "genus", FAIL, "genus", "not a knot"))
    else:
        delta = _alexander(w)
        out.append(CheckResult(knot_id, "lspace-form", PASS if is_lspace_alexander_form(delta) else FAIL,
                               "alternating +-1 coefficients", delta.to_string()))
        try:
            g = genus_positive_braid(w)
        except InvariantError as exc:
            out.append(CheckResult(knot_id, "genus", FAIL, "positive braid", "invalid", str(exc)))
        else:
            claimed = knot.get("genus", g)
            deg = delta.max_degree()
            ok = g == deg == claimed
            out.append(CheckResult(knot_id, "genus", PASS if ok else FAIL, str(claimed),
                                   f"{g} (deg Alexander {deg})"))

    try:
        census = cache.census_chain(knot_id, None)
        out.append(CheckResult(knot_id, "census-chain", PASS, "all steps", f"{len(knot['census_chain'])} steps"))
    except StepFailure as exc:
        census = None
        out.append(CheckResult(knot_id, "census-chain", FAIL, exc.expected or "all steps", exc.actual or "failed",
                               str(exc)))
    except StepUndecided as exc:
        census = None
        out.append(CheckResult(knot_id, "census-chain", UNDECIDED, "all steps", "cap exceeded", str(exc)))

    cases = [c for c in doc["cases"] if c["knot"] == knot_id]
    ends = sorted({c["braid_chain"]["end"] for c in cases})
    chain_ok = all(r.verdict == PASS for c in cases for r in case_results.get(c["id"], [])
                   if r.check in ("braid-chain", "mirror-parity"))
    agree = census is not None and chain_ok and all(e in census.reached for e in ends)
    out.append(CheckResult(knot_id, "cases-agree", PASS if agree else FAIL, f"{len(cases)} cases meet the census chain",
                           ", ".join("@" + e for e in ends) if agree else "disagree"))
    return out


def verify_corpus(doc: Corpus, case_ids: Sequence[str] | None = None, cap: int = DEFAULT_STEP_CAP,
                  timeout: float | None = DEFAULT_TIMEOUT, knots: bool = True) -> Report:
    cache = _KnotCache(doc, cap)
    cases = sorted(doc["cases"], key=lambda c: c["id"])
    if case_ids is not None:
        wanted = set(case_ids)
        missing = wanted - {c["id"] for c in cases}
        if missing:
            raise KeyError(", ".join(sorted(missing)))
        cases = [c for c in cases if c["id"] in wanted]
    per_case = {c["id"]: verify_case(doc, c, cache, cap, timeout) for c in cases}
    results = [r for rs in per_case.values() for r in rs]
    knot_ids: list[str] = []
    if knots:
        knot_ids = sorted({c["knot"] for c in cases})
        for k in knot_ids:
            results.extend(verify_knot(doc, k, cache, per_case))
    return Report(results, sorted(per_case), knot_ids)


def verify_all(corpus: Corpus | None = None, **kw) -> Report:
    from .corpus import shipped_corpus

    return verify_corpus(corpus if corpus is not None else shipped_corpus(), **kw)
