"""Loading and validating the verification corpus.

The corpus is one JSON document with ``links`` (surgery links and their
fitted linking matrices), ``knots`` (census braid words, labelled words and
the chain relating them) and ``cases`` (one per surgery).  The shipped copy
lives in ``qaverify/data/corpus.json`` next to its schema.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .surgery import Assertion, FitConstraint, SurgeryPresentation, move_from_json
from .tangle import ExtendedRational

Corpus = dict[str, Any]


class CorpusError(ValueError):
    """The corpus failed to parse or validate; ``path`` is a JSON path like ``$.cases[3].slope``."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def default_corpus_path() -> Path:
    return Path(str(resources.files("qaverify") / "data" / "corpus.json"))


@lru_cache(maxsize=1)
def schema() -> dict[str, Any]:
    text = (resources.files("qaverify") / "data" / "corpus.schema.json").read_text()
    return json.loads(text)


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(doc: Any) -> Corpus:
    """Schema validation plus the cross-reference checks a schema cannot express."""
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise CorpusError(e.message, _json_path(e.absolute_path))

    seen = set()
    for k, case in enumerate(doc["cases"]):
        where = f"$.cases[{k}]"
        if case["id"] in seen:
            raise CorpusError(f"duplicate case id {case['id']!r}", f"{where}.id")
        seen.add(case["id"])
        if case["knot"] not in doc["knots"]:
            raise CorpusError(f"unknown knot {case['knot']!r}", f"{where}.knot")
        link = doc["links"].get(case["surgery"]["link"])
        if link is None:
            raise CorpusError(f"unknown link {case['surgery']['link']!r}", f"{where}.surgery.link")
        if len(case["surgery"]["coeffs"]) != len(link["components"]):
            raise CorpusError("coefficient count does not match the link", f"{where}.surgery.coeffs")
    for name, link in doc["links"].items():
        n = len(link["components"])
        if len(link["unknotted"]) != n:
            raise CorpusError("unknotted flags do not match components", f"$.links.{name}.unknotted")
        m = link["linking"]
        if m is not None and (len(m) != n or any(len(r) != n for r in m)):
            raise CorpusError(f"linking matrix must be {n}x{n}", f"$.links.{name}.linking")
    return doc


def load_corpus(path: str | Path | None = None) -> Corpus:
    p = Path(path) if path is not None else default_corpus_path()
    try:
        doc = json.loads(p.read_text())
    except OSError as exc:
        raise CorpusError(f"cannot read {p}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return validate(doc)


@lru_cache(maxsize=4)
def _shipped() -> str:
    return default_corpus_path().read_text()


def shipped_corpus() -> Corpus:
    """A fresh, validated copy of the shipped corpus (safe to mutate)."""
    return validate(json.loads(_shipped()))


def case_by_id(doc: Corpus, case_id: str) -> dict[str, Any]:
    for case in doc["cases"]:
        if case["id"] == case_id:
            return case
    raise KeyError(case_id)


def assertions_from_json(raw, final: Mapping[str, str] | None = None, n_moves: int = 0) -> tuple[Assertion, ...]:
    """Corpus assertions, with the printed final coefficient attached after the last move."""
    merged: dict[int, dict[str, str]] = {}
    for a in raw:
        merged.setdefault(int(a["after"]), {}).update(a["coeffs"])
    if final is not None:
        merged.setdefault(n_moves - 1, {})[final["component"]] = final["coeff"]
    return tuple(Assertion.of(k, v) for k, v in sorted(merged.items()))


def initial_presentation(doc: Corpus, case: Mapping[str, Any], linking=None) -> SurgeryPresentation:
    link = doc["links"][case["surgery"]["link"]]
    m = linking if linking is not None else link["linking"]
    if m is None:
        raise CorpusError(f"link {case['surgery']['link']} has no linking matrix")
    return SurgeryPresentation.build(case["surgery"]["coeffs"], m, link["components"], link["unknotted"])


def fit_constraints(doc: Corpus, link_id: str) -> list[FitConstraint]:
    """Every chain in the corpus that starts on ``link_id``: surgery chains (with |H_1| = slope)
    and quotient-side chains."""
    out = []
    for case in doc["cases"]:
        s = case["surgery"]
        if s["link"] != link_id:
            continue
        coeffs = tuple(ExtendedRational.coerce(c) for c in s["coeffs"])
        moves = tuple(move_from_json(m) for m in s["moves"])
        out.append(FitConstraint(coeffs, moves, assertions_from_json(s["assert"], s["final"], len(moves)),
                                 case["slope"]))
        q = case.get("quotient")
        if q:
            qmoves = tuple(move_from_json(m) for m in q["moves"])
            out.append(FitConstraint(coeffs, qmoves, assertions_from_json(q["assert"]), None))
    return out
