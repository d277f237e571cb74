"""Helpers for corrupting corpus data."""

import re

_LETTER = re.compile(r"(?<![\^\d])-?\d+")


def corrupt_letter(text: str, k: int = 0) -> str:
    """Negate the k-th braid letter of a word (exponents are left alone)."""
    matches = list(_LETTER.finditer(text))
    m = matches[k % len(matches)]
    value = -int(m.group())
    return text[:m.start()] + str(value) + text[m.end():]


def failing(report) -> set[str]:
    return {r.case for r in report.results if r.verdict == "fail"}
