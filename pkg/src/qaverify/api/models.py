"""Request and response bodies for the HTTP service.

Words, fractions and polynomials travel as the same text forms the CLI and
the corpus use, so a response can be pasted straight back into a request.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

from ..harness import DEFAULT_TIMEOUT
from ..wordproblem import DEFAULT_STEP_CAP

Verdict = Literal["pass", "fail", "undecided"]


class BraidEqRequest(BaseModel):
    n: int = Field(..., ge=1, description="Strand count")
    w1: str = Field(..., examples=["1,2,1"])
    w2: str = Field(..., examples=["2,1,2"])
    method: Literal["handle", "garside"] = "handle"
    cap: int = Field(DEFAULT_STEP_CAP, ge=1, description="Reduction step cap before giving up")


class BraidEqResponse(BaseModel):
    equal: Optional[bool] = Field(None, description="None when the cap was hit")
    verdict: Verdict
    method: str
    w1: str
    w2: str
    detail: str = ""


class BraidInvRequest(BaseModel):
    n: int = Field(..., ge=1)
    word: str = Field(..., examples=["1,1,1"])


class BraidInvResponse(BaseModel):
    strands: int
    word: str
    length: int
    exponent_sum: int
    components: int
    permutation: list[int]
    alexander: Optional[str] = Field(None, description="Symmetrized, Δ(1)=1; knots only")
    jones: str = Field(..., description="Exponent:coefficient pairs in t (half-integral for even component count)")
    determinant: Optional[int] = None
    lspace_form: Optional[bool] = None
    positive: bool
    genus: Optional[int] = Field(None, description="Positive-braid genus, when the word is positive and closes to a knot")


class TangleCfRequest(BaseModel):
    cf: str = Field(..., examples=["[6,-2]"])


class TangleCfResponse(BaseModel):
    terms: list[int]
    value: str
    greedy: Optional[list[int]] = Field(None, description="Greedy ceiling expansion of the value")


class TangleMdetRequest(BaseModel):
    fractions: str = Field(..., examples=["3/5,2/3,-1/4"])


class TangleMdetResponse(BaseModel):
    fractions: list[str]
    determinant: int


class SurgeryRunRequest(BaseModel):
    script: dict[str, Any] = Field(..., description="Twist script: components, linking, moves, assert")


class AssertionOut(BaseModel):
    after: int
    component: str
    expected: str
    actual: Optional[str]
    ok: bool


class StepOut(BaseModel):
    index: int
    move: str
    coeffs: dict[str, str]


class SurgeryRunResponse(BaseModel):
    ok: bool
    h1_initial: int
    h1_final: int
    final: dict[str, str]
    steps: list[StepOut]
    assertions: list[AssertionOut]
    error: Optional[str] = None


class FitRequest(BaseModel):
    link: str = Field(..., examples=["L12n1968"])
    bound: int = Field(10, ge=0, le=20)
    corpus: Optional[dict[str, Any]] = Field(None, description="Corpus document; the shipped one when omitted")


class FitResponse(BaseModel):
    link: str
    components: list[str]
    bound: int
    constraints: int
    count: int
    solutions: list[list[list[int]]]
    matches_corpus: Optional[bool] = Field(None, description="Whether the corpus matrix is among the solutions")


class VerifyRequest(BaseModel):
    corpus: Optional[dict[str, Any]] = None
    cases: Optional[list[str]] = Field(None, description="Case ids; every case when omitted")
    timeout: Optional[float] = Field(DEFAULT_TIMEOUT, gt=0)
    cap: int = Field(DEFAULT_STEP_CAP, ge=1)


class CheckOut(BaseModel):
    case: str
    check: str
    verdict: Verdict
    expected: str
    actual: str
    detail: Optional[str] = None


class VerifyResponse(BaseModel):
    summary: dict[str, int]
    checks: list[CheckOut]
    exit_code: int
    text: str


class ErrorResponse(BaseModel):
    error: str
    path: Optional[str] = None
