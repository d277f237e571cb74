"""FastAPI application exposing braid, tangle, surgery and corpus checks.

Every handler is a thin adapter: parse text forms, call the library, and
serialize.  Input problems come back as 400 with an ``error`` (and, for
corpus documents, the JSON ``path``); an unknown case or link is a 404.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .. import corpus as corpus_mod
from ..braid import BraidError, expand, exponent_sum, format_letters, permutation
from ..corpus import CorpusError
from ..harness import FAIL, PASS, UNDECIDED, verify_corpus
from ..invariants import (InvariantError, alexander, closure_component_count, genus_positive_braid,
                          is_lspace_alexander_form, jones)
from ..surgery import SurgeryError, fit_linking_matrix, h1_order, run_script, script_from_json
from ..tangle import ContinuedFraction, MontesinosPresentation, TangleError, cf_expand, cf_value, montesinos_determinant
from ..wordproblem import UndecidedError, equals
from .models import (AssertionOut, BraidEqRequest, BraidEqResponse, BraidInvRequest, BraidInvResponse, CheckOut,
                     FitRequest, FitResponse, StepOut, SurgeryRunRequest, SurgeryRunResponse, TangleCfRequest,
                     TangleCfResponse, TangleMdetRequest, TangleMdetResponse, VerifyRequest, VerifyResponse)

INPUT_ERRORS = (BraidError, TangleError, SurgeryError, InvariantError, ZeroDivisionError)


def _corpus(raw: dict[str, Any] | None) -> corpus_mod.Corpus:
    return corpus_mod.shipped_corpus() if raw is None else corpus_mod.validate(raw)


def create_app() -> FastAPI:
    app = FastAPI(title="qaverify", version="0.1.0",
                  description="Exact checks for braid identities, surgery twist chains and tangle arithmetic.")

    @app.exception_handler(CorpusError)
    async def _corpus_error(request: Request, exc: CorpusError):
        return JSONResponse(status_code=400, content={"error": str(exc), "path": exc.path})

    for kind in INPUT_ERRORS:
        @app.exception_handler(kind)
        async def _input_error(request: Request, exc: Exception):
            return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/cases")
    def cases() -> list[dict[str, Any]]:
        doc = corpus_mod.shipped_corpus()
        return [{"id": c["id"], "knot": c["knot"], "slope": c["slope"], "mirror": c["mirror"],
                 "link": c["surgery"]["link"]} for c in sorted(doc["cases"], key=lambda c: c["id"])]

    @app.post("/braid/eq", response_model=BraidEqResponse)
    def braid_eq(req: BraidEqRequest) -> BraidEqResponse:
        u, v = expand(req.w1, req.n), expand(req.w2, req.n)
        out = dict(method=req.method, w1=format_letters(u.letters), w2=format_letters(v.letters))
        try:
            eq = equals(u, v, method=req.method, cap=req.cap)
        except UndecidedError as exc:
            return BraidEqResponse(equal=None, verdict=UNDECIDED, detail=str(exc), **out)
        return BraidEqResponse(equal=eq, verdict=PASS if eq else FAIL, **out)

    @app.post("/braid/inv", response_model=BraidInvResponse)
    def braid_inv(req: BraidInvRequest) -> BraidInvResponse:
        w = expand(req.word, req.n)
        comps = closure_component_count(w)
        positive = all(x > 0 for x in w.letters)
        out = BraidInvResponse(strands=w.strands, word=format_letters(w.letters), length=len(w),
                               exponent_sum=exponent_sum(w), components=comps,
                               permutation=list(permutation(w).images), jones=jones(w).to_string(),
                               positive=positive)
        if comps == 1:
            delta = alexander(w)
            out.alexander = delta.to_string()
            out.determinant = abs(delta(-1))
            out.lspace_form = is_lspace_alexander_form(delta)
            if positive:
                out.genus = genus_positive_braid(w)
        return out

    @app.post("/tangle/cf", response_model=TangleCfResponse)
    def tangle_cf(req: TangleCfRequest) -> TangleCfResponse:
        c = ContinuedFraction.parse(req.cf)
        value = cf_value(c)
        greedy = None if value.is_infinite else list(cf_expand(value).terms)
        return TangleCfResponse(terms=list(c.terms), value=str(value), greedy=greedy)

    @app.post("/tangle/mdet", response_model=TangleMdetResponse)
    def tangle_mdet(req: TangleMdetRequest) -> TangleMdetResponse:
        m = MontesinosPresentation.parse(req.fractions)
        return TangleMdetResponse(fractions=[str(f) for f in m.fractions], determinant=montesinos_determinant(m))

    @app.post("/surgery/run", response_model=SurgeryRunResponse)
    def surgery_run(req: SurgeryRunRequest) -> SurgeryRunResponse:
        try:
            script = script_from_json(req.script)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, INPUT_ERRORS):
                raise
            raise SurgeryError(f"malformed twist script: {exc!r}") from exc
        final, rep = run_script(script, strict=False)
        return SurgeryRunResponse(
            ok=rep.ok,
            h1_initial=h1_order(script.initial),
            h1_final=h1_order(final),
            final={k: str(v) for k, v in final.coefficients().items()},
            steps=[StepOut(index=i, move=m, coeffs={k: str(v) for k, v in c.items()}) for i, m, c in rep.steps],
            assertions=[AssertionOut(after=v.after, component=v.component, expected=str(v.expected),
                                     actual=None if v.actual is None else str(v.actual), ok=v.ok)
                        for v in rep.verdicts],
            error=rep.error,
        )

    @app.post("/fit-linking", response_model=FitResponse)
    def fit_linking(req: FitRequest) -> FitResponse:
        doc = _corpus(req.corpus)
        link = doc["links"].get(req.link)
        if link is None:
            raise HTTPException(404, detail=f"unknown link {req.link!r}")
        constraints = corpus_mod.fit_constraints(doc, req.link)
        sols = fit_linking_matrix(link["components"], constraints, bound=req.bound, unknotted=link["unknotted"])
        shipped = link.get("linking")
        matches = None if shipped is None else tuple(tuple(r) for r in shipped) in sols
        return FitResponse(link=req.link, components=link["components"], bound=req.bound,
                           constraints=len(constraints), count=len(sols),
                           solutions=[[list(r) for r in m] for m in sols], matches_corpus=matches)

    @app.post("/verify", response_model=VerifyResponse, response_model_exclude_none=True)
    def verify(req: VerifyRequest) -> VerifyResponse:
        doc = _corpus(req.corpus)
        try:
            report = verify_corpus(doc, req.cases, cap=req.cap, timeout=req.timeout)
        except KeyError as exc:
            raise HTTPException(404, detail=f"unknown case {exc.args[0]}") from exc
        body = report.to_json()
        return VerifyResponse(summary=body["summary"], checks=[CheckOut(**c) for c in body["checks"]],
                              exit_code=report.exit_code, text=report.to_text())

    return app


app = create_app()
