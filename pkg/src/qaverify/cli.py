"""Command line client.

Each subcommand sends one request to the HTTP service and renders the
reply.  By default the service runs in-process; ``--server URL`` (or
``QAVERIFY_SERVER``) points the client at a running instance instead.

Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input or
usage, 3 undecided (step cap or timeout).
"""

from __future__ import annotations

import asyncio
import json
import sys
from pathlib import Path
from typing import Any

import click
import httpx

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3

# words and fractions may start with '-', which click would read as an option
LOOSE = {"ignore_unknown_options": True}


class InProcessTransport(httpx.BaseTransport):
    """Synchronous transport that calls the ASGI app directly."""

    def __init__(self, app=None):
        if app is None:
            from .api.app import app
        self._inner = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        async def go() -> httpx.Response:
            req = httpx.Request(request.method, request.url, headers=request.headers, content=request.read())
            resp = await self._inner.handle_async_request(req)
            body = await resp.aread()
            return httpx.Response(resp.status_code, headers=resp.headers, content=body)

        return asyncio.run(go())


class Client:
    def __init__(self, server: str | None, timeout: float | None = None):
        if server:
            self._http = httpx.Client(base_url=server.rstrip("/"), timeout=timeout)
        else:
            self._http = httpx.Client(base_url="http://qaverify", transport=InProcessTransport(), timeout=timeout)

    def post(self, path: str, body: dict[str, Any]) -> dict[str, Any]:
        try:
            resp = self._http.post(path, json=body)
        except httpx.HTTPError as exc:
            fail_usage(f"cannot reach service: {exc}")
        if resp.status_code >= 400:
            fail_usage(_error_text(resp))
        return resp.json()


def _error_text(resp: httpx.Response) -> str:
    try:
        body = resp.json()
    except ValueError:
        return f"HTTP {resp.status_code}: {resp.text}"
    if "error" in body:
        return body["error"]
    detail = body.get("detail")
    if isinstance(detail, list):  # request validation
        return "; ".join(f"{'.'.join(map(str, d.get('loc', [])))}: {d.get('msg')}" for d in detail)
    return str(detail)


def fail_usage(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_USAGE)


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        fail_usage(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        fail_usage(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _emit(ctx: click.Context, body: dict[str, Any], text: str) -> None:
    click.echo(json.dumps(body, indent=2) if ctx.obj["raw"] else text)


@click.group()
@click.option("--server", envvar="QAVERIFY_SERVER", default=None, metavar="URL",
              help="Use a running service instead of an in-process one.")
@click.option("--raw", is_flag=True, help="Print the service's JSON reply.")
@click.pass_context
def main(ctx: click.Context, server: str | None, raw: bool) -> None:
    """Verify quasi-alternating surgery computations."""
    ctx.obj = {"client": Client(server), "raw": raw}


# -- verify --------------------------------------------------------------------


@main.group()
def verify() -> None:
    """Run corpus checks."""


def _run_verify(ctx: click.Context, cases: list[str] | None, corpus: str | None, json_out: str | None,
                timeout: float) -> None:
    body: dict[str, Any] = {"cases": cases, "timeout": timeout}
    if corpus:
        body["corpus"] = _read_json(corpus)
    rep = ctx.obj["client"].post("/verify", body)
    if json_out:
        Path(json_out).write_text(json.dumps({"summary": rep["summary"], "checks": rep["checks"]}, indent=2) + "\n")
    _emit(ctx, rep, rep["text"].rstrip("\n"))
    sys.exit(rep["exit_code"])


@verify.command("all")
@click.option("--corpus", type=click.Path(dir_okay=False), help="Corpus JSON (default: the shipped corpus).")
@click.option("--json", "json_out", type=click.Path(dir_okay=False), help="Also write the JSON report here.")
@click.option("--timeout", default=120.0, show_default=True, help="Per-case time budget in seconds.")
@click.pass_context
def verify_all(ctx, corpus, json_out, timeout):
    """Every case and knot in the corpus."""
    _run_verify(ctx, None, corpus, json_out, timeout)


@verify.command("case")
@click.argument("case_id", nargs=-1, required=True)
@click.option("--corpus", type=click.Path(dir_okay=False))
@click.option("--json", "json_out", type=click.Path(dir_okay=False))
@click.option("--timeout", default=120.0, show_default=True)
@click.pass_context
def verify_case(ctx, case_id, corpus, json_out, timeout):
    """One or more cases by id, e.g. t12533-37."""
    _run_verify(ctx, list(case_id), corpus, json_out, timeout)


# -- braid ---------------------------------------------------------------------


@main.group()
def braid() -> None:
    """Braid word checks."""


@braid.command("eq", context_settings=LOOSE)
@click.option("--n", "n", type=int, required=True, help="Strand count.")
@click.option("--method", type=click.Choice(["handle", "garside"]), default="handle", show_default=True)
@click.option("--cap", type=int, default=None, help="Handle reduction step cap.")
@click.argument("w1")
@click.argument("w2")
@click.pass_context
def braid_eq(ctx, n, method, cap, w1, w2):
    """Decide whether W1 and W2 are equal in B_n."""
    body = {"n": n, "w1": w1, "w2": w2, "method": method}
    if cap is not None:
        body["cap"] = cap
    r = ctx.obj["client"].post("/braid/eq", body)
    text = {"pass": "equal", "fail": "not equal", "undecided": f"undecided: {r['detail']}"}[r["verdict"]]
    _emit(ctx, r, text)
    sys.exit({"pass": EXIT_OK, "fail": EXIT_FAIL, "undecided": EXIT_UNDECIDED}[r["verdict"]])


@braid.command("inv", context_settings=LOOSE)
@click.option("--n", "n", type=int, required=True, help="Strand count.")
@click.argument("word")
@click.pass_context
def braid_inv(ctx, n, word):
    """Invariants of the closure of WORD."""
    r = ctx.obj["client"].post("/braid/inv", {"n": n, "word": word})
    lines = [f"components     {r['components']}", f"exponent sum   {r['exponent_sum']}",
             f"jones          {r['jones']}"]
    if r["alexander"] is not None:
        lines += [f"alexander      {r['alexander']}", f"determinant    {r['determinant']}",
                  f"lspace form    {'yes' if r['lspace_form'] else 'no'}"]
    if r["genus"] is not None:
        lines.append(f"genus          {r['genus']}")
    _emit(ctx, r, "\n".join(lines))


# -- tangle --------------------------------------------------------------------


@main.group()
def tangle() -> None:
    """Rational tangle arithmetic."""


@tangle.command("cf", context_settings=LOOSE)
@click.argument("cf")
@click.pass_context
def tangle_cf(ctx, cf):
    """Value of a subtractive continued fraction like "[6,-2]"."""
    r = ctx.obj["client"].post("/tangle/cf", {"cf": cf})
    _emit(ctx, r, r["value"])


@tangle.command("mdet", context_settings=LOOSE)
@click.argument("fractions")
@click.pass_context
def tangle_mdet(ctx, fractions):
    """Determinant of a Montesinos link, e.g. "3/5,2/3,-1/4"."""
    r = ctx.obj["client"].post("/tangle/mdet", {"fractions": fractions})
    _emit(ctx, r, str(r["determinant"]))


# -- surgery -------------------------------------------------------------------


@main.group()
def surgery() -> None:
    """Rolfsen twist scripts."""


@surgery.command("run")
@click.argument("file", type=click.Path(dir_okay=False))
@click.pass_context
def surgery_run(ctx, file):
    """Run a twist script (JSON: components, linking, moves, assert)."""
    r = ctx.obj["client"].post("/surgery/run", {"script": _read_json(file)})
    fmt = lambda cs: ", ".join(f"{k}={v}" for k, v in cs.items())
    lines = [f"start   |H1|={r['h1_initial']}"]
    lines += [f"{s['index']:>3}  {s['move']:<22} {fmt(s['coeffs'])}" for s in r["steps"]]
    for a in r["assertions"]:
        if not a["ok"]:
            lines.append(f"FAIL after move {a['after']}: {a['component']} expected {a['expected']}, got {a['actual']}")
    if r["error"]:
        lines.append(f"error: {r['error']}")
    lines.append(f"final   {fmt(r['final'])}  |H1|={r['h1_final']}  "
                 f"{len(r['assertions'])} assertion(s) {'ok' if r['ok'] else 'FAILED'}")
    _emit(ctx, r, "\n".join(lines))
    sys.exit(EXIT_OK if r["ok"] else EXIT_FAIL)


# -- fitting -------------------------------------------------------------------


@main.command("fit-linking")
@click.argument("link_id")
@click.option("--bound", default=10, show_default=True, help="Entries range over [-bound, bound].")
@click.option("--corpus", type=click.Path(dir_okay=False))
@click.pass_context
def fit_linking(ctx, link_id, bound, corpus):
    """Fit linking matrices for LINK_ID against every corpus chain on it."""
    body: dict[str, Any] = {"link": link_id, "bound": bound}
    if corpus:
        body["corpus"] = _read_json(corpus)
    r = ctx.obj["client"].post("/fit-linking", body)
    lines = [f"{r['link']}: {r['count']} solution(s) within bound {r['bound']} "
             f"satisfying {r['constraints']} chain(s)"]
    for m in r["solutions"]:
        lines.append("  " + json.dumps(m))
    if r["matches_corpus"] is not None:
        lines.append("corpus matrix is " + ("among the solutions" if r["matches_corpus"] else "NOT a solution"))
    _emit(ctx, r, "\n".join(lines))
    sys.exit(EXIT_OK if r["count"] and r["matches_corpus"] is not False else EXIT_FAIL)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("qaverify.api.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
