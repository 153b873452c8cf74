"""Stateless HTTP service over the same evaluate/sweep/crossing calls the
CLI uses.

Error contract:
- 400 {"error": {"code", "message", "field"?}} for scenario syntax, schema,
  validation, and sweep-target problems;
- 413 for bodies over 1 MiB;
- 422 {"error": {"code", "message"}} for NoCrossing / NonMonotone;
- 500 {"error": {"code": "InternalError"}}, code only, no details leak.

Every POST takes a full scenario document; nothing is stored between
requests.
"""
from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .analysis import (
    AnalysisError,
    NoCrossing,
    NonMonotone,
    SweepTargetUnresolved,
    find_crossing,
    sweep,
)
from .report import verdict_map_to_jsonable
from .rulesets import builtin_registry, evaluate_all
from .scenario import (
    ScenarioError,
    ScenarioSyntaxError,
    SchemaError,
    defaults_to_jsonable,
    parse_scenario,
    registry_to_jsonable,
    resolve_rulesets,
)

MAX_BODY_BYTES = 1 << 20
MAX_SWEEP_STEPS = 10_000


class _BodyTooLarge(Exception):
    pass


def _error(status: int, code: str, message: str = "", field=None) -> JSONResponse:
    err = {"code": code}
    if message:
        err["message"] = message
    if field is not None:
        err["field"] = field
    return JSONResponse(status_code=status, content={"error": err})


async def _read_scenario(request: Request):
    length = request.headers.get("content-length")
    if length is not None:
        try:
            if int(length) > MAX_BODY_BYTES:
                raise _BodyTooLarge()
        except ValueError:
            pass
    body = await request.body()
    if len(body) > MAX_BODY_BYTES:
        raise _BodyTooLarge()
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioSyntaxError(f"body is not valid UTF-8: {exc}") from None
    return parse_scenario(text)


def _handle(exc: Exception):
    """Map a library error to a response, or None for unexpected ones."""
    if isinstance(exc, _BodyTooLarge):
        return _error(413, "BodyTooLarge", f"request body exceeds {MAX_BODY_BYTES} bytes")
    if isinstance(exc, SchemaError):
        return _error(400, exc.code, str(exc), field=exc.field)
    if isinstance(exc, ScenarioError):
        return _error(400, exc.code, str(exc))
    if isinstance(exc, SweepTargetUnresolved):
        return _error(400, exc.code, str(exc))
    if isinstance(exc, (NoCrossing, NonMonotone)):
        return _error(422, exc.code, str(exc))
    if isinstance(exc, AnalysisError):
        return _error(400, exc.code, str(exc))
    return None


def create_app(registry=None) -> FastAPI:
    app = FastAPI(title="compute-thresholds", docs_url=None, redoc_url=None, openapi_url=None)
    reg = dict(builtin_registry()) if registry is None else dict(registry)

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception):  # pragma: no cover
        return _error(500, "InternalError")

    @app.post("/api/evaluate")
    async def api_evaluate(request: Request):
        try:
            scenario = await _read_scenario(request)
            rulesets = resolve_rulesets(scenario, reg)
            verdicts = evaluate_all(
                scenario.lineage, scenario.subject, rulesets, cfg=scenario.scaling
            )
        except Exception as exc:
            resp = _handle(exc)
            if resp is None:
                raise
            return resp
        return JSONResponse(verdict_map_to_jsonable(verdicts))

    @app.post("/api/sweep")
    async def api_sweep(request: Request):
        try:
            scenario = await _read_scenario(request)
            if scenario.sweep is not None and scenario.sweep.steps > MAX_SWEEP_STEPS:
                raise SchemaError(
                    "sweep.steps", f"at most {MAX_SWEEP_STEPS} steps per request"
                )
            rows = sweep(scenario, reg)
        except Exception as exc:
            resp = _handle(exc)
            if resp is None:
                raise
            return resp
        return JSONResponse(
            {
                "target": scenario.sweep.target,
                "rows": [
                    {
                        "value": r.value.render(),
                        "ruleset_id": r.ruleset_id,
                        "status": r.status.value,
                        "effective": r.effective.render(),
                    }
                    for r in rows
                ],
            }
        )

    @app.post("/api/crossing")
    async def api_crossing(
        request: Request,
        ruleset: Optional[str] = Query(default=None),
        tol_ooms: float = Query(default=1e-3),
    ):
        try:
            scenario = await _read_scenario(request)
            rulesets = resolve_rulesets(scenario, reg)
            rid = ruleset
            if rid is None:
                if len(rulesets) != 1:
                    raise SchemaError(
                        "rulesets",
                        "crossing needs ?ruleset=<id> unless the scenario selects exactly one",
                    )
                rid = next(iter(rulesets))
            if rid not in rulesets:
                if rid in reg:
                    rulesets[rid] = reg[rid]
                else:
                    raise SchemaError("rulesets", f"unknown rule set id {rid!r}")
            crossing = find_crossing(scenario, rulesets[rid], tolerance_ooms=tol_ooms)
        except Exception as exc:
            resp = _handle(exc)
            if resp is None:
                raise
            return resp
        return JSONResponse(
            {
                "ruleset_id": rid,
                "tolerance_ooms": tol_ooms,
                "crossing": crossing.render(),
                "crossing_compact": crossing.compact(),
            }
        )

    @app.get("/api/rulesets")
    async def api_rulesets():
        return JSONResponse(registry_to_jsonable(reg))

    @app.get("/api/defaults")
    async def api_defaults():
        return JSONResponse(defaults_to_jsonable())

    _mount_ui(app)
    return app


def _mount_ui(app: FastAPI) -> None:
    """Serve the built explorer UI when its dist directory is present."""
    candidates = []
    env_dir = os.environ.get("CTL_UI_DIR")
    if env_dir:
        candidates.append(Path(env_dir))
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for cand in candidates:
        if cand.is_dir():
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=str(cand), html=True), name="ui")
            return


app = create_app()
