"""FastAPI service wrapping the simulation package.

Every endpoint is a stateless wrapper over `teleportec.runs`; errors are
reported as HTTP 400 with a typed detail so clients can triage config
mistakes, malformed code files, validation failures, and numeric guards.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__, codes, runs
from . import schemas


def _error(kind: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"kind": kind, "message": message})


def create_app() -> FastAPI:
    app = FastAPI(title="teleportec", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/codes/check", response_model=schemas.CheckCodeResponse)
    def check_code(req: schemas.CheckCodeRequest):
        code_id, code = _resolve(req.code, seed=req.seed)
        return runs.check_code_report(code_id, code)

    @app.post("/sweeps", response_model=schemas.SweepResponse)
    def sweep(req: schemas.SweepRequest):
        try:
            rows = runs.run_sweep(
                model=req.model,
                code_specs=[c.model_dump() for c in req.codes],
                trials=req.trials,
                seed=req.seed,
                em=schemas.axis_value(req.em),
                eb=schemas.axis_value(req.eb),
                dm=schemas.axis_value(req.dm),
                db=schemas.axis_value(req.db),
                dp=schemas.axis_value(req.dp),
            )
        except runs.GuardError as exc:
            raise _error("guard", str(exc)) from exc
        except (runs.ConfigError, ValueError) as exc:
            raise _from_value_error(exc) from exc
        return {"rows": rows}

    @app.post("/teleport/demo", response_model=schemas.TeleportDemoResponse)
    def demo(req: schemas.TeleportDemoRequest):
        try:
            return runs.teleport_demo(
                code_spec=req.code.model_dump(),
                seed=req.seed,
                model=req.model,
                em=req.em,
                eb=req.eb,
                dm=req.dm,
                db=req.db,
                dp=req.dp,
                inject=req.inject,
                run_dense=req.dense,
            )
        except runs.GuardError as exc:
            raise _error("guard", str(exc)) from exc
        except (runs.ConfigError, ValueError) as exc:
            raise _from_value_error(exc) from exc

    @app.post("/curves", response_model=schemas.CurveResponse)
    def curve(req: schemas.CurveRequest):
        try:
            return runs.curve_points(req.model, req.resolution)
        except runs.ConfigError as exc:
            raise _error("config", str(exc)) from exc

    def _resolve(spec: schemas.CodeSpec, seed: int):
        try:
            return runs.resolve_code(spec.model_dump(), seed=seed)
        except runs.GuardError as exc:
            raise _error("guard", str(exc)) from exc
        except codes.CodeTextError as exc:
            raise _error("parse", str(exc)) from exc
        except codes.CodeValidationError as exc:
            raise _error("validation", str(exc)) from exc
        except runs.ConfigError as exc:
            raise _error("config", str(exc)) from exc

    def _from_value_error(exc: ValueError) -> HTTPException:
        if isinstance(exc, codes.CodeTextError):
            return _error("parse", str(exc))
        if isinstance(exc, codes.CodeValidationError):
            return _error("validation", str(exc))
        return _error("config", str(exc))

    return app


app = create_app()
