"""HTTP service exposing script runs, parse checks, sweeps, and demos.

Domain failures (bad script, failed assert, numerical trouble) come back as
200 responses carrying a status and the CLI exit code; HTTP error codes are
reserved for transport-level problems (unknown demo name, malformed request
body).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import dsl, runner
from ._version import __version__
from .gaussian import NumericalError

app = FastAPI(title="spinlight", version=__version__)


class RunRequest(BaseModel):
    script: str
    seed: int = 0


class RunResponse(BaseModel):
    status: str
    exit_code: int
    report: dict | None = None
    error: str | None = None


class CheckRequest(BaseModel):
    script: str


class CheckResponse(BaseModel):
    status: str
    exit_code: int
    statements: int | None = None
    error: str | None = None


class SweepRequest(BaseModel):
    script: str
    grid: str
    seed: int = 0
    jobs: int = Field(default=1, ge=1, le=64)


class SweepResponse(BaseModel):
    status: str
    exit_code: int
    csv: str | None = None
    error: str | None = None


class DemoResponse(BaseModel):
    name: str
    script: str


class HealthResponse(BaseModel):
    status: str
    version: str


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    status, report, error = runner.execute_text(request.script, request.seed)
    return RunResponse(status=status, exit_code=runner.STATUS_EXIT[status],
                       report=report, error=error)


@app.post("/check", response_model=CheckResponse)
def check(request: CheckRequest) -> CheckResponse:
    status, statements, error = runner.check_text(request.script)
    return CheckResponse(status=status, exit_code=runner.STATUS_EXIT[status],
                         statements=statements, error=error)


@app.post("/sweep", response_model=SweepResponse)
def sweep(request: SweepRequest) -> SweepResponse:
    try:
        text, any_failed = runner.sweep_csv(request.script, request.grid,
                                            request.seed, request.jobs)
    except dsl.ScriptError as exc:
        return SweepResponse(status="script_error", exit_code=2, error=str(exc))
    except (runner.RunError, NumericalError) as exc:
        return SweepResponse(status="numerical_error", exit_code=3, error=str(exc))
    status = "assert_failed" if any_failed else "ok"
    return SweepResponse(status=status, exit_code=runner.STATUS_EXIT[status], csv=text)


@app.get("/demo/{name}", response_model=DemoResponse)
def demo(name: str) -> DemoResponse:
    try:
        script = runner.demo_script_text(name)
    except KeyError:
        raise HTTPException(
            status_code=404,
            detail=f"unknown demo {name!r}; available: {', '.join(runner.DEMO_NAMES)}",
        ) from None
    return DemoResponse(name=name, script=script)
