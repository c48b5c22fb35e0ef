"""FastAPI application exposing the run handlers over HTTP.

Every endpoint returns the same run-report shape the CLI prints.  Usage
problems map to 400, precondition violations (inputs outside a theorem's
hypotheses) to 422.  Run with:

    uvicorn bsat_arr.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, runops
from ..errors import PreconditionError, UsageError
from .schemas import (
    BFunctionRequest,
    HealthResponse,
    LengthRequest,
    MilnorRequest,
    RewriteRequest,
    RunReport,
    VerifyRequest,
)

app = FastAPI(
    title="bsat-arr",
    version=__version__,
    description=(
        "Exact Bernstein-Sato, Milnor-fiber cohomology, rewriting, and "
        "holonomic-length computations for central hyperplane arrangements."
    ),
)


@app.exception_handler(UsageError)
async def _usage_error(_request: Request, exc: UsageError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(PreconditionError)
async def _precondition_error(
    _request: Request, exc: PreconditionError
) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
async def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/bfunction", response_model=RunReport)
async def bfunction(request: BFunctionRequest) -> dict:
    if request.mode == "generic":
        if request.n is None or request.k is None:
            raise UsageError("generic mode needs both n and k")
        return runops.run_bfunction_generic(request.n, request.k)
    if request.arrangement is None:
        raise UsageError("isolated mode needs an arrangement")
    return runops.run_bfunction_isolated(request.arrangement.as_payload())


@app.post("/milnor", response_model=RunReport)
async def milnor(request: MilnorRequest) -> dict:
    return runops.run_milnor(
        request.arrangement.as_payload(), max_degree=request.max_degree
    )


@app.post("/length", response_model=RunReport)
async def length(request: LengthRequest) -> dict:
    return runops.run_length(request.arrangement.as_payload())


@app.post("/rewrite", response_model=RunReport)
async def rewrite(request: RewriteRequest) -> dict:
    return runops.run_rewrite(
        request.arrangement.as_payload(), request.product, degree=request.degree
    )


@app.post("/verify", response_model=RunReport)
async def verify(request: VerifyRequest) -> dict:
    arrangement = (
        request.arrangement.as_payload() if request.arrangement is not None else None
    )
    return runops.run_verify(grid=request.grid, arrangement=arrangement)
