"""Experiment routes."""

import asyncio
import json
import logging

from fastapi import APIRouter, Query
from sse_starlette.sse import EventSourceResponse
from starlette.concurrency import run_in_threadpool

from app.harness.experiments import (
    MeshKind,
    Method,
    convergence_row,
    empty_report,
    error_scales,
    fit_slopes,
    run_c2_jumps,
    run_cond_histogram,
    spawn_generators,
)
from app.harness.functions import get_function
from app.numerics.errors import PreconditionError, SplineLabError

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/experiments", tags=["experiments"])


@router.get("/histogram")
async def histogram(
    n: int = Query(100, ge=4),
    trials: int = Query(100, ge=1),
    seed: int | None = None,
    bins: int | None = Query(None, ge=1),
):
    """Histogram of log10 condition numbers over random meshes."""
    result = await run_in_threadpool(run_cond_histogram, n, trials, seed, bins)
    return result.to_dict()


@router.get("/jumps")
async def jumps(
    function: str = "runge",
    mesh: MeshKind = MeshKind.CHEBYSHEV,
    method: Method = Method.COMPACT4,
    n: int = Query(7, ge=1),
    seed: int | None = None,
):
    """Second-derivative jumps at the interior nodes of one fit."""
    func = get_function(function)
    result = await run_in_threadpool(run_c2_jumps, func, mesh, method, n, seed)
    return result.to_dict()


@router.get("/convergence/stream")
async def convergence_stream(
    function: str = "runge",
    mesh: MeshKind = MeshKind.UNIFORM,
    method: Method = Method.COMPACT4,
    n: list[int] = Query([16, 32, 64, 128]),
    seed: int | None = None,
):
    """Stream one row event per n, then the report with fitted slopes."""
    func = get_function(function)
    if any(later <= earlier for earlier, later in zip(n, n[1:])):
        raise PreconditionError("n must be strictly increasing")
    generators = spawn_generators(seed, len(n))

    async def generate():
        report = empty_report(func, mesh, method, seed)
        try:
            for size, rng in zip(n, generators):
                row = await run_in_threadpool(convergence_row, func, mesh, method, size, rng)
                report.rows.append(row)
                yield {"event": "row", "data": json.dumps(row.to_dict())}
            report.slopes = fit_slopes(report.rows, error_scales(func))
            yield {"event": "report", "data": json.dumps(report.to_dict())}
        except asyncio.CancelledError:
            pass
        except SplineLabError as e:
            logger.warning(f"convergence stream stopped: {e}")
            yield {"event": "error", "data": json.dumps({"error": type(e).__name__, "detail": str(e)})}

    return EventSourceResponse(generate())
