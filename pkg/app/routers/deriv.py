"""Nodal derivative routes."""

from fastapi import APIRouter
from starlette.concurrency import run_in_threadpool

from app.harness.operations import derivatives
from app.schemas import SamplesRequest

router = APIRouter(prefix="/deriv", tags=["deriv"])


@router.post("")
async def deriv(body: SamplesRequest):
    """Nodal slopes and the condition of the solved system."""
    result = await run_in_threadpool(derivatives, body.x, body.y, body.method, body.dleft, body.dright)
    return {
        "x": body.x,
        "slopes": result.slopes.tolist(),
        "condition": result.condition,
        "scheme": result.scheme_tag,
    }
