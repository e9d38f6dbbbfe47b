"""Matrix property routes."""

from fastapi import APIRouter
from starlette.concurrency import run_in_threadpool

from app.harness.operations import matrix_properties
from app.schemas import MeshRequest

router = APIRouter(prefix="/matrix-props", tags=["matrix"])


@router.post("")
async def matrix_props(body: MeshRequest):
    """Leading minors, total nonnegativity and condition for a mesh."""
    return await run_in_threadpool(matrix_properties, body.x)
