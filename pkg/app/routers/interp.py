"""Interpolation routes."""

from fastapi import APIRouter, File, Form, UploadFile
from starlette.concurrency import run_in_threadpool

from app.harness import csvio
from app.harness.experiments import Method
from app.harness.operations import interpolate
from app.schemas import SamplesRequest

router = APIRouter(prefix="/interp", tags=["interp"])


def _ppform_response(x, y, method: Method, dleft: float | None, dright: float | None) -> dict:
    p, pp = interpolate(x, y, method, dleft, dright)
    return {"scheme": p.scheme_tag, **pp.to_dict()}


@router.post("")
async def interp(body: SamplesRequest):
    """Fit an interpolant and return its ppform."""
    return await run_in_threadpool(_ppform_response, body.x, body.y, body.method, body.dleft, body.dright)


@router.post("/upload")
async def interp_upload(
    file: UploadFile = File(...),
    method: Method = Form(Method.COMPACT4),
    dleft: float | None = Form(None),
    dright: float | None = Form(None),
):
    """Same as POST /interp for an uploaded x,y CSV file."""
    x, y = csvio.parse_xy(csvio.decode(await file.read()))
    return await run_in_threadpool(_ppform_response, x, y, method, dleft, dright)
