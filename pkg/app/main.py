"""splinelab - HTTP API."""

import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.config import get_settings
from app.numerics.errors import InputFormatError, PreconditionError, SingularPivotError
from app.routers import deriv, experiments, interp, matrix

logger = logging.getLogger(__name__)

# Create FastAPI app
app = FastAPI(
    title="splinelab",
    description="Cubic splines, compact cubic interpolants and compact finite differences",
    version="1.0.0",
    debug=get_settings().debug,
)

# Include routers
app.include_router(interp.router)
app.include_router(deriv.router)
app.include_router(matrix.router)
app.include_router(experiments.router)


def _error(status: int, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": type(exc).__name__, "detail": str(exc)})


@app.exception_handler(PreconditionError)
@app.exception_handler(SingularPivotError)
async def precondition_handler(request: Request, exc: Exception):
    """Inputs outside an operation's domain."""
    logger.warning(f"{request.method} {request.url.path}: {exc}")
    return _error(422, exc)


@app.exception_handler(InputFormatError)
async def input_format_handler(request: Request, exc: InputFormatError):
    logger.warning(f"{request.method} {request.url.path}: {exc}")
    return _error(400, exc)


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "healthy", "app": get_settings().app_name}
