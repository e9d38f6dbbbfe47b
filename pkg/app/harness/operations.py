"""Operations shared by the command line and the HTTP API."""

import logging

import numpy as np

from app.harness.experiments import Method, fit
from app.numerics.assembly import theorem_matrix
from app.numerics.errors import PreconditionError
from app.numerics.hermite import PiecewiseCubic, PpForm, evaluate, to_ppform
from app.numerics.mesh import mesh_from_nodes
from app.numerics.models import DerivativeResult
from app.numerics.tridiag import is_totally_nonnegative, leading_minors, lu_factor

logger = logging.getLogger(__name__)


def interpolate(
    x, y, method: Method, d_left: float | None = None, d_right: float | None = None
) -> tuple[PiecewiseCubic, PpForm]:
    """Fit ``method`` to samples and return the interpolant and its ppform."""
    mesh = mesh_from_nodes(x)
    if len(y) != mesh.size:
        raise PreconditionError(f"x has {mesh.size} entries but y has {len(y)}")
    p, _ = fit(method, mesh, y, d_left, d_right, condition=False)
    return p, to_ppform(p)


def dense_evaluations(p: PiecewiseCubic, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Interpolant values on an equispaced grid over the mesh interval."""
    t = np.linspace(p.mesh.lower, p.mesh.upper, points)
    return t, evaluate(p, t)


def derivatives(
    x, y, method: Method, d_left: float | None = None, d_right: float | None = None
) -> DerivativeResult:
    """Nodal slopes of ``method`` together with the condition of the solved system."""
    mesh = mesh_from_nodes(x)
    if len(y) != mesh.size:
        raise PreconditionError(f"x has {mesh.size} entries but y has {len(y)}")
    _, result = fit(method, mesh, y, d_left, d_right)
    return result


def matrix_properties(x) -> dict:
    """Minors, total nonnegativity and condition of the compact matrix with four-node edges.

    Minors are computed on the mesh rescaled to unit mean width; they overflow
    for long meshes, so the pivots D^k / D^(k-1) are reported as well.
    """
    mesh = mesh_from_nodes(x)
    unit = mesh.scaled(1.0 / abs(mesh.ref_step))
    minors = leading_minors(unit)
    system = theorem_matrix(unit)
    pivots = lu_factor(system).u_diag
    verdict = is_totally_nonnegative(system)
    _, result = fit(Method.COMPACT4, mesh, np.zeros(mesh.size))
    logger.info(f"matrix properties for n={mesh.n}: TN={verdict.totally_nonnegative}, cond={result.condition:.6g}")
    return {
        "n": mesh.n,
        "minors": [float(v) if np.isfinite(v) else None for v in minors.values],
        "pivots": pivots.tolist(),
        "all_minors_positive": bool(np.all(pivots > 0)),
        "totally_nonnegative": verdict.totally_nonnegative,
        "violation": verdict.violation,
        "violation_index": verdict.index,
        "condition": result.condition,
    }
