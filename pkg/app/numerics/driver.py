"""High-level constructions on top of the slope systems.

cubic_spline and compact_cubic return PiecewiseCubic objects; the
second-derivative helpers work on uniform spacing; truncation_probe fits the
leading error term of a formula from a sweep of step sizes.
"""

import logging
import warnings
from typing import Callable, Sequence

import numpy as np

from app.config import get_settings
from app.numerics.assembly import (
    assemble,
    compact4_edge_stencil,
    compact_c_edge_stencil,
    compact_stencil,
    spline_stencil,
)
from app.numerics.errors import (
    ExtrapolationWarning,
    InsufficientSweepError,
    PreconditionError,
    TooFewNodesError,
    ZeroWidthError,
)
from app.numerics.hermite import PiecewiseCubic
from app.numerics.mesh import Mesh, mesh_from_nodes
from app.numerics.models import (
    TWO_PLUS_ROOT3,
    DerivativeResult,
    EdgeKind,
    EdgeScheme,
    InteriorRule,
    LeadingTerm,
    ProbeFormula,
    TruncationFit,
)
from app.numerics.tridiag import TridiagonalSystem, one_norm_condition, solve

logger = logging.getLogger(__name__)

RealFunction = Callable[[np.ndarray], np.ndarray]

_COMPACT_FIRST_EDGES = (EdgeKind.COMPACT4, EdgeKind.COMPACT_C, EdgeKind.CLAMPED)


def nodal_slopes(
    mesh: Mesh, values, interior: InteriorRule, edges: EdgeScheme, condition: bool = True
) -> DerivativeResult:
    """Solve the slope system for any interior rule and closure."""
    system = assemble(mesh, values, interior, edges)
    slopes = solve(system.matrix, system.rhs)
    cond = one_norm_condition(system.matrix) if condition else None
    logger.debug(f"solved {system.scheme_tag} on n={mesh.n}")
    return DerivativeResult(slopes=slopes, scheme_tag=system.scheme_tag, condition=cond)


def compact_first_derivatives(
    mesh: Mesh,
    values,
    edges: EdgeScheme | None = None,
    condition: bool = True,
) -> DerivativeResult:
    """Fourth-order nodal derivatives from the compact system A v = B rho."""
    edges = edges or EdgeScheme.compact4()
    if edges.kind not in _COMPACT_FIRST_EDGES:
        raise PreconditionError(f"compact derivatives take compact4, compactc or clamped edges, not {edges.kind.value}")
    return nodal_slopes(mesh, values, InteriorRule.COMPACT, edges, condition)


def cubic_spline(mesh: Mesh, values, edges: EdgeScheme | None = None) -> PiecewiseCubic:
    """C^2 cubic spline; any edge closure is accepted, natural by default."""
    edges = edges or EdgeScheme.natural()
    result = nodal_slopes(mesh, values, InteriorRule.SPLINE, edges, condition=False)
    return PiecewiseCubic(mesh=mesh, values=values, slopes=result.slopes, scheme_tag=result.scheme_tag)


def compact_cubic(mesh: Mesh, values, edges: EdgeScheme | None = None) -> PiecewiseCubic:
    """C^1 Hermite interpolant with compact fourth-order nodal slopes."""
    edges = edges or EdgeScheme.compact4()
    if not edges.kind.is_compact:
        raise PreconditionError(f"compact cubic takes compact4 or compactc edges, not {edges.kind.value}")
    result = compact_first_derivatives(mesh, values, edges, condition=False)
    return PiecewiseCubic(mesh=mesh, values=values, slopes=result.slopes, scheme_tag=result.scheme_tag)


# Second derivatives


def _require_step(h: float) -> None:
    if h == 0:
        raise ZeroWidthError("step h must be nonzero")


def second_derivative_mixed(values3: Sequence[float], slopes2: Sequence[float], h: float) -> float:
    """f''(0) from f(-h), f(0), f(h) and f'(-h), f'(h); exact for degree <= 5."""
    _require_step(h)
    f_minus, f_zero, f_plus = values3
    d_minus, d_plus = slopes2
    return 2.0 * (f_plus - 2.0 * f_zero + f_minus) / h**2 - (d_plus - d_minus) / (2.0 * h)


def butcher_second_derivative(
    piece_values: Sequence[float], piece_slopes: Sequence[float], h: float, phi: float
) -> float:
    """p''(tau + phi h) of the cubic Hermite piece; exact for cubics.

    phi outside [0, 1] is evaluated but flagged with ExtrapolationWarning.
    """
    _require_step(h)
    if not 0.0 <= phi <= 1.0:
        warnings.warn(f"phi={phi} is outside the piece [0, 1]", ExtrapolationWarning, stacklevel=2)
    y0, y1 = piece_values
    s0, s1 = piece_slopes
    secant = (y1 - y0) / h
    return (2.0 * (3.0 * phi - 2.0) * s0 + 2.0 * (3.0 * phi - 1.0) * s1 + 6.0 * (1.0 - 2.0 * phi) * secant) / h


def compact_second_derivatives_uniform(
    values, h: float, end_values: Sequence[float] | None = None
) -> np.ndarray:
    """f'' at every node from the (1, 10, 1) system with 12/h^2 second differences.

    The end values are taken as given. Without them they come from the
    second derivative of a compact cubic fit at tau_0 and tau_n, which is
    only third-order accurate and needs n >= 4.
    """
    _require_step(h)
    rho = np.asarray(values, dtype=float)
    n = len(rho) - 1
    if n < 2:
        raise TooFewNodesError(2, n)

    if end_values is None:
        mesh = mesh_from_nodes(h * np.arange(n + 1, dtype=float))
        fit = compact_cubic(mesh, rho)
        first = butcher_second_derivative(rho[:2], fit.slopes[:2], h, 0.0)
        last = butcher_second_derivative(rho[-2:], fit.slopes[-2:], h, 1.0)
        end_values = (first, last)

    sub = np.ones(n)
    diag = np.full(n + 1, 10.0)
    sup = np.ones(n)
    rhs = np.empty(n + 1)
    rhs[1:-1] = 12.0 / h**2 * (rho[2:] - 2.0 * rho[1:-1] + rho[:-2])

    diag[0] = diag[n] = 1.0
    sup[0] = sub[n - 1] = 0.0
    rhs[0], rhs[n] = end_values
    return solve(TridiagonalSystem(sub=sub, diag=diag, sup=sup), rhs)


# Truncation probes


def leading_truncation_term(
    formula: ProbeFormula, r: float = 1.0, s: float = 1.0, c: float = TWO_PLUS_ROOT3
) -> LeadingTerm:
    """Leading term of residual = lhs - rhs for each probed formula.

    Interior formulas use neighbours at -r h and s h. The four-node edge
    formula uses widths h, r h, s h; the second-derivative residual of the
    mixed formula is f'' minus the formula.
    """
    formula = ProbeFormula(formula)
    if formula == ProbeFormula.INTERIOR_COMPACT:
        return LeadingTerm(order=4, constant=(s + r) ** 2 / 120.0, derivative=5)
    if formula == ProbeFormula.INTERIOR_SPLINE:
        if r == s:
            return LeadingTerm(order=4, constant=r * s * (r * r - r * s + s * s) / 30.0, derivative=5)
        return LeadingTerm(order=3, constant=-r * s * (r - s) / 12.0, derivative=4)
    if formula == ProbeFormula.EDGE_COMPACT4:
        return LeadingTerm(order=4, constant=r * (r + s) / 120.0, derivative=5)
    if formula == ProbeFormula.EDGE_COMPACT_C:
        return LeadingTerm(order=4, constant=(4.0 * c - 1.0) / 20.0, derivative=5)
    if formula == ProbeFormula.SECOND_DERIVATIVE_COMPACT:
        return LeadingTerm(order=4, constant=1.0 / 20.0, derivative=6)
    return LeadingTerm(order=4, constant=1.0 / 360.0, derivative=6)


def default_steps(formula: ProbeFormula, count: int = 5) -> list[float]:
    """Geometric sweep h_0 2^-k; second-derivative formulas start coarser."""
    base = 0.4 if ProbeFormula(formula).derivative_order == 2 else 0.1
    return [base * 2.0**-k for k in range(count)]


def _sample(func: RealFunction, points) -> np.ndarray:
    return np.asarray(func(np.asarray(points, dtype=float)), dtype=float) * np.ones(len(points))


def _residual(
    formula: ProbeFormula,
    f: RealFunction,
    derivative: RealFunction,
    x0: float,
    h: float,
    r: float,
    s: float,
    c: float,
    first_derivative: RealFunction | None,
) -> tuple[float, float]:
    """(lhs - rhs, sum of |terms|) for one step size."""
    if formula in (ProbeFormula.INTERIOR_COMPACT, ProbeFormula.INTERIOR_SPLINE):
        points = np.array([x0 - r * h, x0, x0 + s * h])
        if formula == ProbeFormula.INTERIOR_COMPACT:
            stencil = compact_stencil(r, s, h)
        else:
            stencil = spline_stencil(r * h, s * h)
        fv, dv = _sample(f, points), _sample(derivative, points)
        w_minus, _, w_plus = stencil.weights
        lhs_terms = np.array(stencil.lhs) * dv
        rhs = w_minus * (fv[0] - fv[1]) + w_plus * (fv[2] - fv[1])
        scale = np.abs(lhs_terms).sum() + np.abs(np.array(stencil.weights) * fv).sum()
        return float(lhs_terms.sum() - rhs), float(scale)

    if formula in (ProbeFormula.EDGE_COMPACT4, ProbeFormula.EDGE_COMPACT_C):
        if formula == ProbeFormula.EDGE_COMPACT4:
            points = x0 + np.concatenate(([0.0], np.cumsum([h, r * h, s * h])))
            stencil = compact4_edge_stencil(h, r * h, s * h)
        else:
            points = x0 + h * np.arange(5, dtype=float)
            stencil = compact_c_edge_stencil(h, c)
        fv, dv = _sample(f, points), _sample(derivative, points[:2])
        weights = np.array(stencil.weights)
        lhs_terms = np.array(stencil.lhs) * dv
        rhs = float(np.dot(weights[1:], fv[1:] - fv[0]))
        scale = np.abs(lhs_terms).sum() + np.abs(weights * fv).sum()
        return float(lhs_terms.sum() - rhs), float(scale)

    points = np.array([x0 - h, x0, x0 + h])
    fv, d2 = _sample(f, points), _sample(derivative, points)
    if formula == ProbeFormula.SECOND_DERIVATIVE_COMPACT:
        lhs_terms = np.array([1.0, 10.0, 1.0]) * d2
        weights = 12.0 / h**2 * np.array([1.0, -2.0, 1.0])
        rhs = float(np.dot(weights, fv))
        scale = np.abs(lhs_terms).sum() + np.abs(weights * fv).sum()
        return float(lhs_terms.sum() - rhs), float(scale)

    if first_derivative is None:
        raise PreconditionError("the mixed second-derivative formula also needs f'")
    d1 = _sample(first_derivative, points[[0, 2]])
    estimate = second_derivative_mixed(fv, d1, h)
    scale = 2.0 / h**2 * (np.abs(fv) * np.array([1.0, 2.0, 1.0])).sum() + np.abs(d1).sum() / (2.0 * abs(h))
    return float(d2[1] - estimate), float(scale + abs(d2[1]))


def truncation_probe(
    formula: ProbeFormula,
    f: RealFunction,
    derivative: RealFunction,
    r: float = 1.0,
    s: float = 1.0,
    steps: Sequence[float] | None = None,
    x0: float = 0.0,
    c: float = TWO_PLUS_ROOT3,
    first_derivative: RealFunction | None = None,
) -> TruncationFit:
    """Fit residual ~ K h^p over a geometric step sweep.

    ``derivative`` is the exact derivative the formula approximates (f' or
    f''). The order p is the least-squares slope of log|residual| against
    log h; K is the h -> 0 intercept of residual / h^round(p) fitted linearly
    in h. Residuals below the rounding floor are dropped.
    """
    formula = ProbeFormula(formula)
    steps = list(default_steps(formula) if steps is None else steps)
    if len(steps) < 4:
        raise InsufficientSweepError(f"need at least 4 step sizes, got {len(steps)}")

    floor_factor = get_settings().rounding_floor_factor
    eps = np.finfo(float).eps
    kept_h, kept_res = [], []
    for h in steps:
        _require_step(h)
        residual, scale = _residual(formula, f, derivative, x0, h, r, s, c, first_derivative)
        if abs(residual) < floor_factor * eps * scale:
            logger.debug(f"{formula.value}: h={h:g} residual {residual:.3e} below rounding floor")
            continue
        kept_h.append(abs(h))
        kept_res.append(residual)

    if len(kept_h) < 3:
        raise InsufficientSweepError(f"only {len(kept_h)} step sizes above the rounding floor")

    h_arr = np.array(kept_h)
    res_arr = np.array(kept_res)
    order = float(np.polyfit(np.log(h_arr), np.log(np.abs(res_arr)), 1)[0])
    power = int(round(order))
    coefficient = float(np.polyfit(h_arr, res_arr / h_arr**power, 1)[1])
    logger.info(f"{formula.value}: order {order:.3f}, coefficient {coefficient:.6g}")
    return TruncationFit(order=order, coefficient=coefficient, steps=kept_h, residuals=kept_res)
