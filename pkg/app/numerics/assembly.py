"""Slope systems A v = B rho for splines and compact finite differences.

Interior rows are either the spline C^2 conditions (rescaled so the centre
coefficient is 4) or the variable-mesh fourth-order compact formula
(multiplied so that a uniform mesh gives 1, 4, 1). Two edge rows close the
system. B is never formed: right-hand sides are computed from differences of
the data, so rows annihilate constants exactly.
"""

import logging
from dataclasses import dataclass

import numpy as np

from app.config import get_settings
from app.numerics.errors import (
    IndexOutOfRangeError,
    NonUniformUnsupportedError,
    TooFewNodesError,
)
from app.numerics.mesh import Mesh, local_ratios
from app.numerics.models import (
    TWO_PLUS_ROOT3,
    EdgeKind,
    EdgeRow,
    EdgeScheme,
    End,
    InteriorRow,
    InteriorRule,
)
from app.numerics.tridiag import TridiagonalSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Stencil:
    """lhs multiplies derivative values, weights multiply function values."""

    lhs: tuple[float, ...]
    weights: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """Square slope system; the solution is the vector of nodal slopes."""

    matrix: TridiagonalSystem
    rhs: np.ndarray
    scheme_tag: str


# Stencils


def compact_stencil(r: float, s: float, h: float) -> Stencil:
    """Compact formula at 0 with neighbours -r h and s h (exact for degree <= 4)."""
    lhs = (1.0 / r**2, (s + r) ** 2 / (r**2 * s**2), 1.0 / s**2)
    weights = (
        -(4.0 * r + 2.0 * s) / (r**3 * h * (r + s)),
        -2.0 * (r - s) * (s + r) ** 2 / (r**3 * h * s**3),
        (4.0 * s + 2.0 * r) / (h * (r + s) * s**3),
    )
    return Stencil(lhs=lhs, weights=weights)


def spline_stencil(h_left: float, h_right: float) -> Stencil:
    """Spline C^2 condition at a node with flanking widths h_left, h_right."""
    total = h_left + h_right
    lhs = (2.0 * h_right / total, 4.0, 2.0 * h_left / total)
    right = 6.0 * h_left / (h_right * total)
    left = 6.0 * h_right / (h_left * total)
    # right * (rho_{k+1} - rho_k) + left * (rho_k - rho_{k-1})
    weights = (-left, left - right, right)
    return Stencil(lhs=lhs, weights=weights)


def compact4_edge_stencil(h1: float, h2: float, h3: float) -> Stencil:
    """a_0 v_0 + v_1 = c_0 rho_0 + ... + c_3 rho_3 with widths measured away from the edge."""
    s12 = h1 + h2
    s23 = h2 + h3
    s123 = h1 + h2 + h3
    a0 = h2 * s23 / (s12 * s123)
    c0 = -(h2 * s23 * (4 * h1**2 + 6 * h1 * h2 + 3 * h1 * h3 + 2 * h2**2 + 2 * h2 * h3)) / (
        h1 * s12**2 * s123**2
    )
    c1 = (2 * h2 * (h2 - h1) + h3 * (2 * h2 - h1)) / (h1 * h2 * s23)
    c2 = h1**2 * s23 / (h2 * s12**2 * h3)
    c3 = -(h1**2 * h2) / (h3 * s23 * s123**2)
    return Stencil(lhs=(a0, 1.0), weights=(c0, c1, c2, c3))


def compact_c_edge_stencil(h: float, c: float = TWO_PLUS_ROOT3) -> Stencil:
    """c v_0 + v_1 from five equally spaced values; exact for degree <= 4 for every c."""
    weights = (
        -25.0 * c / 12.0 - 0.25,
        4.0 * c - 5.0 / 6.0,
        -3.0 * c + 1.5,
        4.0 * c / 3.0 - 0.5,
        -c / 4.0 + 1.0 / 12.0,
    )
    return Stencil(lhs=(c, 1.0), weights=tuple(w / h for w in weights))


def _differenced(weights: tuple[float, ...], values) -> float:
    """sum_j w_j rho_j rewritten around rho_0, valid because the weights sum to zero."""
    base = values[0]
    return float(sum(w * (v - base) for w, v in zip(weights[1:], values[1:])))


# Interior rows


def _check_interior(mesh: Mesh, k: int) -> None:
    if not 1 <= k <= mesh.n - 1:
        raise IndexOutOfRangeError(f"interior index {k} outside 1..{mesh.n - 1}")


def spline_interior_row(mesh: Mesh, k: int, values) -> InteriorRow:
    """Rescaled spline equation at tau_k (centre coefficient 4)."""
    _check_interior(mesh, k)
    h_left, h_right = mesh.width(k), mesh.width(k + 1)
    stencil = spline_stencil(h_left, h_right)
    total = h_left + h_right
    rhs = 6.0 * h_left / (h_right * total) * (values[k + 1] - values[k]) + 6.0 * h_right / (
        h_left * total
    ) * (values[k] - values[k - 1])
    return InteriorRow(coeffs=stencil.lhs, rhs=float(rhs))


def compact_interior_row(mesh: Mesh, k: int, values) -> InteriorRow:
    """Fourth-order compact equation at tau_k with r, s from local_ratios."""
    _check_interior(mesh, k)
    r, s = local_ratios(mesh, k)
    stencil = compact_stencil(r, s, mesh.ref_step)
    w_minus, _, w_plus = stencil.weights
    rhs = w_minus * (values[k - 1] - values[k]) + w_plus * (values[k + 1] - values[k])
    return InteriorRow(coeffs=stencil.lhs, rhs=float(rhs))


# Edge rows


def _edge_view(mesh: Mesh, values, end: End, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Signed widths and values read inward from ``end`` (tau_k <-> tau_{n-k} on the right)."""
    values = np.asarray(values, dtype=float)
    if End(end) == End.LEFT:
        return mesh.widths[:count], values[: count + 1]
    return -mesh.widths[::-1][:count], values[::-1][: count + 1]


def _positive(row: EdgeRow) -> EdgeRow:
    if row.diag < 0:
        return EdgeRow(diag=-row.diag, off=-row.off, rhs=-row.rhs)
    return row


def edge_rows_compact4(mesh: Mesh, values, end: End) -> EdgeRow:
    """Four-node compact closure a_0 v_0 + v_1 = sum c_j rho_j (mirrored on the right)."""
    mesh.require_intervals(4)
    widths, rho = _edge_view(mesh, values, end, 3)
    stencil = compact4_edge_stencil(*widths)
    return EdgeRow(diag=stencil.lhs[0], off=1.0, rhs=_differenced(stencil.weights, rho))


def edge_rows_compact_c(mesh: Mesh, values, end: End, c: float = TWO_PLUS_ROOT3) -> EdgeRow:
    """Five-node closure with fixed ratio c = a_0/b_0; uniform meshes only."""
    mesh.require_intervals(4)
    if not mesh.is_uniform(get_settings().uniform_rtol):
        raise NonUniformUnsupportedError("the fixed-ratio edge closure needs a uniform mesh")
    h = mesh.ref_step if End(end) == End.LEFT else -mesh.ref_step
    _, rho = _edge_view(mesh, values, end, 4)
    stencil = compact_c_edge_stencil(h, c)
    return EdgeRow(diag=c, off=1.0, rhs=_differenced(stencil.weights, rho))


def edge_rows_classical(values, mesh: Mesh, scheme: EdgeScheme, end: End) -> EdgeRow:
    """Natural, clamped or not-a-knot closure as a tridiagonal-compatible row."""
    end = End(end)
    if scheme.kind == EdgeKind.CLAMPED:
        mesh.require_intervals(1)
        return EdgeRow(diag=1.0, off=0.0, rhs=scheme.d_left if end == End.LEFT else scheme.d_right)

    if scheme.kind == EdgeKind.NATURAL:
        mesh.require_intervals(2)
        (h1,), rho = _edge_view(mesh, values, end, 1)
        return _positive(EdgeRow(diag=2.0, off=1.0, rhs=3.0 * (rho[1] - rho[0]) / h1))

    if scheme.kind == EdgeKind.NOT_A_KNOT:
        mesh.require_intervals(3)
        (h1, h2), rho = _edge_view(mesh, values, end, 2)
        d1 = (rho[1] - rho[0]) / h1
        d2 = (rho[2] - rho[1]) / h2
        rhs = (d1 * h2 * (3.0 * h1 + 2.0 * h2) + h1**2 * d2) / (h1 + h2)
        return _positive(EdgeRow(diag=h2, off=h1 + h2, rhs=float(rhs)))

    raise ValueError(f"{scheme.kind.value} is not a classical closure")


def edge_row(mesh: Mesh, values, scheme: EdgeScheme, end: End) -> EdgeRow:
    """Dispatch to the builder for ``scheme``."""
    if scheme.kind == EdgeKind.COMPACT4:
        return edge_rows_compact4(mesh, values, end)
    if scheme.kind == EdgeKind.COMPACT_C:
        c = TWO_PLUS_ROOT3 if End(end) == End.LEFT else scheme.right_ratio
        return edge_rows_compact_c(mesh, values, end, c)
    return edge_rows_classical(values, mesh, scheme, end)


# Systems


def assemble(mesh: Mesh, values, interior: InteriorRule, edges: EdgeScheme) -> AssembledSystem:
    """(n+1) x (n+1) slope system for the chosen interior rule and edge closure."""
    interior = InteriorRule(interior)
    values = np.asarray(values, dtype=float)
    if len(values) != mesh.size:
        raise ValueError(f"expected {mesh.size} values, got {len(values)}")
    if mesh.n < edges.min_intervals:
        raise TooFewNodesError(edges.min_intervals, mesh.n)

    n = mesh.n
    sub = np.zeros(n)
    diag = np.zeros(n + 1)
    sup = np.zeros(n)
    rhs = np.zeros(n + 1)

    build = spline_interior_row if interior == InteriorRule.SPLINE else compact_interior_row
    for k in range(1, n):
        row = build(mesh, k, values)
        sub[k - 1], diag[k], sup[k] = row.coeffs
        rhs[k] = row.rhs

    left = edge_row(mesh, values, edges, End.LEFT)
    diag[0], sup[0], rhs[0] = left.diag, left.off, left.rhs
    right = edge_row(mesh, values, edges, End.RIGHT)
    diag[n], sub[n - 1], rhs[n] = right.diag, right.off, right.rhs

    tag = f"{interior.value}+{edges.kind.value}"
    logger.debug(f"assembled {n + 1}x{n + 1} system {tag}")
    return AssembledSystem(matrix=TridiagonalSystem(sub=sub, diag=diag, sup=sup), rhs=rhs, scheme_tag=tag)


def theorem_matrix(mesh: Mesh) -> TridiagonalSystem:
    """Compact matrix with four-node edges, interior rows scaled to (h_{k+1}^2, (h_k+h_{k+1})^2, h_k^2)."""
    mesh.require_intervals(4)
    n = mesh.n
    h = mesh.widths
    sub = np.empty(n)
    diag = np.empty(n + 1)
    sup = np.empty(n)

    diag[0] = compact4_edge_stencil(h[0], h[1], h[2]).lhs[0]
    sup[0] = 1.0
    for k in range(1, n):
        h_left, h_right = h[k - 1], h[k]
        sub[k - 1] = h_right**2
        diag[k] = (h_left + h_right) ** 2
        sup[k] = h_left**2
    diag[n] = compact4_edge_stencil(-h[n - 1], -h[n - 2], -h[n - 3]).lhs[0]
    sub[n - 1] = 1.0
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup)
