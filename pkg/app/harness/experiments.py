"""Convergence runs, second-derivative jump profiles and condition-number histograms."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from app.config import get_settings
from app.harness.functions import TestFunction, get_function
from app.numerics.assembly import assemble
from app.numerics.driver import nodal_slopes
from app.numerics.errors import PreconditionError
from app.numerics.hermite import PiecewiseCubic, c2_jumps, evaluate, evaluate_derivative
from app.numerics.mesh import Mesh, mesh_chebyshev, mesh_from_widths, mesh_uniform
from app.numerics.models import DerivativeResult, EdgeScheme, InteriorRule
from app.numerics.tridiag import one_norm_condition

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ("err_value", "err_deriv_nodes", "err_deriv_between")


class Method(str, Enum):
    """Interpolation methods selectable from the CLI and the API."""

    SPLINE_NATURAL = "spline-natural"
    SPLINE_CLAMPED = "spline-clamped"
    SPLINE_NOT_A_KNOT = "spline-notaknot"
    COMPACT4 = "compact4"
    COMPACT_C = "compactc"

    @property
    def interior(self) -> InteriorRule:
        if self in (Method.COMPACT4, Method.COMPACT_C):
            return InteriorRule.COMPACT
        return InteriorRule.SPLINE

    def edges(self, d_left: float | None = None, d_right: float | None = None) -> EdgeScheme:
        if self == Method.SPLINE_CLAMPED:
            if d_left is None or d_right is None:
                raise PreconditionError("spline-clamped needs both end derivatives")
            return EdgeScheme.clamped(d_left, d_right)
        return {
            Method.SPLINE_NATURAL: EdgeScheme.natural(),
            Method.SPLINE_NOT_A_KNOT: EdgeScheme.not_a_knot(),
            Method.COMPACT4: EdgeScheme.compact4(),
            Method.COMPACT_C: EdgeScheme.compact_c(),
        }[self]


class MeshKind(str, Enum):
    UNIFORM = "uniform"
    CHEBYSHEV = "chebyshev"
    RANDOM = "random"


def fit(
    method: Method,
    mesh: Mesh,
    values,
    d_left: float | None = None,
    d_right: float | None = None,
    condition: bool = True,
) -> tuple[PiecewiseCubic, DerivativeResult]:
    """Interpolant for ``method`` plus the solved slope system."""
    method = Method(method)
    result = nodal_slopes(mesh, values, method.interior, method.edges(d_left, d_right), condition=condition)
    p = PiecewiseCubic(mesh=mesh, values=values, slopes=result.slopes, scheme_tag=result.scheme_tag)
    return p, result


def build_mesh(kind: MeshKind, a: float, b: float, n: int, rng: np.random.Generator | None = None) -> Mesh:
    kind = MeshKind(kind)
    if kind == MeshKind.UNIFORM:
        return mesh_uniform(a, b, n)
    if kind == MeshKind.CHEBYSHEV:
        return mesh_chebyshev(a, b, n)
    if rng is None:
        raise PreconditionError("random meshes need a random generator")
    return mesh_from_widths(rng.random(n), a, b)


def probe_points(mesh: Mesh, per_interval: int | None = None) -> np.ndarray:
    """Points at fractions (j + 1/2)/P of every subinterval."""
    per_interval = per_interval or get_settings().probes_per_interval
    fractions = (np.arange(per_interval) + 0.5) / per_interval
    points = mesh.nodes[:-1, None] + mesh.widths[:, None] * fractions[None, :]
    return points.ravel()


# Convergence


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    mesh_kind: str
    err_value: float
    err_deriv_nodes: float
    err_deriv_between: float
    cond: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mesh_kind": self.mesh_kind,
            "err_value": self.err_value,
            "err_deriv_nodes": self.err_deriv_nodes,
            "err_deriv_between": self.err_deriv_between,
            "cond": self.cond,
        }


@dataclass
class ConvergenceReport:
    """Rows in increasing n with fitted convergence orders per error column.

    Slopes are reported as positive orders (error ~ n^-slope); None when
    fewer than two rows lie above the rounding floor.
    """

    function: str
    method: str
    mesh_kind: str
    seed: int | None = None
    rows: list[ConvergenceRow] = field(default_factory=list)
    slopes: dict[str, float | None] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "method": self.method,
            "mesh_kind": self.mesh_kind,
            "seed": self.seed,
            "rows": [row.to_dict() for row in self.rows],
            "slopes": self.slopes,
            "notes": self.notes,
        }


def _resolve(function: str | TestFunction) -> TestFunction:
    return function if isinstance(function, TestFunction) else get_function(function)


def _away_from_jumps(func: TestFunction, points: np.ndarray, margin: float) -> np.ndarray:
    keep = np.ones(points.shape, dtype=bool)
    for jump in func.jumps:
        keep &= np.abs(points - jump) > margin
    return keep


def _end_derivatives(func: TestFunction, mesh: Mesh, method: Method) -> tuple[float | None, float | None]:
    if Method(method) != Method.SPLINE_CLAMPED:
        return None, None
    d_left, d_right = (float(v) for v in func.d1(mesh.nodes[[0, -1]]))
    return d_left, d_right


def _max_error(approx: np.ndarray, exact: np.ndarray, keep: np.ndarray) -> float:
    if not np.any(keep):
        return float("nan")
    return float(np.max(np.abs(approx[keep] - exact[keep])))


def convergence_row(
    function: str | TestFunction,
    mesh_kind: MeshKind,
    method: Method,
    n: int,
    rng: np.random.Generator | None = None,
    a: float | None = None,
    b: float | None = None,
) -> ConvergenceRow:
    """Errors of one fit: values and derivatives between nodes, derivatives at nodes."""
    func = _resolve(function)
    a = func.a if a is None else a
    b = func.b if b is None else b
    mesh = build_mesh(mesh_kind, a, b, n, rng)
    values = func.f(mesh.nodes)

    p, result = fit(method, mesh, values, *_end_derivatives(func, mesh, method))

    margin = float(np.max(np.abs(mesh.widths)))
    points = probe_points(mesh)
    keep_points = _away_from_jumps(func, points, margin)
    keep_nodes = _away_from_jumps(func, mesh.nodes, margin)

    row = ConvergenceRow(
        n=n,
        mesh_kind=MeshKind(mesh_kind).value,
        err_value=_max_error(evaluate(p, points), func.f(points), keep_points),
        err_deriv_nodes=_max_error(result.slopes, func.d1(mesh.nodes), keep_nodes),
        err_deriv_between=_max_error(evaluate_derivative(p, points), func.d1(points), keep_points),
        cond=float(result.condition),
    )
    logger.info(
        f"{func.name} {row.mesh_kind} {Method(method).value} n={n}: "
        f"value {row.err_value:.3e}, nodes {row.err_deriv_nodes:.3e}, between {row.err_deriv_between:.3e}"
    )
    return row


def spawn_generators(seed: int | None, count: int) -> list[np.random.Generator]:
    """One independent generator per task, so results do not depend on execution order."""
    seed = get_settings().default_seed if seed is None else seed
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def fit_slopes(rows: Sequence[ConvergenceRow], scales: dict[str, float]) -> dict[str, float | None]:
    """Least-squares order -d log(err)/d log(n) per column, above the rounding floor."""
    floor = get_settings().rounding_floor_factor * np.finfo(float).eps
    slopes: dict[str, float | None] = {}
    for column in REPORT_COLUMNS:
        ns, errs = [], []
        for row in rows:
            err = getattr(row, column)
            if np.isfinite(err) and err > floor * scales[column]:
                ns.append(row.n)
                errs.append(err)
        if len(ns) < 2:
            slopes[column] = None
            continue
        slopes[column] = float(-np.polyfit(np.log(ns), np.log(errs), 1)[0])
    return slopes


def error_scales(function: str | TestFunction, a: float | None = None, b: float | None = None) -> dict[str, float]:
    """Magnitudes of f and f' on the interval, used for the rounding floor."""
    func = _resolve(function)
    grid = np.linspace(func.a if a is None else a, func.b if b is None else b, get_settings().eval_grid)
    value_scale = max(float(np.max(np.abs(func.f(grid)))), 1.0)
    deriv_scale = max(float(np.max(np.abs(func.d1(grid)))), 1.0)
    return {"err_value": value_scale, "err_deriv_nodes": deriv_scale, "err_deriv_between": deriv_scale}


def _recorded_seed(mesh_kind: MeshKind, seed: int | None) -> int | None:
    if MeshKind(mesh_kind) != MeshKind.RANDOM:
        return None
    return get_settings().default_seed if seed is None else seed


def empty_report(
    function: str | TestFunction, mesh_kind: MeshKind, method: Method, seed: int | None = None
) -> ConvergenceReport:
    """Report header; the seed is recorded only for random meshes."""
    func = _resolve(function)
    mesh_kind = MeshKind(mesh_kind)
    seed = _recorded_seed(mesh_kind, seed)
    report = ConvergenceReport(function=func.name, method=Method(method).value, mesh_kind=mesh_kind.value, seed=seed)
    if func.jumps:
        report.notes.append("errors within one mesh width of a discontinuity are excluded")
    return report


def iter_convergence(
    function: str | TestFunction,
    mesh_kind: MeshKind,
    method: Method,
    n_list: Sequence[int],
    seed: int | None = None,
    a: float | None = None,
    b: float | None = None,
) -> Iterator[ConvergenceRow]:
    """Rows of run_convergence one at a time, in the order of n_list."""
    n_list = list(n_list)
    if any(later <= earlier for earlier, later in zip(n_list, n_list[1:])):
        raise PreconditionError("n_list must be strictly increasing")
    generators = spawn_generators(seed, len(n_list))
    for n, rng in zip(n_list, generators):
        yield convergence_row(function, mesh_kind, method, n, rng, a, b)


def run_convergence(
    function: str | TestFunction,
    mesh_kind: MeshKind,
    method: Method,
    n_list: Sequence[int],
    seed: int | None = None,
    a: float | None = None,
    b: float | None = None,
) -> ConvergenceReport:
    """Errors of ``method`` on ``function`` for each n, with fitted orders."""
    func = _resolve(function)
    report = empty_report(func, mesh_kind, method, seed)
    report.rows = list(iter_convergence(func, mesh_kind, method, n_list, seed, a, b))
    report.slopes = fit_slopes(report.rows, error_scales(func, a, b))
    return report


# Second-derivative jumps


@dataclass
class JumpProfile:
    """p''(tau_k+) - p''(tau_k-) at the interior nodes of one fit."""

    function: str
    method: str
    mesh_kind: str
    n: int
    seed: int | None
    x: np.ndarray
    jumps: np.ndarray

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "method": self.method,
            "mesh_kind": self.mesh_kind,
            "n": self.n,
            "seed": self.seed,
            "x": self.x.tolist(),
            "jumps": self.jumps.tolist(),
        }


def run_c2_jumps(
    function: str | TestFunction,
    mesh_kind: MeshKind,
    method: Method,
    n: int,
    seed: int | None = None,
    a: float | None = None,
    b: float | None = None,
) -> JumpProfile:
    """Second-derivative jumps of ``method`` fitted to ``function`` on one mesh."""
    func = _resolve(function)
    mesh_kind = MeshKind(mesh_kind)
    seed = _recorded_seed(mesh_kind, seed)
    rng = spawn_generators(seed, 1)[0] if mesh_kind == MeshKind.RANDOM else None
    mesh = build_mesh(mesh_kind, func.a if a is None else a, func.b if b is None else b, n, rng)
    p, _ = fit(method, mesh, func.f(mesh.nodes), *_end_derivatives(func, mesh, method), condition=False)
    jumps = c2_jumps(p)
    peak = float(np.abs(jumps).max()) if jumps.size else 0.0
    logger.info(f"{func.name} {mesh_kind.value} {Method(method).value} n={n}: max jump {peak:.3e}")
    return JumpProfile(
        function=func.name,
        method=Method(method).value,
        mesh_kind=mesh_kind.value,
        n=n,
        seed=seed,
        x=mesh.nodes[1:-1].copy(),
        jumps=jumps,
    )


# Condition histograms


@dataclass
class CondHistogram:
    """Histogram of log10 of the 1-norm condition of random-mesh compact matrices."""

    samples: int
    n: int
    seed: int
    edges: np.ndarray
    counts: np.ndarray
    conditions: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "n": self.n,
            "seed": self.seed,
            "edges": self.edges.tolist(),
            "counts": self.counts.tolist(),
            "mean_condition": float(np.mean(self.conditions)),
            "max_condition": float(np.max(self.conditions)),
        }


def compact_condition(widths) -> float:
    """1-norm condition of the compact matrix with four-node edges for a mesh with these widths."""
    mesh = mesh_from_widths(widths)
    system = assemble(mesh, np.zeros(mesh.size), InteriorRule.COMPACT, EdgeScheme.compact4())
    return one_norm_condition(system.matrix)


def run_cond_histogram(n: int, trials: int, seed: int | None = None, bins: int | None = None) -> CondHistogram:
    """Condition numbers for ``trials`` meshes with n widths drawn uniform on (0, 1)."""
    if n < 4:
        raise PreconditionError(f"histogram meshes need n >= 4, got {n}")
    if trials < 1:
        raise PreconditionError(f"trials must be positive, got {trials}")
    settings = get_settings()
    seed = settings.default_seed if seed is None else seed
    bins = bins or settings.histogram_bins

    conditions = np.empty(trials)
    for i, rng in enumerate(spawn_generators(seed, trials)):
        conditions[i] = compact_condition(rng.random(n))
    counts, edges = np.histogram(np.log10(conditions), bins=bins)
    logger.info(f"condition histogram: n={n}, trials={trials}, seed={seed}, median {np.median(conditions):.4g}")
    return CondHistogram(samples=trials, n=n, seed=seed, edges=edges, counts=counts, conditions=conditions)
