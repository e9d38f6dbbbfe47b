"""Piecewise cubic Hermite interpolants.

Each piece p_k on [tau_k, tau_{k+1}] is fixed by the values and slopes at
its two ends. Evaluation uses the cubic Hermite basis in the local variable
theta = (t - tau_k) / h_{k+1}, which reproduces nodal values and slopes
exactly; the second barycentric form is kept as an independent evaluator.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from app.numerics.errors import (
    IndexOutOfRangeError,
    InputFormatError,
    OutOfDomainError,
    SideUnavailableError,
    ZeroWidthError,
)
from app.numerics.mesh import Mesh, mesh_from_nodes
from app.numerics.models import BaryWeights, Side


def _readonly(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PiecewiseCubic:
    """C^1 piecewise cubic through (tau_k, values[k]) with slopes[k]."""

    mesh: Mesh
    values: np.ndarray
    slopes: np.ndarray
    scheme_tag: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        object.__setattr__(self, "slopes", _readonly(self.slopes))
        if len(self.values) != self.mesh.size or len(self.slopes) != self.mesh.size:
            raise ValueError(f"values and slopes must have length {self.mesh.size}")

    def __call__(self, t):
        return evaluate(self, t)


@dataclass(frozen=True, eq=False)
class PpForm:
    """Breaks plus per-piece coefficients in ascending powers of (t - tau_k)."""

    breaks: np.ndarray
    coefs: np.ndarray = field(repr=False)

    @property
    def pieces(self) -> int:
        return len(self.coefs)

    def evaluate(self, t):
        mesh = mesh_from_nodes(self.breaks)
        k, tt, scalar = _locate(mesh, t)
        dt = tt - mesh.nodes[k]
        a, b, c, d = (self.coefs[k, j] for j in range(4))
        result = a + dt * (b + dt * (c + dt * d))
        return float(result[0]) if scalar else result

    def to_dict(self) -> dict:
        return {"breaks": self.breaks.tolist(), "coefs": self.coefs.tolist()}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "PpForm":
        try:
            breaks = np.asarray(data["breaks"], dtype=float)
            coefs = np.asarray(data["coefs"], dtype=float).reshape(-1, 4)
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"malformed ppform: {e}") from e
        if len(coefs) != len(breaks) - 1:
            raise InputFormatError(f"{len(breaks)} breaks need {len(breaks) - 1} pieces, got {len(coefs)}")
        return cls(breaks=breaks, coefs=coefs)


def bary_weights(h: float) -> BaryWeights:
    """Weights of the partial fractions of 1/((t - tau_k)^2 (t - tau_{k+1})^2), h = tau_{k+1} - tau_k."""
    if h == 0:
        raise ZeroWidthError("subinterval width must be nonzero")
    return BaryWeights(
        beta_k0=2.0 / h**3,
        beta_k1=1.0 / h**2,
        beta_k1_0=-2.0 / h**3,
        beta_k1_1=1.0 / h**2,
    )


def _locate(mesh: Mesh, t) -> tuple[np.ndarray, np.ndarray, bool]:
    """Piece index for each t; a point on an interior node belongs to the piece starting there."""
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~np.isfinite(tt)) or np.any(tt < mesh.lower) or np.any(tt > mesh.upper):
        raise OutOfDomainError(f"evaluation point outside [{mesh.lower}, {mesh.upper}]")

    if mesh.increasing:
        k = np.searchsorted(mesh.nodes, tt, side="right") - 1
    else:
        k = np.searchsorted(-mesh.nodes, -tt, side="right") - 1
    return np.clip(k, 0, mesh.n - 1), tt, scalar


def _piece_data(p: PiecewiseCubic, k: np.ndarray, tt: np.ndarray):
    h = p.mesh.widths[k]
    theta = (tt - p.mesh.nodes[k]) / h
    return h, theta, p.values[k], p.values[k + 1], p.slopes[k], p.slopes[k + 1]


def _value(h, theta, y0, y1, s0, s1):
    one_minus = 1.0 - theta
    return (
        one_minus**2 * (1.0 + 2.0 * theta) * y0
        + theta * one_minus**2 * h * s0
        + theta**2 * (3.0 - 2.0 * theta) * y1
        + theta**2 * (theta - 1.0) * h * s1
    )


def _first(h, theta, y0, y1, s0, s1):
    return (
        6.0 * theta * (theta - 1.0) * (y0 - y1) / h
        + (1.0 - theta) * (1.0 - 3.0 * theta) * s0
        + theta * (3.0 * theta - 2.0) * s1
    )


def _second(h, theta, y0, y1, s0, s1):
    return (
        (12.0 * theta - 6.0) * (y0 - y1) / h
        + (6.0 * theta - 4.0) * s0
        + (6.0 * theta - 2.0) * s1
    ) / h


def evaluate(p: PiecewiseCubic, t):
    """Value of the interpolant; no extrapolation outside [tau_0, tau_n]."""
    k, tt, scalar = _locate(p.mesh, t)
    result = _value(*_piece_data(p, k, tt))
    return float(result[0]) if scalar else result


def evaluate_derivative(p: PiecewiseCubic, t):
    """First derivative of the interpolant."""
    k, tt, scalar = _locate(p.mesh, t)
    result = _first(*_piece_data(p, k, tt))
    return float(result[0]) if scalar else result


def evaluate_second_derivative(p: PiecewiseCubic, t, side: Side = Side.RIGHT):
    """Second derivative; at a node ``side`` picks the piece (left = lower index)."""
    side = Side(side)
    k, tt, scalar = _locate(p.mesh, t)
    nodes = p.mesh.nodes
    n = p.mesh.n

    at_first = tt == nodes[0]
    at_last = tt == nodes[n]
    if side == Side.LEFT and np.any(at_first):
        raise SideUnavailableError("no piece to the left of tau_0")
    if side == Side.RIGHT and np.any(at_last):
        raise SideUnavailableError("no piece to the right of tau_n")

    if side == Side.LEFT:
        on_node = (tt == nodes[k]) & (k >= 1)
        k = np.where(on_node, k - 1, k)

    result = _second(*_piece_data(p, k, tt))
    return float(result[0]) if scalar else result


def evaluate_barycentric(p: PiecewiseCubic, t):
    """Second barycentric Hermite form of the piece containing t."""
    k, tt, scalar = _locate(p.mesh, t)
    result = np.empty_like(tt)
    for i, (piece, x) in enumerate(zip(k, tt)):
        left, right = p.mesh.nodes[piece], p.mesh.nodes[piece + 1]
        if x == left:
            result[i] = p.values[piece]
            continue
        if x == right:
            result[i] = p.values[piece + 1]
            continue
        w = bary_weights(p.mesh.widths[piece])
        dl, dr = x - left, x - right
        numerator = (
            w.beta_k0 * p.values[piece] / dl
            + w.beta_k1 * (p.values[piece] / dl**2 + p.slopes[piece] / dl)
            + w.beta_k1_0 * p.values[piece + 1] / dr
            + w.beta_k1_1 * (p.values[piece + 1] / dr**2 + p.slopes[piece + 1] / dr)
        )
        denominator = w.beta_k0 / dl + w.beta_k1 / dl**2 + w.beta_k1_0 / dr + w.beta_k1_1 / dr**2
        result[i] = numerator / denominator
    return float(result[0]) if scalar else result


def to_ppform(p: PiecewiseCubic) -> PpForm:
    """Local monomial coefficients (a_k, b_k, c_k, d_k) of every piece."""
    h = p.mesh.widths
    y0, y1 = p.values[:-1], p.values[1:]
    s0, s1 = p.slopes[:-1], p.slopes[1:]
    secant = (y1 - y0) / h
    c = (3.0 * secant - 2.0 * s0 - s1) / h
    d = (s0 + s1 - 2.0 * secant) / h**2
    return PpForm(breaks=p.mesh.nodes.copy(), coefs=np.column_stack((y0, s0, c, d)))


def c2_jump(p: PiecewiseCubic, k: int) -> float:
    """p''(tau_k+) - p''(tau_k-) at an interior node."""
    if not 1 <= k <= p.mesh.n - 1:
        raise IndexOutOfRangeError(f"interior index {k} outside 1..{p.mesh.n - 1}")
    left = _second(*_piece_data(p, np.array([k - 1]), np.array([p.mesh.nodes[k]])))
    right = _second(*_piece_data(p, np.array([k]), np.array([p.mesh.nodes[k]])))
    return float(right[0] - left[0])


def c2_jumps(p: PiecewiseCubic) -> np.ndarray:
    """c2_jump at every interior node."""
    return np.array([c2_jump(p, k) for k in range(1, p.mesh.n)])
