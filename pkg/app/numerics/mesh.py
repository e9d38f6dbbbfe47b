"""Meshes: strictly monotone node vectors and their width quantities."""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from app.numerics.errors import (
    DegenerateIntervalError,
    IndexOutOfRangeError,
    NonMonotoneError,
    TooFewNodesError,
)


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class Mesh:
    """Partition tau_0..tau_n of [a, b], increasing or decreasing.

    ``widths[k-1]`` holds h_k = tau_k - tau_{k-1} for k = 1..n.
    """

    nodes: np.ndarray
    widths: np.ndarray = field(repr=False)
    ref_step: float

    @property
    def n(self) -> int:
        """Number of subintervals."""
        return len(self.nodes) - 1

    @property
    def size(self) -> int:
        """Number of nodes, n + 1."""
        return len(self.nodes)

    @property
    def increasing(self) -> bool:
        return bool(self.widths[0] > 0)

    @property
    def lower(self) -> float:
        return float(min(self.nodes[0], self.nodes[-1]))

    @property
    def upper(self) -> float:
        return float(max(self.nodes[0], self.nodes[-1]))

    def width(self, k: int) -> float:
        """h_k = tau_k - tau_{k-1}, 1-based as in the formulas."""
        if not 1 <= k <= self.n:
            raise IndexOutOfRangeError(f"width index {k} outside 1..{self.n}")
        return float(self.widths[k - 1])

    def is_uniform(self, rtol: float) -> bool:
        """True when every width equals ref_step to within rtol."""
        return bool(np.all(np.abs(self.widths - self.ref_step) <= rtol * abs(self.ref_step)))

    def require_intervals(self, needed: int) -> None:
        if self.n < needed:
            raise TooFewNodesError(needed, self.n)

    def reversed(self) -> "Mesh":
        """The same nodes labelled from the other end (tau_k <-> tau_{n-k})."""
        return mesh_from_nodes(self.nodes[::-1])

    def scaled(self, factor: float) -> "Mesh":
        """Nodes multiplied by ``factor`` (used to check that ref_step cancels)."""
        return mesh_from_nodes(self.nodes * factor)


def mesh_from_nodes(nodes: Sequence[float] | np.ndarray) -> Mesh:
    """Build a mesh from a strictly monotone node vector."""
    tau = np.array(nodes, dtype=float).ravel()
    if tau.size < 2:
        raise TooFewNodesError(2, int(tau.size), what="nodes")
    if not np.all(np.isfinite(tau)):
        raise NonMonotoneError("nodes must be finite")

    widths = np.diff(tau)
    if np.any(widths == 0):
        k = int(np.flatnonzero(widths == 0)[0]) + 1
        raise NonMonotoneError(f"duplicate node: h_{k} is zero")
    if not (np.all(widths > 0) or np.all(widths < 0)):
        raise NonMonotoneError("mesh widths change sign")

    n = tau.size - 1
    ref_step = (tau[-1] - tau[0]) / n
    return Mesh(nodes=_frozen(tau), widths=_frozen(widths), ref_step=float(ref_step))


def mesh_uniform(a: float, b: float, n: int) -> Mesh:
    """Equally spaced mesh tau_k = a + (b - a) k / n."""
    if a == b:
        raise DegenerateIntervalError(f"interval [{a}, {b}] has zero length")
    if n < 1:
        raise TooFewNodesError(1, n)
    k = np.arange(n + 1, dtype=float)
    return mesh_from_nodes(a + (b - a) * k / n)


def mesh_chebyshev(a: float, b: float, n: int) -> Mesh:
    """Chebyshev extreme points mid + half*cos(pi j / n), labelled from b down to a."""
    if a == b:
        raise DegenerateIntervalError(f"interval [{a}, {b}] has zero length")
    if n < 1:
        raise TooFewNodesError(1, n)
    j = np.arange(n + 1, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid + half * np.cos(np.pi * j / n)
    nodes[0], nodes[-1] = b, a
    return mesh_from_nodes(nodes)


def mesh_from_widths(widths: Sequence[float] | np.ndarray, a: float = -1.0, b: float = 1.0) -> Mesh:
    """Cumulative sum of widths, mapped affinely onto [a, b]."""
    w = np.asarray(widths, dtype=float)
    if w.size < 1:
        raise TooFewNodesError(1, 0)
    cumulative = np.concatenate(([0.0], np.cumsum(w)))
    total = cumulative[-1]
    if total == 0:
        raise DegenerateIntervalError("widths sum to zero")
    nodes = a + (b - a) * cumulative / total
    nodes[-1] = b
    return mesh_from_nodes(nodes)


def local_ratios(mesh: Mesh, k: int) -> tuple[float, float]:
    """Widths flanking interior node tau_k divided by ref_step: (h_k/h, h_{k+1}/h)."""
    if not 1 <= k <= mesh.n - 1:
        raise IndexOutOfRangeError(f"interior index {k} outside 1..{mesh.n - 1}")
    h = mesh.ref_step
    return float(mesh.widths[k - 1] / h), float(mesh.widths[k] / h)
