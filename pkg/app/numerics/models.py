"""Numerics data models."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

TWO_PLUS_ROOT3 = 2.0 + 3.0**0.5


class EdgeKind(str, Enum):
    """Closure used for the first and last rows of the slope system."""

    NATURAL = "natural"
    CLAMPED = "clamped"
    NOT_A_KNOT = "notaknot"
    COMPACT4 = "compact4"
    COMPACT_C = "compactc"

    @property
    def is_compact(self) -> bool:
        return self in (EdgeKind.COMPACT4, EdgeKind.COMPACT_C)

    @property
    def is_classical(self) -> bool:
        return not self.is_compact


class InteriorRule(str, Enum):
    """Equations used at interior nodes."""

    SPLINE = "spline"
    COMPACT = "compact"


class End(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class Side(str, Enum):
    """Which flanking piece supplies a one-sided limit at a node."""

    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class EdgeScheme:
    """Edge closure; ``d_left``/``d_right`` are only meaningful for CLAMPED.

    ``right_ratio`` is the diagonal entry of the last row for COMPACT_C.
    """

    kind: EdgeKind
    d_left: float = 0.0
    d_right: float = 0.0
    right_ratio: float = TWO_PLUS_ROOT3

    @classmethod
    def natural(cls) -> "EdgeScheme":
        return cls(EdgeKind.NATURAL)

    @classmethod
    def clamped(cls, d_left: float, d_right: float) -> "EdgeScheme":
        return cls(EdgeKind.CLAMPED, d_left=d_left, d_right=d_right)

    @classmethod
    def not_a_knot(cls) -> "EdgeScheme":
        return cls(EdgeKind.NOT_A_KNOT)

    @classmethod
    def compact4(cls) -> "EdgeScheme":
        return cls(EdgeKind.COMPACT4)

    @classmethod
    def compact_c(cls, right_ratio: float = TWO_PLUS_ROOT3) -> "EdgeScheme":
        return cls(EdgeKind.COMPACT_C, right_ratio=right_ratio)

    @property
    def min_intervals(self) -> int:
        if self.kind.is_compact:
            return 4
        if self.kind == EdgeKind.NOT_A_KNOT:
            return 3
        return 2


@dataclass(frozen=True)
class InteriorRow:
    """coeffs multiply (v_{k-1}, v_k, v_{k+1})."""

    coeffs: tuple[float, float, float]
    rhs: float


@dataclass(frozen=True)
class EdgeRow:
    """``diag`` multiplies the end slope, ``off`` its neighbour."""

    diag: float
    off: float
    rhs: float


@dataclass(frozen=True)
class BaryWeights:
    """Partial-fraction weights of 1/((t - tau_k)^2 (t - tau_{k+1})^2).

    beta_k0 pairs with 1/(t - tau_k), beta_k1 with 1/(t - tau_k)^2, and
    likewise at tau_{k+1}.
    """

    beta_k0: float
    beta_k1: float
    beta_k1_0: float
    beta_k1_1: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.beta_k0, self.beta_k1, self.beta_k1_0, self.beta_k1_1)


@dataclass(frozen=True)
class LUFactors:
    """A = L U with L unit lower bidiagonal and U upper bidiagonal."""

    l_sub: np.ndarray
    u_diag: np.ndarray
    u_sup: np.ndarray


@dataclass(frozen=True)
class MinorSequence:
    """Leading principal minors D^1..D^m of the scaled compact matrix."""

    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    @property
    def determinant(self) -> float:
        return float(self.values[-1])

    @property
    def all_positive(self) -> bool:
        return bool(np.all(self.values > 0))


@dataclass(frozen=True)
class TNVerdict:
    """Outcome of the Gantmacher-Krein test; falsy when a violation was found."""

    totally_nonnegative: bool
    violation: str | None = None
    index: int | None = None
    value: float | None = None

    def __bool__(self) -> bool:
        return self.totally_nonnegative


@dataclass(frozen=True)
class DerivativeResult:
    """Nodal slope approximations from one solved system."""

    slopes: np.ndarray
    scheme_tag: str
    condition: float | None = None


@dataclass(frozen=True)
class TruncationFit:
    """Residual ~ coefficient * h**order fitted over a step sweep."""

    order: float
    coefficient: float
    steps: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)


class ProbeFormula(str, Enum):
    """Difference formulas whose truncation error can be probed."""

    INTERIOR_COMPACT = "interior-compact"
    INTERIOR_SPLINE = "interior-spline"
    EDGE_COMPACT4 = "edge-compact4"
    EDGE_COMPACT_C = "edge-compact-c"
    SECOND_DERIVATIVE_COMPACT = "second-derivative-compact"
    SECOND_DERIVATIVE_MIXED = "second-derivative-mixed"

    @property
    def derivative_order(self) -> int:
        """Which derivative of f the formula approximates."""
        if self in (ProbeFormula.SECOND_DERIVATIVE_COMPACT, ProbeFormula.SECOND_DERIVATIVE_MIXED):
            return 2
        return 1


@dataclass(frozen=True)
class LeadingTerm:
    """Residual ~ constant * h**order * f^(derivative)(x0)."""

    order: int
    constant: float
    derivative: int
