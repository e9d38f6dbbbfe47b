"""Tridiagonal linear algebra.

Solve and LU run the Thomas algorithm without pivoting: the compact and
spline matrices are positive definite whenever the mesh widths share a sign,
and elimination keeps the bidiagonal structure of the factors. A
``SingularPivotError`` guards arbitrary caller-supplied systems.
"""

import logging
from dataclasses import dataclass

import numpy as np

from app.config import get_settings
from app.numerics.errors import (
    ReducibleError,
    SingularPivotError,
    TooFewNodesError,
)
from app.numerics.mesh import Mesh
from app.numerics.models import LUFactors, MinorSequence, TNVerdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """m x m tridiagonal matrix; ``sub[i] = A[i+1, i]``, ``sup[i] = A[i, i+1]``."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        for name in ("sub", "diag", "sup"):
            values = np.array(getattr(self, name), dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, name, values)
        m = len(self.diag)
        if m < 2:
            raise TooFewNodesError(2, m, what="rows")
        if len(self.sub) != m - 1 or len(self.sup) != m - 1:
            raise ValueError(f"off-diagonals must have length {m - 1}")
        if not (np.all(np.isfinite(self.sub)) and np.all(np.isfinite(self.diag)) and np.all(np.isfinite(self.sup))):
            raise ValueError("tridiagonal entries must be finite")

    @property
    def m(self) -> int:
        return len(self.diag)

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "TridiagonalSystem":
        a = np.asarray(matrix, dtype=float)
        return cls(sub=np.diag(a, -1), diag=np.diag(a), sup=np.diag(a, 1))

    @classmethod
    def identity(cls, m: int) -> "TridiagonalSystem":
        return cls(sub=np.zeros(m - 1), diag=np.ones(m), sup=np.zeros(m - 1))

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.diag * x if x.ndim == 1 else self.diag[:, None] * x
        if x.ndim == 1:
            y[1:] += self.sub * x[:-1]
            y[:-1] += self.sup * x[1:]
        else:
            y[1:] += self.sub[:, None] * x[:-1]
            y[:-1] += self.sup[:, None] * x[1:]
        return y

    def scale_rows(self, factors: np.ndarray) -> "TridiagonalSystem":
        """diag(factors) @ A."""
        f = np.asarray(factors, dtype=float)
        return TridiagonalSystem(sub=self.sub * f[1:], diag=self.diag * f, sup=self.sup * f[:-1])

    def one_norm(self) -> float:
        """Maximum absolute column sum."""
        column = np.abs(self.diag).copy()
        column[1:] += np.abs(self.sup)
        column[:-1] += np.abs(self.sub)
        return float(column.max())

    def inf_norm(self) -> float:
        """Maximum absolute row sum."""
        row = np.abs(self.diag).copy()
        row[1:] += np.abs(self.sub)
        row[:-1] += np.abs(self.sup)
        return float(row.max())


def _check_pivot(pivot: float, row: int, floor: float) -> None:
    if not abs(pivot) > floor:
        raise SingularPivotError(row, float(pivot))


def lu_factor(system: TridiagonalSystem) -> LUFactors:
    """Doolittle factors of A: l_sub[i] = L[i+1, i], U keeps A's superdiagonal."""
    floor = get_settings().pivot_floor
    m = system.m
    u_diag = np.empty(m)
    l_sub = np.empty(m - 1)

    u_diag[0] = system.diag[0]
    _check_pivot(u_diag[0], 0, floor)
    for i in range(1, m):
        l_sub[i - 1] = system.sub[i - 1] / u_diag[i - 1]
        u_diag[i] = system.diag[i] - l_sub[i - 1] * system.sup[i - 1]
        _check_pivot(u_diag[i], i, floor)

    return LUFactors(l_sub=l_sub, u_diag=u_diag, u_sup=system.sup.copy())


def solve(system: TridiagonalSystem, rhs: np.ndarray) -> np.ndarray:
    """Solve A x = rhs; ``rhs`` may hold several right-hand sides as columns."""
    b = np.array(rhs, dtype=float)
    if b.shape[0] != system.m:
        raise ValueError(f"rhs has {b.shape[0]} rows, system has {system.m}")

    factors = lu_factor(system)
    l_sub, u_diag, u_sup = factors.l_sub, factors.u_diag, factors.u_sup
    m = system.m

    # forward substitution L y = b
    for i in range(1, m):
        b[i] -= l_sub[i - 1] * b[i - 1]

    # back substitution U x = y
    b[m - 1] /= u_diag[m - 1]
    for i in range(m - 2, -1, -1):
        b[i] = (b[i] - u_sup[i] * b[i + 1]) / u_diag[i]

    return b


def inverse(system: TridiagonalSystem) -> np.ndarray:
    """Dense inverse, by solving against all m unit vectors."""
    return solve(system, np.eye(system.m))


def one_norm_condition(system: TridiagonalSystem) -> float:
    """Exact ||A||_1 ||A^-1||_1."""
    inverse_norm = float(np.abs(inverse(system)).sum(axis=0).max())
    condition = system.one_norm() * inverse_norm
    logger.debug(f"1-norm condition of {system.m}x{system.m} system: {condition:.6g}")
    return condition


def leading_minors(mesh: Mesh) -> MinorSequence:
    """Leading principal minors of the scaled compact matrix T via closed forms.

    T has first row (a_0, 1), interior rows (h_{k+1}^2, (h_k + h_{k+1})^2, h_k^2)
    and last row (1, alpha).
    """
    n = mesh.n
    if n < 4:
        raise TooFewNodesError(4, n)

    h = np.concatenate(([np.nan], mesh.widths))  # 1-based: h[k] = tau_k - tau_{k-1}
    d = np.empty(n + 1)

    s3 = h[1] + h[2] + h[3]
    d[0] = h[2] * (h[3] + h[2]) / ((h[2] + h[1]) * s3)
    d[1] = h[1] * h[2] * h[3] / s3
    d[2] = h[1] * h[3] * h[2] ** 2 * (h[3] + h[2]) / (h[2] + h[1])

    for k in range(4, n + 1):
        d[k - 1] = (h[k - 1] + h[k]) ** 2 * d[k - 2] - h[k - 2] ** 2 * h[k] ** 2 * d[k - 3]

    alpha = h[n - 1] * (h[n - 1] + h[n - 2]) / ((h[n - 1] + h[n]) * (h[n] + h[n - 1] + h[n - 2]))
    d[n] = alpha * d[n - 1] - h[n - 1] ** 2 * d[n - 2]

    return MinorSequence(values=d)


def _running_minors(system: TridiagonalSystem) -> np.ndarray:
    """Leading minors divided by the running product of |diag|."""
    m = system.m
    scale = np.abs(system.diag).copy()
    scale[scale == 0] = 1.0

    normalized = np.empty(m)
    prev2, prev1 = 0.0, 1.0  # D_{-1}/S, D_0/S
    for k in range(m):
        value = system.diag[k] / scale[k] * prev1
        if k >= 1:
            value -= system.sub[k - 1] * system.sup[k - 1] / (scale[k] * scale[k - 1]) * prev2
        normalized[k] = value
        prev2, prev1 = prev1, value
    return normalized


def is_totally_nonnegative(system: TridiagonalSystem, tol: float | None = None) -> TNVerdict:
    """Gantmacher-Krein test for an irreducible tridiagonal matrix.

    True iff every entry is >= -tol and every leading principal minor is
    >= -tol times the running product of diagonal magnitudes.
    """
    if tol is None:
        tol = get_settings().tn_tolerance
    if tol < 0:
        raise ValueError("tol must be nonnegative")

    for name in ("sub", "sup"):
        zero = np.flatnonzero(getattr(system, name) == 0)
        if zero.size:
            raise ReducibleError(int(zero[0]), name)

    for name in ("sub", "diag", "sup"):
        entries = getattr(system, name)
        bad = np.flatnonzero(entries < -tol)
        if bad.size:
            i = int(bad[0])
            return TNVerdict(False, violation=name, index=i, value=float(entries[i]))

    normalized = _running_minors(system)
    bad = np.flatnonzero(normalized < -tol)
    if bad.size:
        i = int(bad[0])
        return TNVerdict(False, violation="minor", index=i + 1, value=float(normalized[i]))

    return TNVerdict(True)


def uniform_pivot_sequence(count: int) -> np.ndarray:
    """a_0..a_{count-1} with a_0 = a_1 = 1 and a_{k+1} = 4 a_k - a_{k-1}."""
    a = np.ones(max(count, 2))
    for k in range(1, len(a) - 1):
        a[k + 1] = 4.0 * a[k] - a[k - 1]
    return a[:count]
