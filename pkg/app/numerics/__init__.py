"""Splines, compact cubic interpolants and compact finite differences."""

from app.numerics.assembly import AssembledSystem, assemble, theorem_matrix
from app.numerics.driver import (
    butcher_second_derivative,
    compact_cubic,
    compact_first_derivatives,
    compact_second_derivatives_uniform,
    cubic_spline,
    leading_truncation_term,
    nodal_slopes,
    second_derivative_mixed,
    truncation_probe,
)
from app.numerics.hermite import PiecewiseCubic, PpForm, evaluate, evaluate_derivative, to_ppform
from app.numerics.mesh import Mesh, mesh_chebyshev, mesh_from_nodes, mesh_uniform
from app.numerics.models import EdgeKind, EdgeScheme, InteriorRule, ProbeFormula
from app.numerics.tridiag import TridiagonalSystem, is_totally_nonnegative, leading_minors, one_norm_condition, solve

__all__ = [
    "AssembledSystem",
    "EdgeKind",
    "EdgeScheme",
    "InteriorRule",
    "Mesh",
    "PiecewiseCubic",
    "PpForm",
    "ProbeFormula",
    "TridiagonalSystem",
    "assemble",
    "butcher_second_derivative",
    "compact_cubic",
    "compact_first_derivatives",
    "compact_second_derivatives_uniform",
    "cubic_spline",
    "evaluate",
    "evaluate_derivative",
    "is_totally_nonnegative",
    "leading_minors",
    "leading_truncation_term",
    "mesh_chebyshev",
    "mesh_from_nodes",
    "mesh_uniform",
    "nodal_slopes",
    "one_norm_condition",
    "second_derivative_mixed",
    "solve",
    "theorem_matrix",
    "to_ppform",
    "truncation_probe",
]
