"""Experiment harness: test functions, convergence runs, jump profiles, histograms and CSV I/O."""

from app.harness.experiments import (
    CondHistogram,
    ConvergenceReport,
    ConvergenceRow,
    JumpProfile,
    MeshKind,
    Method,
    run_c2_jumps,
    run_cond_histogram,
    run_convergence,
)
from app.harness.functions import FUNCTIONS, TestFunction, get_function

__all__ = [
    "CondHistogram",
    "ConvergenceReport",
    "ConvergenceRow",
    "FUNCTIONS",
    "JumpProfile",
    "MeshKind",
    "Method",
    "TestFunction",
    "get_function",
    "run_c2_jumps",
    "run_cond_histogram",
    "run_convergence",
]
