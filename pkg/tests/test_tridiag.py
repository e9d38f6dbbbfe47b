from itertools import combinations

import numpy as np
import pytest

from app.numerics.assembly import assemble, theorem_matrix
from app.numerics.errors import ReducibleError, SingularPivotError, TooFewNodesError
from app.numerics.mesh import mesh_chebyshev, mesh_from_widths, mesh_uniform
from app.numerics.models import EdgeScheme, InteriorRule
from app.numerics.tridiag import (
    TridiagonalSystem,
    inverse,
    is_totally_nonnegative,
    leading_minors,
    lu_factor,
    one_norm_condition,
    solve,
    uniform_pivot_sequence,
)
from tests.conftest import random_mesh

ROOT3 = np.sqrt(3.0)
UNIFORM_LIMIT = 63 + 36 * ROOT3


def uniform_compact(n: int, edges: EdgeScheme | None = None) -> TridiagonalSystem:
    mesh = mesh_uniform(0, 1, n)
    return assemble(mesh, np.zeros(n + 1), InteriorRule.COMPACT, edges or EdgeScheme.compact4()).matrix


def all_minors(a: np.ndarray) -> np.ndarray:
    """Every minor of a, as one flat array of determinants."""
    m = a.shape[0]
    dets = []
    for k in range(1, m + 1):
        index = np.array(list(combinations(range(m), k)))
        blocks = a[index[:, None, :, None], index[None, :, None, :]]
        dets.append(np.linalg.det(blocks).ravel())
    return np.concatenate(dets)


def exhaustively_tn(a: np.ndarray, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.abs(a).max())) ** a.shape[0]
    return bool(all_minors(a).min() >= -tol * scale)


def test_system_validation():
    with pytest.raises(TooFewNodesError):
        TridiagonalSystem(sub=[], diag=[1.0], sup=[])
    with pytest.raises(ValueError):
        TridiagonalSystem(sub=[1.0], diag=[1.0, 2.0], sup=[1.0, 2.0])
    with pytest.raises(ValueError):
        TridiagonalSystem(sub=[np.nan], diag=[1.0, 2.0], sup=[1.0])


def test_dense_round_trip():
    system = TridiagonalSystem(sub=[1, 2], diag=[4, 5, 6], sup=[7, 8])
    dense = system.to_dense()
    np.testing.assert_array_equal(dense, [[4, 7, 0], [1, 5, 8], [0, 2, 6]])
    again = TridiagonalSystem.from_dense(dense)
    np.testing.assert_array_equal(again.sub, system.sub)
    np.testing.assert_array_equal(system.matvec(np.ones(3)), dense @ np.ones(3))


def test_norms():
    system = TridiagonalSystem(sub=[1, -2], diag=[4, 5, 6], sup=[7, 8])
    dense = system.to_dense()
    assert system.one_norm() == np.linalg.norm(dense, 1)
    assert system.inf_norm() == np.linalg.norm(dense, np.inf)


def test_solve_identity():
    v = np.array([1.0, -2.0, 3.5])
    np.testing.assert_array_equal(solve(TridiagonalSystem.identity(3), v), v)


def test_solve_uniform_spline_matrix():
    system = TridiagonalSystem(sub=np.ones(4), diag=[1 / 3, 4, 4, 4, 1 / 3], sup=np.ones(4))
    rhs = system.matvec(np.ones(5))
    np.testing.assert_allclose(solve(system, rhs), np.ones(5), rtol=1e-14)


def test_solve_residual_and_multiple_rhs(rng):
    mesh = random_mesh(rng, 12)
    system = assemble(mesh, np.zeros(13), InteriorRule.COMPACT, EdgeScheme.compact4()).matrix
    b = rng.normal(size=(13, 3))
    x = solve(system, b)
    residual = np.abs(system.matvec(x) - b).max()
    eps = np.finfo(float).eps
    assert residual <= 100 * eps * system.inf_norm() * np.abs(x).max()


def test_solve_rhs_length():
    with pytest.raises(ValueError):
        solve(TridiagonalSystem.identity(3), np.ones(4))


def test_singular_pivot_reports_row():
    system = TridiagonalSystem(sub=[1.0, 1.0], diag=[1.0, 1.0, 1.0], sup=[1.0, 1.0])
    with pytest.raises(SingularPivotError) as info:
        solve(system, np.ones(3))
    assert info.value.row == 1


def test_lu_uniform_compact_pivots():
    factors = lu_factor(uniform_compact(5))
    np.testing.assert_allclose(factors.u_diag[:5], [1 / 3, 1, 3, 11 / 3, 41 / 11], rtol=1e-13)
    assert factors.u_diag[5] == pytest.approx(1 / 3 - 11 / 41, rel=1e-12)


def test_lu_final_pivot_limit():
    factors = lu_factor(uniform_compact(30))
    assert factors.u_diag[-1] == pytest.approx(1 / 3 - 1 / (2 + ROOT3), abs=1e-9)
    assert factors.u_diag[-1] == pytest.approx(0.06538, abs=1e-5)


def test_lu_diagonal_matrix():
    system = TridiagonalSystem(sub=[0, 0], diag=[2, 3, 4], sup=[0, 0])
    factors = lu_factor(system)
    np.testing.assert_array_equal(factors.l_sub, [0, 0])
    np.testing.assert_array_equal(factors.u_diag, [2, 3, 4])


def test_lu_reconstruction(rng):
    system = assemble(random_mesh(rng, 9), np.zeros(10), InteriorRule.COMPACT, EdgeScheme.compact4()).matrix
    f = lu_factor(system)
    lower = np.eye(10) + np.diag(f.l_sub, -1)
    upper = np.diag(f.u_diag) + np.diag(f.u_sup, 1)
    eps = np.finfo(float).eps
    assert np.abs(lower @ upper - system.to_dense()).max() <= 10 * eps * system.inf_norm()


def test_uniform_pivot_sequence():
    np.testing.assert_array_equal(uniform_pivot_sequence(5), [1, 1, 3, 11, 41])


def test_uniform_pivot_ratios_converge_geometrically():
    a = uniform_pivot_sequence(12)
    errors = np.abs(a[1:] / a[:-1] - (2 + ROOT3))
    for k in range(2, 8):
        assert errors[k + 1] <= errors[k] / 13


def test_leading_minors_uniform():
    minors = leading_minors(mesh_uniform(0, 5, 5))
    np.testing.assert_allclose(minors.values[:4], [1 / 3, 1 / 3, 1, 11 / 3], rtol=1e-13)
    assert minors.all_positive
    assert len(minors) == 6


def test_leading_minors_match_u_diag_products():
    minors = leading_minors(mesh_uniform(0, 5, 5))
    u = lu_factor(theorem_matrix(mesh_uniform(0, 5, 5))).u_diag
    np.testing.assert_allclose(minors.values, np.cumprod(u), rtol=1e-12)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_leading_minors_match_determinants(rng, n):
    for _ in range(100):
        widths = rng.uniform(0.1, 1.0, n)
        mesh = mesh_from_widths(widths, 0.0, float(widths.sum()))
        dense = theorem_matrix(mesh).to_dense()
        expected = [np.linalg.det(dense[:k, :k]) for k in range(1, n + 2)]
        minors = leading_minors(mesh)
        np.testing.assert_allclose(minors.values, expected, rtol=1e-9)
        assert minors.determinant == pytest.approx(expected[-1], rel=1e-9)


def test_leading_minors_too_few():
    with pytest.raises(TooFewNodesError):
        leading_minors(mesh_uniform(0, 1, 3))


def test_totally_nonnegative_random_meshes(rng):
    for _ in range(50):
        mesh = random_mesh(rng, int(rng.integers(4, 40)))
        assert is_totally_nonnegative(theorem_matrix(mesh))
        assembled = assemble(mesh, np.zeros(mesh.size), InteriorRule.COMPACT, EdgeScheme.compact4())
        assert is_totally_nonnegative(assembled.matrix)


def test_totally_nonnegative_decreasing_mesh():
    mesh = mesh_chebyshev(-1, 1, 12)
    assembled = assemble(mesh, np.zeros(13), InteriorRule.COMPACT, EdgeScheme.compact4())
    assert is_totally_nonnegative(assembled.matrix)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_totally_nonnegative_matches_exhaustive_minors(rng, n):
    for _ in range(40):
        widths = rng.uniform(0.05, 1.0, n)
        sign = rng.choice([-1.0, 1.0])
        mesh = mesh_from_widths(sign * widths, 0.0, sign * float(widths.sum()))
        system = theorem_matrix(mesh)
        assert is_totally_nonnegative(system)
        assert exhaustively_tn(system.to_dense())


def test_totally_nonnegative_agrees_with_exhaustive_minors_on_mixed_matrices(rng):
    verdicts = []
    for _ in range(300):
        system = TridiagonalSystem(
            sub=rng.uniform(0.1, 1.0, 4), diag=rng.uniform(0.2, 2.0, 5), sup=rng.uniform(0.1, 1.0, 4)
        )
        verdict = bool(is_totally_nonnegative(system))
        assert verdict == exhaustively_tn(system.to_dense())
        verdicts.append(verdict)
    assert any(verdicts) and not all(verdicts)


def test_negative_entry_is_reported():
    system = TridiagonalSystem(sub=[1, 1], diag=[2, -1, 2], sup=[1, 1])
    verdict = is_totally_nonnegative(system)
    assert not verdict
    assert verdict.violation == "diag"
    assert verdict.index == 1


def test_negative_minor_is_reported():
    # entries nonnegative but the 2x2 leading minor is 1 - 4 < 0
    system = TridiagonalSystem(sub=[2, 1], diag=[1, 1, 5], sup=[2, 1])
    verdict = is_totally_nonnegative(system)
    assert not verdict
    assert verdict.violation == "minor"
    assert verdict.index == 2


def test_reducible_matrix_rejected():
    system = TridiagonalSystem(sub=[1, 0], diag=[2, 2, 2], sup=[1, 1])
    with pytest.raises(ReducibleError) as info:
        is_totally_nonnegative(system)
    assert info.value.which == "sub"
    assert info.value.position == 1


def test_negative_tolerance_rejected():
    with pytest.raises(ValueError):
        is_totally_nonnegative(TridiagonalSystem.identity(2), tol=-1.0)


def test_condition_identity():
    assert one_norm_condition(TridiagonalSystem.identity(4)) == 1.0


def test_condition_matches_numpy(rng):
    system = assemble(random_mesh(rng, 15), np.zeros(16), InteriorRule.COMPACT, EdgeScheme.compact4()).matrix
    assert one_norm_condition(system) == pytest.approx(np.linalg.cond(system.to_dense(), 1), rel=1e-10)


def test_inverse(rng):
    system = uniform_compact(6)
    np.testing.assert_allclose(inverse(system) @ system.to_dense(), np.eye(7), atol=1e-13)


@pytest.mark.parametrize("n", [20, 30, 40, 80])
def test_uniform_condition_limit(n):
    assert one_norm_condition(uniform_compact(n)) == pytest.approx(UNIFORM_LIMIT, rel=0.01)


def test_uniform_condition_converges_monotonically():
    conditions = [one_norm_condition(uniform_compact(n)) for n in range(20, 60, 5)]
    gaps = np.abs(np.array(conditions) - UNIFORM_LIMIT)
    assert np.all(np.diff(gaps) <= 1e-9)


def test_fixed_ratio_edge_condition_below_three():
    assert one_norm_condition(uniform_compact(40, EdgeScheme.compact_c())) < 3
