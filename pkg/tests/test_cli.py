import json

import numpy as np
import pytest

from app.cli import EXIT_IO, EXIT_OK, EXIT_PRECONDITION, log_level, main
from app.config import get_settings
from app.harness import csvio


@pytest.fixture
def runge_csv(tmp_path):
    x = np.linspace(-1, 1, 65)
    path = tmp_path / "runge.csv"
    csvio.write_xy(path, x, 1.0 / (1.0 + 25.0 * x**2))
    return path


def test_interp_writes_ppform(runge_csv, tmp_path):
    out = tmp_path / "pp.json"
    grid = tmp_path / "grid.csv"
    code = main(["interp", "--input", str(runge_csv), "--out", str(out), "--eval-out", str(grid), "--eval-grid", "11"])
    assert code == EXIT_OK
    pp = json.loads(out.read_text())
    assert len(pp["coefs"]) == 64
    assert len(pp["breaks"]) == 65
    t, values = csvio.parse_columns(grid.read_text(), ("t", "p"))
    assert len(t) == 11
    assert values[5] == pytest.approx(1.0)


def test_interp_to_stdout(runge_csv, capsys):
    assert main(["interp", "--input", str(runge_csv), "--method", "spline-natural"]) == EXIT_OK
    assert len(json.loads(capsys.readouterr().out)["coefs"]) == 64


def test_deriv(tmp_path, capsys):
    path = tmp_path / "quad.csv"
    x = np.linspace(0, 1, 9)
    csvio.write_xy(path, x, x**2)
    code = main(["deriv", "--input", str(path), "--method", "spline-clamped", "--dleft", "0", "--dright", "2"])
    assert code == EXIT_OK
    xs, slopes = csvio.parse_columns(capsys.readouterr().out, ("x", "dydx"))
    np.testing.assert_allclose(slopes, 2 * xs, atol=1e-12)


def test_matrix_props_fibonacci_mesh(tmp_path, capsys):
    path = tmp_path / "fib.csv"
    path.write_text("x\n0\n1\n2\n4\n7\n12\n20\n33\n54\n")
    assert main(["matrix-props", "--input", str(path)]) == EXIT_OK
    props = json.loads(capsys.readouterr().out)
    assert props["totally_nonnegative"] is True
    assert props["all_minors_positive"] is True


def test_matrix_props_accepts_xy_files(runge_csv, capsys):
    assert main(["matrix-props", "--input", str(runge_csv)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["n"] == 64


def test_missing_file_is_io_error(tmp_path, capsys):
    assert main(["interp", "--input", str(tmp_path / "nope.csv")]) == EXIT_IO
    assert capsys.readouterr().err.startswith("error: ")


def test_bad_header_is_io_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("t,y\n0,1\n")
    assert main(["interp", "--input", str(path)]) == EXIT_IO
    assert "line 1" in capsys.readouterr().err


def test_non_monotone_nodes_are_precondition_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0,0\n1,1\n0.5,2\n2,3\n3,4\n4,5\n")
    assert main(["interp", "--input", str(path)]) == EXIT_PRECONDITION


def test_too_few_intervals_for_compact_edges(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("x,y\n0,0\n1,1\n2,4\n3,9\n")
    assert main(["deriv", "--input", str(path), "--method", "compact4"]) == EXIT_PRECONDITION


def test_clamped_without_derivatives(runge_csv):
    assert main(["interp", "--input", str(runge_csv), "--method", "spline-clamped"]) == EXIT_PRECONDITION


def test_convergence(capsys):
    code = main(["convergence", "--function", "constant", "--n", "8", "--n", "16"])
    assert code == EXIT_OK
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "n,mesh_kind,err_value,err_deriv_nodes,err_deriv_between,cond"
    assert [line.split(",")[0] for line in lines[1:]] == ["8", "16"]
    assert "# slope err_value: n/a" in captured.err


def test_convergence_rejects_unknown_function():
    with pytest.raises(SystemExit):
        main(["convergence", "--function", "nope"])


def test_histogram(tmp_path, capsys):
    out = tmp_path / "hist.csv"
    code = main(["histogram", "--n", "10", "--trials", "5", "--seed", "1", "--bins", "4", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "bin_lo,bin_hi,count"
    assert len(lines) == 5
    assert "# seed 1" in capsys.readouterr().err


def test_histogram_small_n(capsys):
    assert main(["histogram", "--n", "3", "--trials", "5"]) == EXIT_PRECONDITION


def test_probe(capsys):
    assert main(["probe", "--formula", "edge-compact4", "--function", "exp"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "order: " in out
    assert "leading constant: " in out


def test_non_utf8_input_is_io_error(tmp_path, capsys):
    path = tmp_path / "latin1.csv"
    path.write_bytes(b"x,y\n0,\xff\n")
    assert main(["deriv", "--input", str(path)]) == EXIT_IO
    assert capsys.readouterr().err.startswith("error: line 2: ")


def test_nul_byte_is_io_error(tmp_path, capsys):
    path = tmp_path / "nul.csv"
    path.write_bytes(b"x,y\n0,1\x00\n")
    assert main(["deriv", "--input", str(path)]) == EXIT_IO
    assert capsys.readouterr().err.startswith("error: line 2: ")


def test_matrix_props_non_utf8_is_io_error(tmp_path):
    path = tmp_path / "nodes.csv"
    path.write_bytes(b"x\n0\n\xfe\n")
    assert main(["matrix-props", "--input", str(path)]) == EXIT_IO


def test_jumps(tmp_path):
    out = tmp_path / "jumps.csv"
    assert main(["jumps", "--function", "runge", "--mesh", "chebyshev", "--n", "7", "--out", str(out)]) == EXIT_OK
    x, jumps = csvio.parse_columns(out.read_text(), ("x", "jump"))
    assert len(x) == 6
    assert np.abs(jumps).max() > 0.5


def test_jumps_spline_is_c2(capsys):
    assert main(["jumps", "--method", "spline-notaknot", "--mesh", "uniform", "--n", "10"]) == EXIT_OK
    _, jumps = csvio.parse_columns(capsys.readouterr().out, ("x", "jump"))
    assert np.abs(jumps).max() < 1e-8


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_debug_setting_forces_debug_level(monkeypatch, fresh_settings):
    monkeypatch.delenv("SPLINELAB_DEBUG", raising=False)
    monkeypatch.delenv("SPLINELAB_LOG_LEVEL", raising=False)
    assert log_level() == "INFO"
    assert log_level(verbose=True) == "DEBUG"
    monkeypatch.setenv("SPLINELAB_DEBUG", "true")
    get_settings.cache_clear()
    assert log_level() == "DEBUG"
