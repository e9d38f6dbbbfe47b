"""splinelab command line.

Usage: python -m app.cli <command> [options]

Exit codes: 0 ok, 1 I/O or parse error, 2 precondition violation.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from app.config import get_settings
from app.harness import csvio
from app.harness.experiments import MeshKind, Method, run_c2_jumps, run_cond_histogram, run_convergence
from app.harness.functions import FUNCTIONS, get_function
from app.harness.operations import dense_evaluations, derivatives, interpolate, matrix_properties
from app.numerics.driver import leading_truncation_term, truncation_probe
from app.numerics.errors import InputFormatError, PreconditionError, SingularPivotError
from app.numerics.models import ProbeFormula

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_IO = 1
EXIT_PRECONDITION = 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _read_nodes(path: str) -> np.ndarray:
    """x column of an ``x`` or ``x,y`` file."""
    text = csvio.read_text(path)
    header = text.split("\n", 1)[0].strip().replace(" ", "")
    if header == "x,y":
        return csvio.parse_xy(text)[0]
    return csvio.parse_x(text)


def cmd_interp(args: argparse.Namespace) -> int:
    x, y = csvio.read_xy(args.input)
    p, pp = interpolate(x, y, args.method, args.dleft, args.dright)
    _emit(pp.to_json(indent=2) + "\n", args.out)
    if args.eval_out:
        t, values = dense_evaluations(p, args.eval_grid or get_settings().eval_grid)
        csvio.write_xy(args.eval_out, t, values, header=("t", "p"))
        logger.info(f"wrote {args.eval_out}")
    return EXIT_OK


def cmd_deriv(args: argparse.Namespace) -> int:
    x, y = csvio.read_xy(args.input)
    result = derivatives(x, y, args.method, args.dleft, args.dright)
    logger.info(f"{result.scheme_tag}: condition {result.condition:.6g}")
    _emit(csvio.write_xy(None, x, result.slopes, header=("x", "dydx")), args.out)
    return EXIT_OK


def cmd_matrix_props(args: argparse.Namespace) -> int:
    props = matrix_properties(_read_nodes(args.input))
    _emit(json.dumps(props, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_convergence(args: argparse.Namespace) -> int:
    n_list = sorted(args.n or [16, 32, 64, 128, 256])
    report = run_convergence(args.function, args.mesh, args.method, n_list, args.seed, args.a, args.b)
    _emit(csvio.write_report(None, report), args.out)
    for column, slope in report.slopes.items():
        shown = "n/a" if slope is None else f"{slope:.3f}"
        print(f"# slope {column}: {shown}", file=sys.stderr)
    for note in report.notes:
        print(f"# {note}", file=sys.stderr)
    return EXIT_OK


def cmd_jumps(args: argparse.Namespace) -> int:
    profile = run_c2_jumps(args.function, args.mesh, args.method, args.n, args.seed, args.a, args.b)
    _emit(csvio.write_jumps(None, profile), args.out)
    if profile.seed is not None:
        print(f"# seed {profile.seed}", file=sys.stderr)
    return EXIT_OK


def cmd_histogram(args: argparse.Namespace) -> int:
    histogram = run_cond_histogram(args.n, args.trials, args.seed, args.bins)
    _emit(csvio.write_histogram(None, histogram), args.out)
    print(f"# seed {histogram.seed}, {histogram.samples} samples", file=sys.stderr)
    return EXIT_OK


def cmd_probe(args: argparse.Namespace) -> int:
    func = get_function(args.function)
    formula = ProbeFormula(args.formula)
    derivative = func.d2 if formula.derivative_order == 2 else func.d1
    result = truncation_probe(
        formula, func.f, derivative, r=args.r, s=args.s, x0=args.x0, first_derivative=func.d1
    )
    term = leading_truncation_term(formula, args.r, args.s)
    print(f"formula: {formula.value}")
    print(f"order: {result.order:.4f} (expected {term.order})")
    print(f"coefficient: {result.coefficient:.6g}")
    print(f"leading constant: {term.constant:.6g} times f^({term.derivative})(x0) h^{term.order}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    settings = get_settings()
    uvicorn.run("app.main:app", host=args.host or settings.host, port=args.port or settings.port)
    return EXIT_OK


def _add_method_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", type=Method, choices=list(Method), default=Method.COMPACT4, metavar="METHOD",
                   help="spline-natural, spline-clamped, spline-notaknot, compact4 or compactc (default: compact4).")
    p.add_argument("--dleft", type=float, default=None, help="Left end derivative (spline-clamped).")
    p.add_argument("--dright", type=float, default=None, help="Right end derivative (spline-clamped).")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="splinelab", description="Cubic splines and compact finite differences.")
    p.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level.")
    sub = p.add_subparsers(dest="command", required=True)

    interp = sub.add_parser("interp", help="Fit an interpolant to x,y samples and write its ppform JSON.")
    interp.add_argument("--input", required=True, help="CSV with header x,y.")
    _add_method_flags(interp)
    interp.add_argument("--eval-grid", type=int, default=None, dest="eval_grid", help="Points in the dense evaluation grid.")
    interp.add_argument("--eval-out", default=None, dest="eval_out", help="CSV path for dense evaluations t,p.")
    interp.add_argument("--out", default=None, help="Path to ppform JSON (default: stdout).")
    interp.set_defaults(handler=cmd_interp)

    deriv = sub.add_parser("deriv", help="Nodal derivatives of x,y samples.")
    deriv.add_argument("--input", required=True, help="CSV with header x,y.")
    _add_method_flags(deriv)
    deriv.add_argument("--out", default=None, help="CSV path for x,dydx (default: stdout).")
    deriv.set_defaults(handler=cmd_deriv)

    props = sub.add_parser("matrix-props", help="Minors, total nonnegativity and condition for a mesh.")
    props.add_argument("--input", required=True, help="CSV with header x or x,y.")
    props.add_argument("--out", default=None, help="Path to JSON (default: stdout).")
    props.set_defaults(handler=cmd_matrix_props)

    conv = sub.add_parser("convergence", help="Error table over a list of n.")
    conv.add_argument("--function", default="runge", choices=sorted(FUNCTIONS))
    conv.add_argument("--mesh", type=MeshKind, choices=list(MeshKind), default=MeshKind.UNIFORM, metavar="MESH",
                      help="uniform, chebyshev or random.")
    _add_method_flags(conv)
    conv.add_argument("--n", type=int, action="append", help="Number of subintervals; repeat for each row.")
    conv.add_argument("--seed", type=int, default=None, help="Seed for random meshes.")
    conv.add_argument("--a", type=float, default=None, help="Left end of the interval.")
    conv.add_argument("--b", type=float, default=None, help="Right end of the interval.")
    conv.add_argument("--out", default=None, help="CSV path for the report (default: stdout).")
    conv.set_defaults(handler=cmd_convergence)

    jumps = sub.add_parser("jumps", help="Second-derivative jumps p''(x+) - p''(x-) at the interior nodes.")
    jumps.add_argument("--function", default="runge", choices=sorted(FUNCTIONS))
    jumps.add_argument("--mesh", type=MeshKind, choices=list(MeshKind), default=MeshKind.CHEBYSHEV, metavar="MESH",
                       help="uniform, chebyshev or random (default: chebyshev).")
    _add_method_flags(jumps)
    jumps.add_argument("--n", type=int, default=7, help="Number of subintervals.")
    jumps.add_argument("--seed", type=int, default=None, help="Seed for random meshes.")
    jumps.add_argument("--a", type=float, default=None, help="Left end of the interval.")
    jumps.add_argument("--b", type=float, default=None, help="Right end of the interval.")
    jumps.add_argument("--out", default=None, help="CSV path for x,jump (default: stdout).")
    jumps.set_defaults(handler=cmd_jumps)

    hist = sub.add_parser("histogram", help="Condition numbers of random-mesh compact matrices.")
    hist.add_argument("--n", type=int, default=100, help="Subintervals per mesh.")
    hist.add_argument("--trials", type=int, default=1000, help="Number of random meshes.")
    hist.add_argument("--seed", type=int, default=None)
    hist.add_argument("--bins", type=int, default=None)
    hist.add_argument("--out", default=None, help="CSV path for bin_lo,bin_hi,count (default: stdout).")
    hist.set_defaults(handler=cmd_histogram)

    probe = sub.add_parser("probe", help="Fit the leading truncation error of a difference formula.")
    probe.add_argument("--formula", default=ProbeFormula.INTERIOR_COMPACT.value, choices=[f.value for f in ProbeFormula])
    probe.add_argument("--function", default="exp", choices=sorted(FUNCTIONS))
    probe.add_argument("--r", type=float, default=1.0)
    probe.add_argument("--s", type=float, default=1.0)
    probe.add_argument("--x0", type=float, default=0.3)
    probe.set_defaults(handler=cmd_probe)

    serve = sub.add_parser("serve", help="Run the HTTP API.")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.set_defaults(handler=cmd_serve)

    return p


def log_level(verbose: bool = False) -> str:
    settings = get_settings()
    return "DEBUG" if verbose or settings.debug else settings.log_level


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=log_level(args.verbose), format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except (OSError, InputFormatError) as e:
        logger.warning(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (PreconditionError, SingularPivotError) as e:
        logger.warning(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
