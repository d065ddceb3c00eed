"""Command-line front end.

Exit codes: 0 pass, 1 check failure, 2 parameter or singularity error,
3 I/O error.  Machine-readable output is ``key = value`` lines.
"""

import argparse
import sys
import warnings

import numpy as np

from . import meshio, norms
from .params import (ParameterError, build_case_and_params, format_complex,
                     parse_config_text, read_config, reynolds, womersley)
from .solution import (COEFF_NAMES, AnalyticSolution, DomainError,
                       NearResonanceWarning, resonance_frequencies)
from .verify import ValidationConfig, validate_case

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_IO = 0, 1, 2, 3


class _Emitter:
    """Collects output lines, echoes them to stdout and optionally to a file."""

    def __init__(self):
        self.lines = []

    def __call__(self, text):
        self.lines.append(text)
        print(text)

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.lines) + "\n")


def _value(x):
    if isinstance(x, complex):
        return format_complex(x)
    return format(float(x), ".17g")


def _load(args):
    values = read_config(args.config) if args.config else {}
    for item in args.param or []:
        if "=" not in item:
            raise ParameterError(f"--param expects key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        values[key] = value
    # reject unknown override keys with the config parser's message
    parse_config_text("\n".join(f"{k} = {v}" for k, v in values.items()), "--param")
    return build_case_and_params(values)


def _solution(args):
    case, params = _load(args)
    return AnalyticSolution.build(case, params, numeric=getattr(args, "numeric", False))


def _times(args):
    if args.t_range is not None:
        t0, t1, n = args.t_range
        n = int(n)
        if n < 1:
            raise ParameterError("--t-range needs at least one sample")
        return list(np.linspace(t0, t1, n))
    return [0.0] if args.times is None else list(args.times)


def _fields(args, default):
    if not args.fields:
        return default
    names = [f.strip() for f in args.fields.split(",") if f.strip()]
    bad = [n for n in names if n not in meshio.FIELDS]
    if bad:
        raise ParameterError(f"unknown field {bad[0]!r}; choose from {', '.join(meshio.FIELDS)}")
    return names


def cmd_eval(args):
    sol = _solution(args)
    out = _Emitter()
    p = sol.params
    out(f"case = {sol.case.label}")
    for key in ("rho_f", "mu_f", "rho_s", "mu_s", "H_i", "H_o", "L", "T"):
        out(f"param.{key} = {_value(getattr(p, key))}")
    out(f"param.P = {format_complex(p.P)}")
    for key, value in sol.constants.populated().items():
        out(f"const.{key} = {_value(value)}")
    for name in COEFF_NAMES:
        value = getattr(sol.coeffs, name)
        if value is not None:
            out(f"coef.{name} = {format_complex(value)}")
    speed = sol.peak_speed()
    out(f"peak_speed = {speed:.10g}")
    if sol.case.fluid_transient:
        out(f"womersley = {womersley(p):.10g}")
        out(f"reynolds = {reynolds(p, speed):.10g}")
    if args.points:
        points = meshio.load_points(args.points, sol.dim)
        if not args.export:
            raise ParameterError("--points needs --export PATH")
        table = meshio.export_fields(sol, points, _times(args), _fields(args, meshio.FIELDS),
                                     args.export)
        out(f"export.rows = {len(table)}")
    if args.out:
        out.save(args.out)
    return EXIT_OK


def cmd_validate(args):
    sol = _solution(args)
    if args.corrupt:
        names = sol.referenced_coefficients()
        if args.corrupt not in names:
            raise ParameterError(f"--corrupt must name one of {', '.join(names)}")
        sol = sol.with_coeffs(sol.coeffs.perturbed(args.corrupt, args.corrupt_rel))
    cfg = ValidationConfig(
        n_points=args.n_points, seed=args.seed, h_rel=args.h_rel,
        tol_momentum=args.tol_momentum, tol_momentum_nonlinear=args.tol_momentum_nonlinear,
        tol_mass=args.tol_mass, tol_coupling=args.tol_coupling, tol_boundary=args.tol_boundary,
    )
    result = validate_case(sol, cfg)
    out = _Emitter()
    out(result.format_text() if args.format == "text" else result.format_kv())
    if args.out:
        out.save(args.out)
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_resonance(args):
    _, params = _load(args)
    omegas = resonance_frequencies(params, args.n_max)
    out = _Emitter()
    for n, w in enumerate(omegas):
        out(f"resonance.omega.{n} = {w:.17g}")
        out(f"resonance.T.{n} = {2 * np.pi / w:.17g}")
    if args.out:
        out.save(args.out)
    return EXIT_OK


def cmd_export(args):
    sol = _solution(args)
    if not args.out:
        raise ParameterError("export needs --out PATH")
    points = meshio.load_points(args.points, sol.dim)
    table = meshio.export_fields(sol, points, _times(args), _fields(args, meshio.FIELDS), args.out)
    print(f"export.rows = {len(table)}")
    print(f"export.path = {args.out}")
    return EXIT_OK


def cmd_error(args):
    out = _Emitter()
    if args.pairs:
        pairs = []
        for item in args.pairs:
            try:
                d, e = (float(v) for v in item.split(":"))
            except ValueError:
                raise ParameterError(f"--pair expects STEP:ERROR, got {item!r}") from None
            pairs.append((d, e))
        out(f"order.slope = {norms.observed_order(pairs):.12g}")
    if args.numeric:
        if not args.points:
            raise ParameterError("--numeric needs --points")
        sol = _solution(args)
        points = meshio.load_points(args.points, sol.dim)
        table = meshio.read_field_table(args.numeric)
        names = _fields(args, table.fields())
        for name in names:
            report = norms.error_report(table, sol, points, name, args.uniform_weights,
                                        args.window, args.dt, args.dx)
            out(report.to_kv())
    if not args.pairs and not args.numeric:
        raise ParameterError("error needs --numeric FILE and/or --pair STEP:ERROR")
    if args.out:
        out.save(args.out)
    return EXIT_OK


def cmd_plot_data(args):
    sol = _solution(args)
    if not args.out:
        raise ParameterError("plot-data needs --out PATH")
    table = meshio.profile_table(sol, args.samples, _times(args),
                                 _fields(args, ("v_f", "v_s", "u_s")), args.axial)
    table.write(args.out)
    points_path = args.out + ".points.csv"
    meshio.write_points(table.points, points_path)
    print(f"plot.rows = {len(table)}")
    print(f"plot.path = {args.out}")
    print(f"plot.points = {points_path}")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value case/parameter file")
    common.add_argument("--param", action="append", metavar="K=V",
                        help="override one config key (repeatable)")
    common.add_argument("--out", help="output path")
    common.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")

    times = argparse.ArgumentParser(add_help=False)
    group = times.add_mutually_exclusive_group()
    group.add_argument("--times", type=float, nargs="*", help="evaluation times")
    group.add_argument("--t-range", type=float, nargs=3, metavar=("T0", "T1", "N"),
                       help="N uniform times from T0 to T1")
    times.add_argument("--fields", help="comma-separated subset of " + ",".join(meshio.FIELDS))

    parser = argparse.ArgumentParser(prog="fsi-bench",
                                     description="Analytic FSI benchmark solutions and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, times], help="print constants and numbers")
    p.add_argument("--numeric", action="store_true", help="solve the coupling system numerically")
    p.add_argument("--points", help="point CSV for optional field export")
    p.add_argument("--export", help="field CSV path for --points")
    p.set_defaults(func=cmd_eval)

    d = ValidationConfig()
    p = sub.add_parser("validate", parents=[common], help="run residual checks")
    p.add_argument("--numeric", action="store_true", help="solve the coupling system numerically")
    p.add_argument("--n-points", type=int, default=d.n_points)
    p.add_argument("--h-rel", type=float, default=d.h_rel)
    p.add_argument("--tol-momentum", type=float, default=d.tol_momentum)
    p.add_argument("--tol-momentum-nonlinear", type=float, default=d.tol_momentum_nonlinear)
    p.add_argument("--tol-mass", type=float, default=d.tol_mass)
    p.add_argument("--tol-coupling", type=float, default=d.tol_coupling)
    p.add_argument("--tol-boundary", type=float, default=d.tol_boundary)
    p.add_argument("--corrupt", metavar="NAME", help="debug: perturb one coefficient")
    p.add_argument("--corrupt-rel", type=float, default=1e-3)
    p.add_argument("--format", choices=("text", "kv"), default="kv")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("resonance", parents=[common], help="list resonance frequencies")
    p.add_argument("--n-max", type=int, default=2)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("export", parents=[common, times], help="export fields at points")
    p.add_argument("--points", required=True, help="point CSV")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("error", parents=[common], help="error norms and observed order")
    p.add_argument("--numeric", help="numeric field CSV")
    p.add_argument("--points", help="point CSV with weights")
    p.add_argument("--fields", help="comma-separated fields (default: all in the file)")
    p.add_argument("--uniform-weights", action="store_true",
                   help="use w = 1/N when the point file has no weights")
    p.add_argument("--window", type=float, nargs=2, metavar=("T0", "T1"))
    p.add_argument("--dt", type=float)
    p.add_argument("--dx", type=float)
    p.add_argument("--pair", dest="pairs", action="append", metavar="STEP:ERROR")
    p.set_defaults(func=cmd_error)

    p = sub.add_parser("plot-data", parents=[common, times], help="profile tables for plotting")
    p.add_argument("--samples", type=int, default=21, help="samples per subdomain")
    p.add_argument("--axial", type=float, help="axial position (default L)")
    p.set_defaults(func=cmd_plot_data)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", NearResonanceWarning)
            return args.func(args)
    except (ParameterError, DomainError, norms.NormError, ValueError) as exc:
        if isinstance(exc, meshio.MeshIOError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
