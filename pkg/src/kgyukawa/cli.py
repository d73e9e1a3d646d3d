"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 solver error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import harness
from .errors import DegenerateInputError, DomainError, KGYukawaError, UsageError
from .kg_spectrum import SpectrumMode, nu_cross_check, solve_levels
from .model import ProblemParams, QuantumNumbers, UnitSystem
from .nonrel import DeltaConvention, nonrel_energy
from .oracle import RadialGrid, numerov_eigenvalue
from .wavefunc import normalized, radial_eval, wave_params

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2


def _fmt(x: float) -> str:
    return f"{x:#.10g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _physics_flags(p, lam=True):
    p.add_argument("--m0", type=float, default=1.0)
    p.add_argument("--m1", type=float, default=0.0)
    p.add_argument("--v0", type=float, default=0.0)
    p.add_argument("--s0", type=float, default=0.0)
    if lam:
        p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--delta", type=float, required=False)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--l", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgyukawa", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of default flag values")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    modes = [m.value for m in SpectrumMode]

    p = sub.add_parser("solve", parents=[common], help="relativistic energy levels")
    p.add_argument("--mode", choices=modes, default=SpectrumMode.GENERAL_PDM.value)
    _physics_flags(p)
    p.add_argument("--branch", choices=["both", "positive", "negative"], default="both")
    p.add_argument("--emin", type=float)
    p.add_argument("--emax", type=float)

    p = sub.add_parser("nonrel", parents=[common], help="closed-form nonrelativistic level")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)

    p = sub.add_parser("wavefunction", parents=[common], help="sample a normalized radial eigenfunction as CSV")
    p.add_argument("--mode", choices=modes, default=SpectrumMode.SCALAR_ONLY_PDM.value)
    _physics_flags(p)
    p.add_argument("--branch", choices=["positive", "negative"], default="positive")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--rmax", type=float)
    p.add_argument("--out")

    p = sub.add_parser("oracle", parents=[common], help="Numerov eigenvalue of the exact Yukawa problem")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--nodes", type=int, default=0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--points", type=int)

    p = sub.add_parser("table", parents=[common], help="reproduce a printed table as a comparison report")
    p.add_argument("--id", dest="table_id")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--delta-convention", choices=[c.value for c in DeltaConvention])
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("check", parents=[common], help="NU consistency matrix across every mode")
    p.add_argument("--m0", type=float, default=1.0)
    p.add_argument("--m1", type=float, default=0.1)
    p.add_argument("--v0", type=float, default=1.0)
    p.add_argument("--s0", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    return parser


def _load_config(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        with open(known.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    out = {}
    for key, value in data.items():
        dest = key.lstrip("-").replace("-", "_")
        out[{"lambda": "lam", "id": "table_id"}.get(dest, dest)] = value
    return out


def _apply_config(parser, config):
    if not config:
        return
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in sub_action.choices.values():
        known = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in config.items() if k in known})


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + {"lam": "lambda", "table_id": "id"}.get(n, n) for n in missing)
        raise UsageError(f"{args.command}: missing required {flags}")


def _params(args):
    return ProblemParams.make(
        delta=args.delta, v0=args.v0, s0=args.s0, lam=getattr(args, "lam", 0.0),
        m0=args.m0, m1=args.m1,
    )


def _cmd_solve(args, out):
    _require(args, "delta")
    params = _params(args)
    search = None
    if args.emin is not None or args.emax is not None:
        lo, hi = -(params.m0 - 1e-9), params.m0 - 1e-9
        search = (lo if args.emin is None else args.emin, hi if args.emax is None else args.emax)
    levels = solve_levels(args.mode, params, QuantumNumbers(args.n, args.l), search=search, branch=args.branch)
    if not levels:
        print("no real level in the search window", file=sys.stderr)
        return EXIT_SOLVER
    for lev in levels:
        print(f"{lev.branch.value}\t{_fmt(lev.value)}\tresidual={lev.residual:.3e}", file=out)
    return EXIT_OK


def _cmd_nonrel(args, out):
    _require(args, "lam", "delta")
    units = UnitSystem(hbar=args.hbar, mu=args.mu)
    print(_fmt(nonrel_energy(args.lam, args.delta, QuantumNumbers(args.n, args.l), units)), file=out)
    return EXIT_OK


def _cmd_wavefunction(args, out):
    _require(args, "delta")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    params = _params(args)
    qn = QuantumNumbers(args.n, args.l)
    levels = solve_levels(args.mode, params, qn, branch=args.branch)
    if not levels:
        print("no real level in the search window", file=sys.stderr)
        return EXIT_SOLVER
    level = max(levels, key=lambda lev: abs(lev.value))
    wp = normalized(wave_params(params, qn, level.value), qn, params.delta)
    rmax = args.rmax if args.rmax is not None else 40.0 / (max(wp.p, 1e-3) * params.delta)
    r = np.linspace(rmax / args.points, rmax, args.points)
    u = radial_eval(wp, qn, params.delta, r)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "u", "energy"])
    for ri, ui in zip(r, u):
        writer.writerow([f"{ri:.10g}", f"{ui:.10g}", f"{level.value:.10g}"])
    _write(buf.getvalue().encode(), args.out, out)
    return EXIT_OK


def _cmd_oracle(args, out):
    _require(args, "lam", "delta")
    units = UnitSystem(hbar=args.hbar, mu=args.mu)
    grid = None
    if args.points is not None:
        base = RadialGrid.default(args.lam, args.l, args.nodes, units)
        grid = RadialGrid(base.r_min, base.r_max, args.points)
    level = numerov_eigenvalue(args.lam, args.delta, args.l, args.nodes, grid=grid, units=units)
    print(_fmt(level.energy), file=out)
    if level.warning:
        print(f"warning: {level.warning}", file=sys.stderr)
    return EXIT_OK


def _cmd_table(args, out):
    _require(args, "table_id")
    report = harness.reproduce_table(args.table_id, delta_convention=args.delta_convention, tolerance=args.tolerance)
    data = harness.emit(report, args.format, None)
    _write(data, args.out, out)
    return EXIT_OK


def _cmd_check(args, out):
    qn = QuantumNumbers(args.n, args.l)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["mode", "energy", "eq4_residual", "eq4_residual_corrected", "formula_residual", "note"])
    for mode in SpectrumMode:
        m1 = 0.0 if mode.value.startswith("const-mass") else args.m1
        params = ProblemParams.make(delta=args.delta, v0=args.v0, s0=args.s0, lam=args.lam, m0=args.m0, m1=m1)
        try:
            levels = solve_levels(mode, params, qn)
        except KGYukawaError as exc:
            writer.writerow([mode.value, "", "", "", "", str(exc)])
            continue
        if not levels:
            writer.writerow([mode.value, "", "", "", "", "no real level"])
        for lev in levels:
            cc = nu_cross_check(mode, params, qn, lev)
            writer.writerow([
                mode.value, f"{lev.value:.10g}",
                "" if cc.eq4_residual is None else f"{cc.eq4_residual:.10g}",
                "" if cc.eq4_residual_corrected is None else f"{cc.eq4_residual_corrected:.10g}",
                f"{cc.printed_formula_residual:.3e}", cc.note,
            ])
    return EXIT_OK


def _write(data: bytes, path, out):
    if path is None or path == "-":
        out.write(data.decode())
        out.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


_COMMANDS = {
    "solve": _cmd_solve,
    "nonrel": _cmd_nonrel,
    "wavefunction": _cmd_wavefunction,
    "oracle": _cmd_oracle,
    "table": _cmd_table,
    "check": _cmd_check,
}


def run_cli(argv=None, out=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        _apply_config(parser, _load_config(argv))
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return _COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except (UsageError, DomainError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KGYukawaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run_cli())
