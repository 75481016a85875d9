"""Command-line interface: phase, sbf, dynamics, and validate subcommands.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config_file, resolve_config
from .fock import ConvergenceError, FockError
from .meanfield import MeanFieldError
from . import sweeps, validation


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="INI config file (flags override)")
    sub.add_argument("--omega", type=float, help="mode frequency")
    sub.add_argument("--w", type=float, help="transfer strength")
    sub.add_argument("--g", type=float, help="Kerr strength")
    sub.add_argument("--lambda", dest="lambda_", type=float, help="drive amplitude")
    sub.add_argument("--nu-prime", dest="nu_prime", type=float, help="initial coherent amplitude")
    sub.add_argument("--cutoff", help="Fock truncation n_max, or 'auto'")
    sub.add_argument("--sweep", help="axis spec name:start:stop:points")
    sub.add_argument("--time-max", dest="time_max", type=float, help="dynamics time horizon")
    sub.add_argument("--time-points", dest="time_points", type=int, help="dynamics grid size")
    sub.add_argument("--jobs", type=int, help="worker processes (default: TWOMODE_JOBS or CPUs)")
    sub.add_argument("--out", metavar="PATH", help="output CSV path (default: stdout)")
    sub.add_argument("--format", dest="format", choices=["csv"], help="output format")
    sub.add_argument(
        "--entropy-unit", dest="entropy_unit", choices=["nats", "bits"],
        help="display unit for entropy columns (default nats)",
    )
    sub.add_argument(
        "--with-fock-oracle", dest="with_fock_oracle", action="store_const", const=True,
        help="add a brute-force oracle entropy column on a sampled subset",
    )
    sub.add_argument("--report", metavar="PATH", help="machine-readable report path")
    sub.add_argument(
        "--emit-plot-script", dest="plot_script", metavar="PATH",
        help="also write a self-contained matplotlib script for the CSV",
    )


def _resolve(args: argparse.Namespace):
    file_values = load_config_file(args.config) if args.config else {}
    flag_values = {
        "omega": args.omega,
        "w": args.w,
        "g": args.g,
        "lambda": args.lambda_,
        "nu_prime": args.nu_prime,
        "cutoff": args.cutoff,
        "sweep": args.sweep,
        "time_max": args.time_max,
        "time_points": args.time_points,
        "jobs": args.jobs,
        "out": args.out,
        "format": args.format,
        "with_fock_oracle": args.with_fock_oracle,
        "report": args.report,
        "entropy_unit": args.entropy_unit,
    }
    return resolve_config(file_values, flag_values)


def _emit_sweep(args, config, kind: str, columns, rows) -> int:
    sweeps.emit(config, columns, rows)
    if args.plot_script:
        sweeps.write_plot_script(args.plot_script, kind, columns, config.out or f"{kind}.csv")
    return 0


def cmd_phase(args: argparse.Namespace) -> int:
    config = _resolve(args)
    columns, rows = sweeps.run_phase_sweep(config)
    return _emit_sweep(args, config, "phase", columns, rows)


def cmd_sbf(args: argparse.Namespace) -> int:
    config = _resolve(args)
    columns, rows = sweeps.run_sbf_sweep(config)
    return _emit_sweep(args, config, "sbf", columns, rows)


def cmd_dynamics(args: argparse.Namespace) -> int:
    config = _resolve(args)
    columns, rows = sweeps.run_dynamics_sweep(config)
    return _emit_sweep(args, config, "dynamics", columns, rows)


def cmd_validate(args: argparse.Namespace) -> int:
    results = validation.run_checks(args.level)
    payload = validation.report_payload(results, args.level)
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"[{tag}] {r.check_id}: value={r.value:.3e} tol={r.tolerance:.3e}")
        if r.detail:
            print(f"       {r.detail}")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    failed = [r.check_id for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return 1
    print(f"all {len(results)} checks passed ({args.level} level)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twomode",
        description="Two-mode Kerr photon condensate: spectra, squeezing, dynamics.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_phase = subs.add_parser("phase", help="condensate entanglement staircase vs w/(omega+g)")
    _add_common_flags(p_phase)
    p_phase.set_defaults(func=cmd_phase)

    p_sbf = subs.add_parser("sbf", help="driven ground-state entanglement vs w/(omega+g)")
    _add_common_flags(p_sbf)
    p_sbf.set_defaults(func=cmd_sbf)

    p_dyn = subs.add_parser("dynamics", help="entanglement growth of a coherent state")
    _add_common_flags(p_dyn)
    p_dyn.set_defaults(func=cmd_dynamics)

    p_val = subs.add_parser("validate", help="run the named validation checks")
    p_val.add_argument("--level", choices=["quick", "full"], default="quick")
    p_val.add_argument("--report", metavar="PATH", help="JSON report path")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return 3
    except (MeanFieldError, FockError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
