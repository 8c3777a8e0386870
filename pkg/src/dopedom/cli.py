"""Command line front end: ``dopedom {point,sweep,optimize,plot-data,regimes}``.

Exit codes: 0 success, 2 validation error, 3 unstable point (``point``),
4 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .analytics import regime_report
from .config import load_params
from .errors import ConfigError, DopedOMError, SolverError, ValidationError
from .spectral import write_spectrum_csv
from .workflows import (AXES, ROUTES, SweepSpec, emit_plot_data, evaluate_point,
                        optimize_detuning, run_sweep, write_sweep_csv)

EXIT_OK, EXIT_VALIDATION, EXIT_UNSTABLE, EXIT_NUMERICAL = 0, 2, 3, 4

log = logging.getLogger("dopedom")


def _overrides(pairs):
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _range(text):
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _params(args):
    return load_params(args.config, _overrides(args.set))


def cmd_point(args) -> int:
    p = _params(args)
    report = evaluate_point(p, args.routes, compare_standard=args.compare_standard)
    sys.stdout.write(report.to_text())
    if args.out and report.spectrum is not None:
        write_spectrum_csv(args.out, report.spectrum)
    if not report.stable:
        log.warning("working point is dynamically unstable; no occupation reported")
        return EXIT_UNSTABLE
    return EXIT_OK


def cmd_sweep(args) -> int:
    p = _params(args)
    lo, hi = args.range
    spec = SweepSpec(axis=args.axis, lo=lo, hi=hi, points=args.points,
                     compare_standard=args.compare_standard, routes=args.routes)
    rows = run_sweep(p, spec, workers=args.workers)
    write_sweep_csv(args.out or sys.stdout, rows, p, spec)
    failed = sum(1 for r in rows if r.error)
    if failed:
        log.warning("%d of %d points failed numerically (see error column)", failed, len(rows))
    return EXIT_OK


def cmd_optimize(args) -> int:
    p = _params(args)
    lo, hi = args.range
    res = optimize_detuning(p, args.axis, lo, hi, scan_points=args.points,
                            standard=args.standard)
    axis = "delta_c" if args.standard else args.axis
    print(f"# model: {'standard' if args.standard else 'doped'}")
    print(f"{axis} = {res.x:.12g}")
    print(f"n_f = {res.n_f:.12g}")
    print(f"evaluations = {res.evaluations}")
    return EXIT_OK


def cmd_plot_data(args) -> int:
    paths = emit_plot_data(args.csv, args.out)
    for name, path in paths.items():
        print(f"{name} = {path}")
    return EXIT_OK


def cmd_regimes(args) -> int:
    print(regime_report(_params(args)).to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dopedom",
        description="Cooling of a TLS-doped mechanical resonator in an optical cavity.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="INI parameter file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config field, e.g. --set kappa=1 or coupling.g=0.1")

    sp = sub.add_parser("point", help="evaluate one working point")
    common(sp)
    sp.add_argument("--routes", choices=ROUTES, default="both")
    sp.add_argument("--compare-standard", action="store_true")
    sp.add_argument("--out", help="write the sampled position spectrum (omega,S_q) here")
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("sweep", help="sweep a detuning and write CSV")
    common(sp)
    sp.add_argument("--axis", choices=AXES, required=True)
    sp.add_argument("--range", type=_range, required=True, metavar="LO:HI",
                    help="use --range=-2:3 for negative bounds")
    sp.add_argument("--points", type=int, default=200)
    sp.add_argument("--routes", choices=ROUTES, default="lyapunov")
    sp.add_argument("--compare-standard", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="CSV output path (default: stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("optimize", help="minimize n_f over a detuning")
    common(sp)
    sp.add_argument("--axis", choices=AXES, default="delta_c")
    sp.add_argument("--range", type=_range, required=True, metavar="LO:HI")
    sp.add_argument("--points", type=int, default=201, help="coarse scan points")
    sp.add_argument("--standard", action="store_true",
                    help="optimize the bare radiation-pressure comparator instead")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("plot-data", help="split a sweep CSV into per-curve files")
    sp.add_argument("csv")
    sp.add_argument("--out", help="output directory (default: next to the CSV)")
    sp.set_defaults(func=cmd_plot_data)

    sp = sub.add_parser("regimes", help="print cooperativity, regime labels, rate estimates")
    common(sp)
    sp.set_defaults(func=cmd_regimes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except (SolverError, DopedOMError) as exc:
        log.error("%s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
