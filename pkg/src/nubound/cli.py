"""Command-line entry point: ``nubound spectrum|wavefunction|verify``.

Exit codes: 0 success (verify PASS), 1 verify FAIL, 2 configuration error,
3 solver or internal failure.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import logging
import sys

from . import pipeline
from .config import ConfigError, parse_config

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("nubound")


def _grid(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'n1,n2', got {text!r}") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nubound", description="Bound states of ring-shaped Kratzer "
                                "and oscillator potentials in two dimensions.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("spectrum", "tabulate M^2 and energies as CSV"),
                           ("wavefunction", "sample one 2D state on a grid as CSV"),
                           ("verify", "three-way check against the finite-difference oracle")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True, help="key = value parameter file")
        sp.add_argument("--out", help="output file (default: standard output)")
        if name == "wavefunction":
            sp.add_argument("--grid", type=_grid, default=(50, 72), metavar="N1,N2",
                            help="points along r,phi (or x,y with --cartesian)")
            sp.add_argument("--cartesian", action="store_true", help="emit x,y,psi instead of r,phi,psi")
            sp.add_argument("--n0", type=int, default=0, help="angular quantum number")
            sp.add_argument("--nr", type=int, default=0, help="radial quantum number")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = parse_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    buf = io.StringIO()
    try:
        if args.command == "spectrum":
            pipeline.write_spectrum_csv(pipeline.spectrum_rows(cfg), buf)
            status = EXIT_OK
        elif args.command == "wavefunction":
            if args.n0 < 0 or args.nr < 0:
                print("error: quantum numbers must be >= 0", file=sys.stderr)
                return EXIT_CONFIG
            gf = pipeline.wavefunction_grid(cfg, args.n0, args.nr, args.grid, args.cartesian)
            pipeline.write_grid_csv(gf, buf)
            status = EXIT_OK
        else:
            with contextlib.redirect_stdout(sys.stderr):
                report = pipeline.run_verify(cfg)
            buf.write(pipeline.dump_report(report))
            status = EXIT_OK if report["status"] == "PASS" else EXIT_FAIL
            if status:
                print("verify FAIL: " + "; ".join(report["failures"]), file=sys.stderr)
    except Exception as exc:  # solver failures of any kind map to one exit code
        log.debug("solver failure", exc_info=True)
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(buf.getvalue(), args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
