"""Command-line experiment runner.

Examples::

    pipct table1 --out table1.csv
    pipct sweep --N 2,8,32 --np 2,8 --window -1,1
    pipct approx --fn abs13 --N 16 --method apipct
    pipct adaptive --config runs/adaptive.cfg --repeats 3

A config file holds ``key = value`` lines using the long flag names
(``N = 104,208``); flags given on the command line take precedence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import corpus
from .errors import ApproximationError
from .experiments import DEFAULTS, ExperimentSpec, default_spec, run, write_csv

log = logging.getLogger(__name__)


def _ints(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _window(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"window must be 'a,b', got {text!r}")
    return vals


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


# flag name -> (spec field, parser, help)
OPTIONS = {
    "fn": ("fn", str, "corpus function id"),
    "N": ("N_list", _ints, "comma-separated cell counts"),
    "n": ("n", int, "quadrature size per cell"),
    "np": ("np", int, "numerator degree"),
    "nq": ("nq", int, "denominator degree"),
    "np-list": ("np_list", _ints, "comma-separated np=nq values (sweep, poles)"),
    "m": ("m", int, "baseline degree for badcell detection"),
    "eps": ("eps", float, "badcell threshold epsilon"),
    "eps-list": ("eps_list", _floats, "comma-separated epsilon grid (np0)"),
    "np-cap": ("np_cap", int, "largest np searched (np0)"),
    "tau": ("tau", float, "minimum cell width"),
    "window": ("window", _window, "L1 window 'a,b'"),
    "samples": ("samples", int, "L1 samples per cell"),
    "theta-samples": ("theta_samples", int, "unit-circle scan resolution"),
    "threshold": ("threshold", float, "relative spurious-residue threshold"),
    "halfwidth": ("halfwidth", float, "neighbourhood half-width around singularities"),
    "nbhd-samples": ("nbhd_samples", int, "midpoint samples per neighbourhood"),
    "grid": ("grid", int, "dense evaluation grid size"),
    "repeats": ("repeats", int, "timing repetitions (median reported)"),
    "full-scale": ("full_scale", _bool, "global PCT with n = max(N) * n (sweep)"),
    "method": ("method", str, "pipct, apipct or chebyshev (approx)"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag, (dest, conv, help_) in OPTIONS.items():
        common.add_argument(f"--{flag}", dest=dest, type=conv, default=None, help=help_)
    common.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    common.add_argument("--config", default=None, help="key=value config file")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="pipct", description="Piecewise Pade-Chebyshev experiments")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in DEFAULTS:
        sub.add_parser(name, parents=[common])
    sub.add_parser("list", help="list corpus function ids")
    return parser


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-")
            if key == "out":
                values["out"] = value
                continue
            if key not in OPTIONS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            dest, conv, _ = OPTIONS[key]
            values[dest] = conv(value)
    return values


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    params = read_config(args.config) if args.config else {}
    for dest, _, _ in OPTIONS.values():
        value = getattr(args, dest)
        if value is not None:
            params[dest] = value
    if args.out is not None:
        params["out"] = args.out
    return default_spec(args.experiment, **params)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.experiment == "list":
        for fn_id in corpus.ids():
            print(fn_id)
        return 0
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr)
    try:
        spec = spec_from_args(args)
        table = run(spec)
    except (ApproximationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if spec.out:
        with open(spec.out, "w", newline="") as fh:
            write_csv(table, fh)
    else:
        write_csv(table, sys.stdout)
    for key, value in table.summary.items():
        print(f"# {key} = {value}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
