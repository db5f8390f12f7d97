"""Command-line interface: ``qeis {g,h,u,G,anm,bnm,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from . import families as fam
from . import partitions as part
from .series import QExpansion, format_rational
from .verify import SUITES, TAMPER_TARGETS, results_json, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_ORDER = 8
DEFAULT_K_MAX = 6


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {value}")
    return value


def _default_order() -> int:
    raw = os.environ.get("QEIS_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError as exc:
        raise SystemExit(_usage_error(f"QEIS_ORDER: {exc}"))


def _usage_error(message: str) -> int:
    print(f"qeis: error: {message}", file=sys.stderr)
    return EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    order = _default_order()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_positive_int, default=order,
                        help=f"q-truncation order N (default {order}, env QEIS_ORDER)")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=_positive_float, default=1e-8)

    parser = _Parser(prog="qeis", description="Partial and false Eisenstein series toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (("g", "partial Eisenstein series g_k"),
                       ("h", "false Eisenstein series h_k"),
                       ("u", "unimodal Taylor coefficients u_k"),
                       ("G", "Eisenstein series G_k (even k)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--k-max", type=_positive_int, default=DEFAULT_K_MAX)
    for name, text in (("anm", "coefficients a_(n,m)"), ("bnm", "coefficients b_(n,m)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--n-max", type=_positive_int, default=10)
    p = sub.add_parser("verify", parents=[common], help="run identity suites")
    p.add_argument("--suite", choices=SUITES, default="exact")
    p.add_argument("--tamper", choices=TAMPER_TARGETS, default=None,
                   help="fault injection: perturb one extracted coefficient before checking")
    return parser


# ---------------------------------------------------------------------------
# series output

def series_rows(which: str, k_max: int, order: int) -> dict[str, QExpansion]:
    if which == "G":
        return {f"G_{k}": fam.eisenstein_G(k, order) for k in range(2, k_max + 1, 2)}
    series = fam.extract_coeffs(which, k_max, order)
    return {f"{which}_{k}": s for k, s in enumerate(series, 1)}


def render_series(rows: dict[str, QExpansion], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({name: s.to_dict() for name, s in rows.items()}, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["series", "n", "coefficient"])
        for name, s in rows.items():
            for n, c in enumerate(s.coeffs):
                w.writerow([name, n, format_rational(c)])
        return buf.getvalue().rstrip("\n")
    return "\n".join(f"{name}(tau) = {s.to_string()}" for name, s in rows.items())


def parse_series_json(text: str) -> dict[str, QExpansion]:
    return {name: QExpansion.from_dict(d) for name, d in json.loads(text).items()}


# ---------------------------------------------------------------------------
# coefficient tables

def coeff_rows(which: str, n_max: int) -> list[tuple[int, int, int, int]]:
    row = part.a_row if which == "anm" else part.b_row
    threshold = part.a_threshold if which == "anm" else part.b_threshold
    return [(n, m, v, threshold(n)) for n in range(1, n_max + 1) for m, v in row(n).items()]


def render_coeffs(rows, fmt: str) -> str:
    header = ("n", "m", "value", "threshold")
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).rjust(wd) for x, wd in zip(r, widths)) for r in [header, *rows]]
    return "\n".join(lines)


# ---------------------------------------------------------------------------

def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    if args.command in ("g", "h", "u", "G"):
        print(render_series(series_rows(args.command, args.k_max, args.order), args.format))
        return EXIT_OK
    if args.command in ("anm", "bnm"):
        print(render_coeffs(coeff_rows(args.command, args.n_max), args.format))
        return EXIT_OK

    results = run_suite(args.suite, args.order, args.seed, args.tol, args.tamper)
    if args.format == "json":
        print(results_json(results))
    else:
        for r in results:
            print(r.line())
    failed = [r for r in results if not r.passed]
    passed = len(results) - len(failed)
    print(f"{passed}/{len(results)} checks passed", file=sys.stderr)
    for r in failed:
        print(f"failed: {r.name}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
