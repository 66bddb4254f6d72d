"""Command-line front end: ``fockmetric <command> [options]``.

Writes figure data and single-shot results as CSV (17 significant digits,
LF line endings) or as one JSON object. Exit codes: 0 success, 1 bad
arguments, 2 I/O failure, 3 numerical contract violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import __version__, figures
from .errors import ContractViolation, FockMetricError

log = logging.getLogger("fockmetric")

EXIT_OK, EXIT_ARGS, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "qfi", "ng", "protocol", "measure")

JSON_SCHEMA = {
    "type": "object",
    "required": ["command", "params", "columns", "rows", "provenance"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "params": {"type": "object"},
        "columns": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "rows": {
            "type": "array",
            "items": {"type": "array", "items": {"type": ["number", "integer", "boolean", "null"]}},
        },
        "provenance": {"type": "string"},
    },
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _levels(text: str) -> list[int]:
    try:
        out = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must be comma-separated integers, got {text!r}")
    if not out or any(n < 0 for n in out):
        raise argparse.ArgumentTypeError(f"levels must be non-negative integers, got {text!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockmetric", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fockmetric {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    grid = parser.add_argument_group("frequency grid (fig2, fig3, fig6)")
    grid.add_argument("--omega-start", type=float, default=figures.DEFAULT_OMEGA[0])
    grid.add_argument("--omega-stop", type=float, default=figures.DEFAULT_OMEGA[1])
    grid.add_argument("--omega-count", type=int, default=figures.DEFAULT_OMEGA[2])
    grid.add_argument("--log", dest="log", action="store_true", default=True, help="log spacing (default)")
    grid.add_argument("--linear", dest="log", action="store_false", help="linear spacing")
    parser.add_argument("--omega", type=float, default=1.0, help="frequency for single-shot commands")
    parser.add_argument("--levels", type=_levels, default=None, help="comma-separated Fock levels")
    parser.add_argument("--gamma", type=float, default=0.1)
    parser.add_argument("--m", type=int, default=1, help="ancilla Fock level")
    parser.add_argument("--omega-s", type=float, default=1.0)
    parser.add_argument("--omega-a", type=float, default=1.0)
    parser.add_argument("--t-count", type=int, default=201)
    parser.add_argument("--t-stop", type=float, default=None)
    parser.add_argument("--p", type=float, default=0.5, help="measurement strength")
    parser.add_argument("--n-meas", type=int, default=1)
    parser.add_argument("--workers", type=int, default=None, help="threads for sweep rows")
    parser.add_argument("--out", default="-", help="output path ('-' for stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def make_table(args) -> figures.Table:
    grid = lambda: figures.omega_grid(args.omega_start, args.omega_stop, args.omega_count, args.log)
    cmd = args.command
    if cmd == "fig1":
        return figures.fig1()
    if cmd == "fig2":
        return figures.fig2(grid(), workers=args.workers)
    if cmd == "fig3":
        return figures.fig3(grid(), args.levels or figures.FIG3_LEVELS, workers=args.workers)
    if cmd == "fig4":
        return figures.fig4(levels=args.levels or figures.FIG4_LEVELS)
    if cmd == "fig5":
        return figures.fig5(workers=args.workers)
    if cmd == "fig6":
        return figures.fig6(grid(), workers=args.workers)
    if cmd == "qfi":
        return figures.qfi_table(args.levels or [0, 3, 5, 10], args.omega, args.n_meas)
    if cmd == "ng":
        return figures.ng_table(args.levels or list(range(11)), args.omega)
    if cmd == "protocol":
        return figures.fig5(args.gamma, args.m, args.omega_s, args.omega_a, args.t_count,
                            args.t_stop, args.workers, command="protocol")
    if cmd == "measure":
        return figures.measure_table(args.p, args.omega)
    raise UsageError(f"unknown command {cmd}")


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def to_csv(table: figures.Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def _plain(value):
    if hasattr(value, "item"):
        return value.item()
    return value


def to_json(table: figures.Table) -> str:
    doc = {
        "command": table.command,
        "params": {k: _plain(v) for k, v in table.params.items()},
        "columns": list(table.columns),
        "rows": [[_plain(v) for v in row] for row in table.rows],
        "provenance": f"fockmetric {__version__}",
    }
    return json.dumps(doc, indent=1)


def write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"fockmetric: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        table = make_table(args)
        text = to_json(table) if args.format == "json" else to_csv(table)
    except ContractViolation as exc:
        print(f"fockmetric: numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FockMetricError, ValueError, UsageError) as exc:
        print(f"fockmetric: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    try:
        write_output(text, args.out)
    except OSError as exc:
        print(f"fockmetric: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    log.debug("wrote %d rows for %s", len(table.rows), args.command)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
