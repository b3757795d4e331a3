"""Command-line experiment harness.

Each command reads its inputs, runs one experiment and writes exactly one
report.  Exit status: 0 on success, 1 on usage or input errors, 2 when the
computation itself fails (for example a support blowup).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .corpus import write_corpus
from .errors import ParseError, RichLinesError
from .incidence import count_incidences, elekes_experiment, grid_configuration, parse_configuration
from .measure import Caps, DEFAULT_MAX_PAIR_WORK, DEFAULT_MAX_SUPPORT, energy_report, flattening_report, iterate_star, star
from .rich import enumerate_rich_lines, overlap_pairs, theorem2_check
from .scalar import (
    Grid,
    format_numberset,
    format_scalar,
    make_ap,
    make_gp,
    make_random,
    parse_scalar,
    read_numberset,
    symmetrize,
)

log = logging.getLogger("richlines")

COMMANDS = ("gen-set", "rich-lines", "theorem2", "overlap", "energy", "flatten", "st-check", "elekes", "corpus")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _scalar_arg(text):
    try:
        return parse_scalar(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="richlines", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="PATH", help="report path (default: standard output)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--quiet", action="store_true", help="suppress progress on standard error")
        return p

    def grid_inputs(p):
        p.add_argument("--input", action="append", default=[], metavar="PATH",
                       help="number-set file; one --input gives a square grid")
        p.add_argument("--grid-a", metavar="PATH")
        p.add_argument("--grid-b", metavar="PATH")

    p = command("gen-set", "generate a number set file")
    p.add_argument("--kind", choices=("ap", "gp", "random"), required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--start", type=_scalar_arg, default=None)
    p.add_argument("--step", type=_scalar_arg, default=Fraction(1))
    p.add_argument("--ratio", type=_scalar_arg, default=Fraction(2))
    p.add_argument("--range", dest="range_", type=_positive_int, default=None)

    p = command("rich-lines", "enumerate all r-rich lines of a grid")
    grid_inputs(p)
    p.add_argument("--threshold", type=_positive_int, required=True)

    p = command("theorem2", "check the many-slopes hypotheses on the r-rich family")
    grid_inputs(p)
    p.add_argument("--threshold", type=_positive_int, default=2)
    p.add_argument("--epsilon", type=_scalar_arg, required=True)
    p.add_argument("--delta", type=_scalar_arg, required=True)

    p = command("overlap", "count line pairs with large Y-projection overlap")
    grid_inputs(p)
    p.add_argument("--threshold", type=_positive_int, required=True)
    p.add_argument("--tau", type=_positive_int, default=None)

    p = command("energy", "additive energy, translate search and the averaging identity")
    p.add_argument("--input", action="append", default=[], metavar="PATH")

    p = command("flatten", "iterate the quadruple convolution and report flattening")
    p.add_argument("--input", action="append", default=[], metavar="PATH")
    p.add_argument("--iterations", type=_positive_int, required=True)
    p.add_argument("--cap-support", type=_positive_int, default=DEFAULT_MAX_SUPPORT)

    p = command("st-check", "exact incidence count and Szemeredi-Trotter ratio")
    grid_inputs(p)
    p.add_argument("--threshold", type=_positive_int, default=2)

    p = command("elekes", "sum-product sizes against |A|^(5/2)")
    p.add_argument("--input", action="append", default=[], metavar="PATH")

    p = command("corpus", "write the standard experiment corpus into a directory")
    return parser


# ---------------------------------------------------------------- reports


def flatten_keys(obj, prefix="") -> dict:
    """Flatten nested dicts and lists to dotted keys for CSV output."""
    out = {}
    if isinstance(obj, dict):
        items = obj.items()
    elif isinstance(obj, list):
        items = ((str(i), v) for i, v in enumerate(obj))
    else:
        return {prefix: obj}
    for key, value in items:
        name = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, (dict, list)) and value:
            out.update(flatten_keys(value, name))
        elif isinstance(value, (dict, list)):
            out[name] = ""
        else:
            out[name] = value
    return out


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    flat = flatten_keys(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(flat.keys())
    writer.writerow(["" if v is None else _csv_value(v) for v in flat.values()])
    return buf.getvalue()


def _csv_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def write_atomic(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".richlines-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- commands


def _read_grid(args) -> Grid:
    if args.grid_a or args.grid_b:
        if not (args.grid_a and args.grid_b) or args.input:
            raise UsageError("give both --grid-a and --grid-b, or a single --input")
        return Grid(read_numberset(args.grid_a), read_numberset(args.grid_b))
    if len(args.input) == 1:
        return Grid.square(read_numberset(args.input[0]))
    if len(args.input) == 2:
        return Grid(read_numberset(args.input[0]), read_numberset(args.input[1]))
    raise UsageError("a grid needs --input PATH (square) or --grid-a PATH --grid-b PATH")


def _one_input(args):
    if len(args.input) != 1:
        raise UsageError("exactly one --input PATH is required")
    return read_numberset(args.input[0])


def _schema(command):
    return f"richlines.{command}/1"


def cmd_gen_set(args) -> str:
    if args.kind == "ap":
        s = make_ap(args.n, args.start if args.start is not None else 0, args.step)
    elif args.kind == "gp":
        s = make_gp(args.n, args.start if args.start is not None else 1, args.ratio)
    else:
        if args.seed is None:
            raise UsageError("--kind random requires --seed")
        s = make_random(args.n, args.seed, args.range_ if args.range_ is not None else 10 * args.n)
    return format_numberset(s)


def cmd_rich_lines(args) -> dict:
    g = _read_grid(args)
    family = enumerate_rich_lines(g, args.threshold)
    return {"schema": _schema("rich-lines"), "line_count": len(family),
            "slope_count": family.slope_count, **family.to_dict()}


def cmd_theorem2(args) -> dict:
    g = _read_grid(args)
    square = symmetrize(g)
    family = enumerate_rich_lines(square, args.threshold)
    report = theorem2_check(square, family, args.epsilon, args.delta)
    return {"schema": _schema("theorem2"), "symmetrized": square is not g,
            "threshold": args.threshold, "line_count": len(family), **report.to_dict()}


def cmd_overlap(args) -> dict:
    g = symmetrize(_read_grid(args))
    n, r = len(g.a), args.threshold
    family = enumerate_rich_lines(g, r)
    # horizontal lines have a one-point Y-projection, so the lemma needs slope != 0
    lines = [l for l in family.lines() if l.slope != 0]
    tau = args.tau if args.tau is not None else math.ceil(Fraction(r * r, 2 * n))
    stats = overlap_pairs(lines, g, tau)
    k = len(lines)
    bound = Fraction(k * k * r * r, 2 * n * n)
    return {"schema": _schema("overlap"), "n": n, "threshold": r, "line_count": k,
            **stats.to_dict(), "lemma_bound": format_scalar(bound),
            "lemma_holds": stats.pair_count_above >= bound}


def cmd_energy(args) -> dict:
    if len(args.input) not in (1, 2):
        raise UsageError("energy takes one or two --input PATH")
    x = read_numberset(args.input[0])
    y = read_numberset(args.input[-1])
    report = energy_report(x, y)
    m = report.m
    return {"schema": _schema("energy"), **report.to_dict(),
            "averaging_bound": -(-report.energy // (m * m))}


def cmd_flatten(args) -> dict:
    theta = _one_input(args)
    caps = Caps(max_support=args.cap_support, max_pair_work=DEFAULT_MAX_PAIR_WORK)
    steps = []
    f = iterate_star(theta, 0, caps)
    for i in range(args.iterations):
        diag = flattening_report(f, caps).to_dict() if len(f) >= 2 else None
        log.info("iteration %d: support %d", i + 1, len(f))
        steps.append({"j": i, "support_size": len(f), "max_weight": format_scalar(f.max_weight),
                      "flattening": diag})
        f = star(f, caps)
    return {"schema": _schema("flatten"), "theta": [format_scalar(v) for v in theta],
            "iterations": args.iterations, "steps": steps,
            "final": {"support_size": len(f), "max_weight": format_scalar(f.max_weight),
                      "support": [format_scalar(v) for v in f.support],
                      "weights": [format_scalar(w) for _, w in f.items()]}}


def cmd_st_check(args) -> dict:
    if len(args.input) == 1 and not (args.grid_a or args.grid_b):
        path = args.input[0]
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if "[points]" in text or "[lines]" in text:
            cfg = parse_configuration(text, source=path)
            return {"schema": _schema("st-check"), "source": "configuration",
                    **count_incidences(cfg).to_dict()}
    g = _read_grid(args)
    family = enumerate_rich_lines(g, args.threshold)
    report = count_incidences(grid_configuration(g, family.lines()))
    return {"schema": _schema("st-check"), "source": "grid", "threshold": args.threshold,
            **report.to_dict()}


def cmd_elekes(args) -> dict:
    report = elekes_experiment(_one_input(args))
    return {"schema": _schema("elekes"), **report.to_dict()}


def cmd_corpus(args) -> dict:
    if not args.out:
        raise UsageError("corpus requires --out DIR")
    seed = args.seed if args.seed is not None else 1
    written = write_corpus(seed, args.out)
    return {"schema": _schema("corpus"), "seed": seed, "files": written}


HANDLERS = {
    "gen-set": cmd_gen_set,
    "rich-lines": cmd_rich_lines,
    "theorem2": cmd_theorem2,
    "overlap": cmd_overlap,
    "energy": cmd_energy,
    "flatten": cmd_flatten,
    "st-check": cmd_st_check,
    "elekes": cmd_elekes,
    "corpus": cmd_corpus,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.quiet and not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="richlines: %(message)s")
    try:
        result = HANDLERS[args.command](args)
        if args.command == "corpus":
            print(f"wrote {len(result['files'])} files under {args.out}", file=sys.stderr)
            return 0
        text = result if isinstance(result, str) else render(result, args.format)
    except (UsageError, ParseError, OSError) as exc:
        print(f"richlines: error: {exc}", file=sys.stderr)
        return 1
    except RichLinesError as exc:
        print(f"richlines: computation error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())
