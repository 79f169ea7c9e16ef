"""Command-line entry point: ``acotsp {solve,bench,oracle,report}``.

Exit codes: 0 success, 1 usage error, 2 input or parse error, 3 internal
invariant violation. Failures print one ``error: <kind>: <detail>`` line
to stderr.
"""

import argparse
import os
import sys
import tempfile

from .bench import build_report, load_config, render_report, run_suite
from .colony import AcoParams, Variant, run
from .distances import RoundingMode
from .exceptions import (
    AcoError,
    InvalidArgumentError,
    InvariantViolationError,
    SizeLimitError,
)
from .instance import build_distance_matrix
from .oracle import HELD_KARP_LIMIT, exact_optimum
from .records import format_run_csv, read_run_csv
from .tsplib import load_tsplib

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def atomic_write(path, data):
    """Write ``data`` (bytes) to ``path`` through a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _variant(text):
    try:
        return Variant.parse(text)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = _Parser(prog="acotsp", description="Ant colony optimisation for the TSP.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="run one ACO variant on a TSPLIB instance")
    solve.add_argument("instance")
    solve.add_argument("--variant", type=_variant, default=Variant.ACS,
                       help="AS, ASRank, MMAS or ACS (case-insensitive; default ACS)")
    solve.add_argument("--iterations", type=int)
    solve.add_argument("--ants", type=int)
    solve.add_argument("--alpha", type=float)
    solve.add_argument("--beta", type=float)
    solve.add_argument("--rho", type=float, help="evaporation rate (default per variant)")
    solve.add_argument("--tau0", type=float)
    solve.add_argument("--xi", type=float, help="ACS local decay")
    solve.add_argument("--q0", type=float, help="ACS exploitation probability")
    solve.add_argument("--rank-cutoff", type=int, help="ASRank w")
    solve.add_argument("--mmas-best", choices=["iteration", "global"])
    solve.add_argument("--deposit", type=float, help="deposit constant Q")
    solve.add_argument("--elitist", action="store_true", help="ASRank global-best term")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--rounding", choices=["tsplib", "real"], default="real")
    solve.add_argument("--output", help="write the run as a one-row CSV")

    bench = sub.add_parser("bench", help="run a benchmark suite from a config file")
    bench.add_argument("config")
    bench.add_argument("--output-dir", required=True)
    bench.add_argument("--jobs", type=int, default=1)

    oracle = sub.add_parser("oracle", help=f"exact optimum for n <= {HELD_KARP_LIMIT}")
    oracle.add_argument("instance")
    oracle.add_argument("--rounding", choices=["tsplib", "real"], default="real")

    report = sub.add_parser("report", help="re-render a raw run CSV as a report")
    report.add_argument("runs_csv")
    report.add_argument("--format", choices=["markdown", "json", "csv"], default="markdown")
    report.add_argument("--output")
    return parser


def cmd_solve(args, out):
    inst = load_tsplib(args.instance, rounding=RoundingMode.parse(args.rounding))
    try:
        params = AcoParams.for_variant(
            args.variant, iterations=args.iterations, num_ants=args.ants, alpha=args.alpha,
            beta=args.beta, rho=args.rho, tau0=args.tau0, xi=args.xi, q0=args.q0,
            rank_cutoff=args.rank_cutoff, mmas_best=args.mmas_best, deposit=args.deposit,
            elitist_gb=args.elitist or None, seed=args.seed)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from None
    record = run(inst, params)
    shown = params.as_dict()
    if shown["deposit"] is None:
        shown["deposit"] = "auto"
    out.write(f"instance: {inst.name} ({inst.dimension} cities)\n")
    out.write("parameters: " + " ".join(f"{k}={v}" for k, v in shown.items()) + "\n")
    out.write(f"best_length: {record.best_length!r}\n")
    out.write("tour: " + " ".join(str(inst.labels[c]) for c in record.best_tour.order) + "\n")
    if args.output:
        atomic_write(args.output, format_run_csv([record]).encode("utf-8"))
    return EXIT_OK


def cmd_bench(args, out):
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    config = load_config(args.config)
    report = run_suite(config, jobs=args.jobs)
    os.makedirs(args.output_dir, exist_ok=True)
    paths = {
        "runs.csv": format_run_csv(report.records).encode("utf-8") if report.records else None,
        "report.json": render_report(report, "json"),
        "report.md": render_report(report, "markdown"),
    }
    for name, data in paths.items():
        if data is not None:
            atomic_write(os.path.join(args.output_dir, name), data)
    for path, msg in report.failures:
        sys.stderr.write(f"warning: skipped {path}: {msg}\n")
    out.write(render_report(report, "markdown").decode("utf-8"))
    return EXIT_OK


def cmd_oracle(args, out):
    inst = load_tsplib(args.instance, rounding=RoundingMode.parse(args.rounding))
    if inst.dimension > HELD_KARP_LIMIT:
        raise SizeLimitError(
            f"oracle supports n <= {HELD_KARP_LIMIT}; {inst.name} has n = {inst.dimension}")
    result = exact_optimum(build_distance_matrix(inst))
    out.write(f"optimal_length: {result.optimal_length!r}\n")
    out.write("order: " + " ".join(str(inst.labels[c]) for c in result.optimal_order) + "\n")
    out.write(f"method: {result.method.value}\n")
    return EXIT_OK


def cmd_report(args, out):
    with open(args.runs_csv, "rb") as fh:
        rows = read_run_csv(fh)
    data = render_report(build_report(rows), args.format)
    if args.output:
        atomic_write(args.output, data)
    else:
        out.write(data.decode("utf-8"))
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "oracle": cmd_oracle, "report": cmd_report}


def _fail(kind, detail, code):
    sys.stderr.write(f"error: {kind}: {' '.join(str(detail).split())}\n")
    return code


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except InvariantViolationError as exc:
        return _fail(exc.kind, exc, EXIT_INTERNAL)
    except AcoError as exc:
        return _fail(exc.kind, exc, EXIT_INPUT)
    except OSError as exc:
        return _fail("io", exc, EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
