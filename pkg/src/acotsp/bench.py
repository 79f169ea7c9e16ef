"""Benchmark harness: repeated seeded runs, size-category aggregation and reports.

A suite runs every (instance, variant, repetition) cell once. Cell seeds are
``base_seed + run_index`` mixed with a BLAKE2b hash of the instance and
variant names, so each cell is reproducible on its own (the mixed seed is
what ends up in the CSV and can be passed to ``acotsp solve --seed``).
"""

import configparser
import csv
import hashlib
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .colony import AcoParams, Variant, run
from .distances import RoundingMode
from .exceptions import AcoError, InvalidArgumentError, ParseError
from .records import pheromone_footprint  # noqa: F401  (re-exported)
from .tsplib import corpus_path, load_tsplib

DEFAULT_REPETITIONS = 10


class SizeCategory(str, Enum):
    SMALL = "Small"
    MEDIUM = "Medium"
    LARGE = "Large"

    @property
    def caption(self):
        return {
            SizeCategory.SMALL: "n < 100",
            SizeCategory.MEDIUM: "100 <= n < 1000",
            SizeCategory.LARGE: "n >= 1000",
        }[self]


def size_category(n):
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if n < 100:
        return SizeCategory.SMALL
    if n < 1000:
        return SizeCategory.MEDIUM
    return SizeCategory.LARGE


@dataclass
class BenchConfig:
    instances: list
    variants: list = field(default_factory=lambda: list(Variant))
    repetitions: int = DEFAULT_REPETITIONS
    base_seed: int = 0
    overrides: dict = field(default_factory=dict)
    rounding: RoundingMode = RoundingMode.UNROUNDED_REAL

    def __post_init__(self):
        self.variants = [Variant.parse(v) for v in self.variants]
        if not self.variants:
            raise InvalidArgumentError("at least one variant is required")
        if self.repetitions < 1:
            raise InvalidArgumentError("repetitions must be >= 1")
        self.rounding = RoundingMode.parse(self.rounding)
        self.overrides = {Variant.parse(k): dict(v) for k, v in self.overrides.items()}

    def params_for(self, variant, seed):
        return AcoParams.for_variant(variant, **self.overrides.get(variant, {}), seed=seed)


def _to_bool(text):
    try:
        return configparser.ConfigParser.BOOLEAN_STATES[text.strip().lower()]
    except KeyError:
        raise ParseError(f"not a boolean: {text!r}") from None


_PARAM_TYPES = {
    "iterations": int, "num_ants": int, "ants": int, "alpha": float, "beta": float,
    "rho": float, "tau0": float, "xi": float, "q0": float, "rank_cutoff": int,
    "mmas_best": str, "deposit": float, "elitist_gb": _to_bool,
}


def _param_items(items, where):
    out = {}
    for key, text in items.items():
        if key not in _PARAM_TYPES:
            raise ParseError(f"unknown parameter {key!r} in [{where}]")
        try:
            value = _PARAM_TYPES[key](text)
        except ValueError:
            raise ParseError(f"bad value for {key!r} in [{where}]: {text!r}") from None
        out["num_ants" if key == "ants" else key] = value
    return out


def resolve_instance(ref, base_dir="."):
    """``corpus:NAME`` names a bundled instance; anything else is a path."""
    if ref.startswith("corpus:"):
        return corpus_path(ref.split(":", 1)[1])
    return ref if os.path.isabs(ref) else os.path.normpath(os.path.join(base_dir, ref))


def parse_config(text, base_dir="."):
    """Read a benchmark configuration (INI syntax; see ``configs/`` for examples)."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc)) from None
    if not parser.has_section("bench"):
        raise ParseError("configuration needs a [bench] section")
    bench = parser["bench"]
    general = {k: bench[k] for k in bench}
    instances = [s.strip() for s in general.pop("instances", "").replace("\n", ",").split(",")]
    instances = [resolve_instance(s, base_dir) for s in instances if s]
    if not instances:
        raise ParseError("[bench] lists no instances")
    variants = [v.strip() for v in general.pop("variants", "AS, ASRank, MMAS, ACS").split(",")]
    try:
        repetitions = int(general.pop("repetitions", DEFAULT_REPETITIONS))
        base_seed = int(general.pop("base_seed", 0))
    except ValueError as exc:
        raise ParseError(f"[bench]: {exc}") from None
    rounding = general.pop("rounding", "real")
    common = _param_items(general, "bench")
    overrides = {}
    for name in variants:
        variant = Variant.parse(name)
        per = dict(common)
        for section in parser.sections():
            if section != "bench" and Variant.parse(section) == variant:
                per.update(_param_items(dict(parser[section]), section))
        overrides[variant] = per
    for section in parser.sections():
        if section != "bench":
            Variant.parse(section)
    return BenchConfig(instances=instances, variants=variants, repetitions=repetitions,
                       base_seed=base_seed, overrides=overrides, rounding=rounding)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))


def cell_seed(base_seed, run_index, instance_name, variant):
    """64-bit seed for one cell: ``base_seed + run_index`` mixed with the names."""
    key = f"{base_seed + run_index}|{instance_name}|{Variant.parse(variant).value}"
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "little")


@dataclass(frozen=True)
class ReportRow:
    instance: str
    dimension: int
    category: SizeCategory
    best_distance: float
    best_algorithm: str
    pheromone_bytes: int

    def __post_init__(self):
        object.__setattr__(self, "category", SizeCategory(self.category))


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    variants: list = field(default_factory=list)
    percentages: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    records: list = field(default_factory=list, compare=False, repr=False)

    def rows_in(self, category):
        return [r for r in self.rows if r.category == category]


def win_percentages(rows, category=None, variants=()):
    """Share of rows won by each algorithm, in percent.

    Winner labels need not be implemented variants (e.g. rows transcribed from
    a table transcribed from elsewhere). Every name in ``variants`` is reported, with 0 when it
    won nothing.
    """
    if category is not None:
        category = SizeCategory(category)
        rows = [r for r in rows if r.category == category]
    if not rows:
        return {}
    counts = {str(v): 0 for v in variants}
    for r in rows:
        counts[r.best_algorithm] = counts.get(r.best_algorithm, 0) + 1
    return {name: 100.0 * c / len(rows) for name, c in counts.items()}


def build_report(run_rows, variants=(), failures=()):
    """Aggregate raw run rows into per-instance best rows and category percentages.

    Ties on the best distance go to the lexicographically first algorithm name.
    """
    variants = [str(v) for v in variants]
    by_instance = {}
    for row in run_rows:
        by_instance.setdefault(row.instance, []).append(row)
        if row.algorithm not in variants:
            variants.append(row.algorithm)
    rows = []
    for name, group in by_instance.items():
        best = min(r.best_length for r in group)
        winner = min(r.algorithm for r in group if r.best_length == best)
        dim = group[0].dimension
        rows.append(ReportRow(name, dim, size_category(dim), best, winner, group[0].pheromone_bytes))
    percentages = {}
    for cat in SizeCategory:
        pct = win_percentages(rows, cat, variants)
        if pct:
            percentages[cat] = pct
    return BenchReport(rows=rows, variants=variants, percentages=percentages,
                       failures=list(failures))


def _run_cell(cell):
    instance, params, run_index = cell
    return run(instance, params, run_index=run_index)


def run_suite(config, jobs=1):
    """Execute every cell of ``config`` and aggregate the results.

    Instances that fail to parse are listed in ``report.failures`` and
    skipped. ``jobs > 1`` runs cells in worker processes; results are
    gathered in cell order so the output equals a serial run.
    """
    instances, failures = [], []
    for path in config.instances:
        try:
            instances.append(load_tsplib(path, rounding=config.rounding))
        except (OSError, AcoError) as exc:
            failures.append((path, f"{type(exc).__name__}: {exc}"))
    cells = []
    for inst in instances:
        for variant in config.variants:
            for run_index in range(config.repetitions):
                seed = cell_seed(config.base_seed, run_index, inst.name, variant)
                cells.append((inst, config.params_for(variant, seed), run_index))
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_cell, cells, chunksize=1))
    else:
        records = [_run_cell(c) for c in cells]
    report = build_report([r.to_row() for r in records], config.variants, failures)
    report.records = records
    return report


def _fmt(x):
    return repr(float(x))


def render_report(report, fmt="markdown"):
    """Render ``report`` as CSV, JSON or Markdown bytes."""
    fmt = fmt.lower()
    if fmt in ("md", "markdown"):
        text = _render_markdown(report)
    elif fmt == "json":
        text = json.dumps(report_to_dict(report), indent=2) + "\n"
    elif fmt == "csv":
        text = _render_csv(report)
    else:
        raise InvalidArgumentError(f"unknown report format {fmt!r}")
    return text.encode("utf-8")


def _render_markdown(report):
    out = ["# ACO benchmark report", ""]
    for cat in SizeCategory:
        rows = report.rows_in(cat)
        if not rows:
            continue
        out += [f"## {cat.value} ({cat.caption})", "",
                "| Dimensions | Best Distance | Best Algorithm | Pheromone Bytes |",
                "|---|---|---|---|"]
        out += [f"| {r.dimension} | {_fmt(r.best_distance)} | {r.best_algorithm} | "
                f"{r.pheromone_bytes} |" for r in rows]
        out.append("")
        out += [f"- {name} Percentage: {_fmt(p)}%" for name, p in report.percentages[cat].items()]
        out.append("")
    if report.failures:
        out.append("## Skipped instances")
        out.append("")
        out += [f"- {path}: {msg}" for path, msg in report.failures]
        out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


_REPORT_CSV_COLUMNS = ("kind", "category", "instance", "dimension", "best_distance",
                       "best_algorithm", "pheromone_bytes", "variant", "percentage", "detail")


def _render_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_REPORT_CSV_COLUMNS)
    writer.writerow(["variants", "", "", "", "", "", "", ";".join(report.variants), "", ""])
    for r in report.rows:
        writer.writerow(["row", r.category.value, r.instance, r.dimension, _fmt(r.best_distance),
                         r.best_algorithm, r.pheromone_bytes, "", "", ""])
    for cat, pct in report.percentages.items():
        for name, p in pct.items():
            writer.writerow(["percentage", SizeCategory(cat).value, "", "", "", "", "", name,
                             _fmt(p), ""])
    for path, msg in report.failures:
        writer.writerow(["failure", "", path, "", "", "", "", "", "", msg])
    return buf.getvalue()


def report_to_dict(report):
    return {
        "variants": list(report.variants),
        "rows": [{
            "instance": r.instance,
            "dimension": r.dimension,
            "category": r.category.value,
            "best_distance": r.best_distance,
            "best_algorithm": r.best_algorithm,
            "pheromone_bytes": r.pheromone_bytes,
        } for r in report.rows],
        "percentages": {SizeCategory(c).value: dict(p) for c, p in report.percentages.items()},
        "failures": [{"instance": path, "error": msg} for path, msg in report.failures],
    }


def report_from_dict(data):
    return BenchReport(
        rows=[ReportRow(**r) for r in data["rows"]],
        variants=list(data["variants"]),
        percentages={SizeCategory(c): dict(p) for c, p in data["percentages"].items()},
        failures=[(f["instance"], f["error"]) for f in data["failures"]],
    )


def parse_report(data, fmt):
    """Inverse of :func:`render_report` for the JSON and CSV formats."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    fmt = fmt.lower()
    if fmt == "json":
        return report_from_dict(json.loads(data))
    if fmt != "csv":
        raise InvalidArgumentError(f"cannot parse report format {fmt!r}")
    report = BenchReport()
    reader = csv.DictReader(io.StringIO(data))
    for rec in reader:
        kind = rec["kind"]
        if kind == "variants":
            report.variants = [v for v in rec["variant"].split(";") if v]
        elif kind == "row":
            report.rows.append(ReportRow(rec["instance"], int(rec["dimension"]),
                                         SizeCategory(rec["category"]),
                                         float(rec["best_distance"]), rec["best_algorithm"],
                                         int(rec["pheromone_bytes"])))
        elif kind == "percentage":
            cat = SizeCategory(rec["category"])
            report.percentages.setdefault(cat, {})[rec["variant"]] = float(rec["percentage"])
        elif kind == "failure":
            report.failures.append((rec["instance"], rec["detail"]))
        else:
            raise ParseError(f"unknown report record kind {kind!r}")
    return report
