"""Per-run results and their CSV serialisation."""

import csv
import io
from dataclasses import dataclass, fields

from .exceptions import InvalidArgumentError, ParseError

CSV_COLUMNS = (
    "instance",
    "dimension",
    "algorithm",
    "seed",
    "run_index",
    "best_length",
    "iterations",
    "wall_time_ms",
    "pheromone_bytes",
)


def pheromone_footprint(n):
    """Bytes held by a dense ``n x n`` float64 pheromone matrix."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    return int(n) * int(n) * 8


@dataclass(frozen=True)
class RunRow:
    """One line of the raw run CSV."""

    instance: str
    dimension: int
    algorithm: str
    seed: int
    run_index: int
    best_length: float
    iterations: int
    wall_time_ms: float
    pheromone_bytes: int

    def without_wall_time(self):
        return RunRow(**{**self.__dict__, "wall_time_ms": 0.0})


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one colony run.

    ``best_length_per_iteration[t]`` is the best length found up to and
    including iteration ``t``, so the series never increases.
    """

    instance: str
    variant: str
    seed: int
    best_tour: object
    best_length_per_iteration: tuple
    wall_time_ms: float
    pheromone_bytes: int
    dimension: int
    run_index: int = 0

    @property
    def best_length(self):
        return self.best_tour.length

    @property
    def iterations(self):
        return len(self.best_length_per_iteration)

    def to_row(self):
        return RunRow(
            instance=self.instance,
            dimension=self.dimension,
            algorithm=str(self.variant),
            seed=self.seed,
            run_index=self.run_index,
            best_length=self.best_length,
            iterations=self.iterations,
            wall_time_ms=self.wall_time_ms,
            pheromone_bytes=self.pheromone_bytes,
        )


def _as_row(record):
    return record if isinstance(record, RunRow) else record.to_row()


def format_run_csv(records):
    """Render records (``RunRecord`` or ``RunRow``) as CSV text."""
    records = list(records)
    if not records:
        raise InvalidArgumentError("write_run_csv needs at least one record")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = _as_row(rec)
        writer.writerow([
            row.instance,
            row.dimension,
            row.algorithm,
            row.seed,
            row.run_index,
            repr(float(row.best_length)),
            row.iterations,
            repr(float(row.wall_time_ms)),
            row.pheromone_bytes,
        ])
    return buf.getvalue()


def write_run_csv(records, sink):
    """Write the run CSV to the binary stream ``sink``."""
    sink.write(format_run_csv(records).encode("utf-8"))


def read_run_csv(source):
    """Parse run CSV from text, bytes or a text/binary stream into ``RunRow`` objects."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    reader = csv.reader(io.StringIO(source))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ParseError(f"run CSV header must be {','.join(CSV_COLUMNS)}", 1)
    types = {f.name: f.type for f in fields(RunRow)}
    rows = []
    for lineno, values in enumerate(reader, start=2):
        if not values:
            continue
        if len(values) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} fields, got {len(values)}", lineno)
        try:
            rows.append(RunRow(**{
                name: types[name](value) for name, value in zip(CSV_COLUMNS, values)
            }))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return rows
