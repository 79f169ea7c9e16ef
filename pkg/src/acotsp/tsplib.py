"""Reading and writing TSPLIB ``.tsp`` / ``.atsp`` documents."""

import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .distances import RoundingMode, WeightKind
from .exceptions import (
    MalformedHeaderError,
    ParseError,
    TruncatedSectionError,
    UnsupportedFormatError,
)
from .instance import TspInstance

SUPPORTED_TYPES = ("TSP", "ATSP")

EXPLICIT_FORMATS = (
    "FULL_MATRIX",
    "UPPER_ROW",
    "LOWER_ROW",
    "UPPER_DIAG_ROW",
    "LOWER_DIAG_ROW",
)

_SECTIONS = ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION")


@dataclass
class TsplibDocument:
    """Raw header key/values and numeric payloads of one TSPLIB file."""

    header: dict = field(default_factory=dict)
    coords: list = None
    labels: list = None
    weights: list = None
    display: list = None

    @property
    def dimension(self):
        raw = self.header.get("DIMENSION")
        if raw is None:
            raise MalformedHeaderError("missing DIMENSION")
        try:
            n = int(raw)
        except ValueError:
            raise MalformedHeaderError(f"DIMENSION is not an integer: {raw!r}") from None
        if n < 3:
            raise MalformedHeaderError(f"DIMENSION must be >= 3, got {n}")
        return n


def _weight_count(fmt, n):
    if fmt == "FULL_MATRIX":
        return n * n
    if fmt in ("UPPER_ROW", "LOWER_ROW"):
        return n * (n - 1) // 2
    return n * (n + 1) // 2


def expand_weights(values, fmt, n):
    """Expand a flat EDGE_WEIGHT_SECTION payload to a full ``n x n`` matrix."""
    values = np.asarray(values, dtype=np.float64)
    if fmt == "FULL_MATRIX":
        return values.reshape(n, n).copy()
    out = np.zeros((n, n))
    # triu/tril index generators enumerate row-major, matching TSPLIB order.
    if fmt == "UPPER_ROW":
        rows, cols = np.triu_indices(n, k=1)
    elif fmt == "LOWER_ROW":
        rows, cols = np.tril_indices(n, k=-1)
    elif fmt == "UPPER_DIAG_ROW":
        rows, cols = np.triu_indices(n)
    elif fmt == "LOWER_DIAG_ROW":
        rows, cols = np.tril_indices(n)
    else:
        raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}")
    out[rows, cols] = values
    out[cols, rows] = values
    return out


def _is_keyword(tokens):
    return bool(tokens) and tokens[0][:1].isalpha()


def read_document(text):
    """Tokenise ``text`` into a :class:`TsplibDocument` without interpreting it."""
    try:
        text.encode("ascii")
    except UnicodeEncodeError:
        raise ParseError("input is not ASCII") from None
    doc = TsplibDocument()
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        stripped = lines[i].strip()
        i += 1
        if not stripped:
            continue
        if stripped == "EOF":
            break
        keyword = stripped.split(":", 1)[0].strip().split()[0].upper()
        if keyword in _SECTIONS:
            if keyword == "NODE_COORD_SECTION":
                rows, i = _read_rows(lines, i, doc.dimension, keyword)
                doc.labels = [int(float(r[0])) for r in rows]
                doc.coords = [(r[1], r[2]) for r in rows]
            elif keyword == "DISPLAY_DATA_SECTION":
                rows, i = _read_rows(lines, i, doc.dimension, keyword)
                doc.display = [(r[1], r[2]) for r in rows]
            else:
                fmt = doc.header.get("EDGE_WEIGHT_FORMAT", "FULL_MATRIX").upper()
                if fmt not in EXPLICIT_FORMATS:
                    raise UnsupportedFormatError(f"unsupported EDGE_WEIGHT_FORMAT {fmt!r}")
                doc.weights, i = _read_values(lines, i, _weight_count(fmt, doc.dimension))
            continue
        if ":" not in stripped:
            raise MalformedHeaderError(f"expected 'KEY : value', got {stripped!r}", lineno)
        key, value = stripped.split(":", 1)
        key = key.strip().upper()
        if key.endswith("_SECTION"):
            raise UnsupportedFormatError(f"unsupported section {key}")
        doc.header[key] = value.strip()
    return doc


def _read_rows(lines, i, count, section):
    rows = []
    while len(rows) < count:
        if i >= len(lines):
            raise TruncatedSectionError(
                f"{section} ended after {len(rows)} of {count} rows", len(lines))
        tokens = lines[i].split()
        i += 1
        if not tokens:
            continue
        if _is_keyword(tokens):
            raise TruncatedSectionError(
                f"{section} ended after {len(rows)} of {count} rows", i)
        if len(tokens) != 3:
            raise ParseError(f"{section} row needs 3 fields, got {len(tokens)}", i)
        try:
            rows.append((tokens[0], float(tokens[1]), float(tokens[2])))
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {section}", i) from None
    return rows, i


def _read_values(lines, i, count):
    values = []
    while len(values) < count:
        if i >= len(lines) or _is_keyword(lines[i].split()):
            raise TruncatedSectionError(
                f"EDGE_WEIGHT_SECTION ended after {len(values)} of {count} values",
                min(i + 1, len(lines)))
        tokens = lines[i].split()
        i += 1
        if len(values) + len(tokens) > count:
            raise ParseError(
                f"EDGE_WEIGHT_SECTION has more than the {count} values its format declares", i)
        try:
            values.extend(float(t) for t in tokens)
        except ValueError:
            raise ParseError("non-numeric edge weight", i) from None
    return values, i


def parse_tsplib(text, rounding=RoundingMode.UNROUNDED_REAL):
    """Parse the full text of a TSPLIB instance into a :class:`TspInstance`."""
    doc = read_document(text)
    n = doc.dimension
    header = doc.header
    problem_type = header.get("TYPE", "TSP").split()[0].upper() if header.get("TYPE") else "TSP"
    if problem_type not in SUPPORTED_TYPES:
        raise UnsupportedFormatError(f"unsupported problem TYPE {problem_type!r}")
    if "EDGE_WEIGHT_TYPE" not in header:
        raise MalformedHeaderError("missing EDGE_WEIGHT_TYPE")
    kind = WeightKind.parse(header["EDGE_WEIGHT_TYPE"])
    common = dict(name=header.get("NAME", "unnamed"), dimension=n, weight_kind=kind,
                  rounding_mode=rounding, comment=header.get("COMMENT", ""),
                  problem_type=problem_type)
    if kind == WeightKind.EXPLICIT:
        if doc.weights is None:
            raise TruncatedSectionError("EXPLICIT instance without EDGE_WEIGHT_SECTION")
        fmt = header.get("EDGE_WEIGHT_FORMAT", "FULL_MATRIX").upper()
        return TspInstance(weights=expand_weights(doc.weights, fmt, n), **common)
    if doc.coords is None:
        raise TruncatedSectionError(f"{kind.value} instance without NODE_COORD_SECTION")
    return TspInstance(nodes=np.array(doc.coords), labels=doc.labels, **common)


def load_tsplib(path, rounding=RoundingMode.UNROUNDED_REAL):
    with open(path, encoding="ascii", errors="strict") as fh:
        return parse_tsplib(fh.read(), rounding=rounding)


def format_tsplib(inst):
    """Serialise ``inst`` back to TSPLIB text that :func:`parse_tsplib` reads losslessly.

    Explicit weights are always written as FULL_MATRIX; floats use ``repr``.
    """
    lines = [f"NAME : {inst.name}", f"TYPE : {inst.problem_type}"]
    if inst.comment:
        lines.append(f"COMMENT : {inst.comment}")
    lines += [f"DIMENSION : {inst.dimension}", f"EDGE_WEIGHT_TYPE : {inst.weight_kind.value}"]
    if inst.weight_kind == WeightKind.EXPLICIT:
        lines += ["EDGE_WEIGHT_FORMAT : FULL_MATRIX", "EDGE_WEIGHT_SECTION"]
        lines += [" ".join(repr(float(v)) for v in row) for row in inst.weights]
    else:
        lines.append("NODE_COORD_SECTION")
        lines += [f"{label} {float(x)!r} {float(y)!r}"
                  for label, (x, y) in zip(inst.labels, inst.nodes)]
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def corpus_dir():
    """Directory holding the bundled TSPLIB instances."""
    return resources.files("acotsp") / "data" / "tsplib"


def corpus_path(name):
    """Path of a bundled instance, e.g. ``corpus_path("berlin52")``."""
    base = corpus_dir()
    for ext in (".tsp", ".atsp"):
        candidate = base / f"{name}{ext}"
        if candidate.is_file():
            return os.fspath(candidate)
    raise FileNotFoundError(f"no bundled TSPLIB instance named {name!r}")


def corpus_names():
    return sorted(p.name.rsplit(".", 1)[0] for p in corpus_dir().iterdir()
                  if p.name.endswith((".tsp", ".atsp")))
