"""Core TSP data types: instances, dense distance matrices and tours."""

from dataclasses import dataclass, field, replace

import numpy as np

from .distances import MATRIX_FUNCTIONS, RoundingMode, WeightKind
from .exceptions import InvalidArgumentError, UnsupportedFormatError
from .validation import MIN_CITIES, check_order


def _frozen(array, dtype=np.float64):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TspInstance:
    """A set of cities described either by 2D coordinates or by explicit weights.

    ``labels`` keeps the node numbers used in the source file so that output
    can refer to cities by their original names; internally cities are
    indexed 0..n-1.
    """

    name: str
    dimension: int
    weight_kind: WeightKind
    nodes: np.ndarray = None
    weights: np.ndarray = None
    rounding_mode: RoundingMode = RoundingMode.UNROUNDED_REAL
    labels: tuple = None
    comment: str = ""
    problem_type: str = "TSP"

    def __post_init__(self):
        kind = WeightKind(self.weight_kind)
        object.__setattr__(self, "weight_kind", kind)
        object.__setattr__(self, "rounding_mode", RoundingMode.parse(self.rounding_mode))
        n = int(self.dimension)
        object.__setattr__(self, "dimension", n)
        if n < MIN_CITIES:
            raise InvalidArgumentError(f"dimension must be >= {MIN_CITIES}, got {n}")
        if (self.nodes is None) == (self.weights is None):
            raise InvalidArgumentError("exactly one of nodes / weights must be given")
        if self.nodes is not None:
            if kind == WeightKind.EXPLICIT:
                raise InvalidArgumentError("EXPLICIT instances carry weights, not nodes")
            nodes = _frozen(self.nodes)
            if nodes.shape != (n, 2):
                raise InvalidArgumentError(
                    f"expected {n} coordinate pairs, got array of shape {nodes.shape}")
            if not np.isfinite(nodes).all():
                raise InvalidArgumentError("coordinates must be finite")
            object.__setattr__(self, "nodes", nodes)
        else:
            if kind != WeightKind.EXPLICIT:
                raise InvalidArgumentError(f"{kind.value} instances need coordinates")
            weights = _frozen(self.weights)
            if weights.shape != (n, n):
                raise InvalidArgumentError(
                    f"expected a {n}x{n} weight matrix, got shape {weights.shape}")
            off = ~np.eye(n, dtype=bool)
            if not np.isfinite(weights[off]).all() or (weights[off] < 0).any():
                raise InvalidArgumentError("explicit weights must be finite and non-negative")
            object.__setattr__(self, "weights", weights)
        labels = tuple(range(1, n + 1)) if self.labels is None else tuple(int(x) for x in self.labels)
        if len(labels) != n or len(set(labels)) != n:
            raise InvalidArgumentError("labels must be n distinct integers")
        object.__setattr__(self, "labels", labels)

    def __eq__(self, other):
        if not isinstance(other, TspInstance):
            return NotImplemented
        return (
            self.name == other.name
            and self.dimension == other.dimension
            and self.weight_kind == other.weight_kind
            and self.rounding_mode == other.rounding_mode
            and self.labels == other.labels
            and self.comment == other.comment
            and self.problem_type == other.problem_type
            and _array_eq(self.nodes, other.nodes)
            and _array_eq(self.weights, other.weights)
        )

    __hash__ = None

    def with_rounding(self, mode):
        return replace(self, rounding_mode=RoundingMode.parse(mode))

    @classmethod
    def from_coordinates(cls, coords, name="unnamed", weight_kind=WeightKind.EUC_2D,
                         rounding_mode=RoundingMode.UNROUNDED_REAL):
        coords = np.asarray(coords, dtype=np.float64)
        return cls(name=name, dimension=len(coords), weight_kind=weight_kind,
                   nodes=coords, rounding_mode=rounding_mode)

    @classmethod
    def from_matrix(cls, weights, name="unnamed"):
        weights = np.asarray(weights, dtype=np.float64)
        return cls(name=name, dimension=len(weights), weight_kind=WeightKind.EXPLICIT,
                   weights=weights)


def _array_eq(a, b):
    if a is None or b is None:
        return a is None and b is None
    return a.shape == b.shape and np.array_equal(a, b)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Dense ``n x n`` distances with a zero diagonal."""

    values: np.ndarray
    symmetric: bool = field(default=None)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InvalidArgumentError(f"distance matrix must be square, got {values.shape}")
        if not np.isfinite(values).all() or (values < 0).any():
            raise InvalidArgumentError("distances must be finite and non-negative")
        if (np.diag(values) != 0).any():
            raise InvalidArgumentError("distance matrix diagonal must be zero")
        is_symmetric = bool(np.array_equal(values, values.T))
        if self.symmetric is None:
            object.__setattr__(self, "symmetric", is_symmetric)
        elif self.symmetric and not is_symmetric:
            raise InvalidArgumentError("matrix flagged symmetric but d[i][j] != d[j][i]")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.values.shape[0]

    def __getitem__(self, idx):
        return self.values[idx]

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.symmetric == other.symmetric and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True)
class Tour:
    """A Hamiltonian cycle: city order plus its total closed length."""

    order: tuple
    length: float

    @classmethod
    def from_order(cls, order, d):
        order = check_order(order, d.n)
        return cls(order=tuple(int(i) for i in order), length=tour_length(order, d))

    def __len__(self):
        return len(self.order)

    def canonical(self, d):
        """The same cycle starting at city 0, reversed if needed so that on
        symmetric matrices ``order[1] < order[-1]``; length is recomputed.

        Equal cycles then have bit-identical lengths regardless of the
        rotation they were found in.
        """
        return Tour.from_order(canonical_order(self.order, d.symmetric), d)

    def edges(self):
        """Directed edges of the cycle, including the closing edge."""
        order = np.asarray(self.order, dtype=np.intp)
        return order, np.roll(order, -1)


def canonical_order(order, symmetric=True):
    order = [int(c) for c in order]
    k = order.index(0)
    order = order[k:] + order[:k]
    if symmetric and len(order) > 2 and order[1] > order[-1]:
        order = [order[0]] + order[:0:-1]
    return tuple(order)


def tour_length(order, d):
    """Total length of the closed tour ``order`` under distances ``d``."""
    values = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=np.float64)
    order = check_order(order, values.shape[0])
    return float(values[order, np.roll(order, -1)].sum())


def build_distance_matrix(inst):
    """Compute the dense distance matrix of ``inst`` under its rounding mode."""
    kind = inst.weight_kind
    if kind == WeightKind.EXPLICIT:
        values = np.array(inst.weights, dtype=np.float64)
        np.fill_diagonal(values, 0.0)
        return DistanceMatrix(values)
    try:
        fn = MATRIX_FUNCTIONS[kind]
    except KeyError:
        raise UnsupportedFormatError(f"unsupported weight kind {kind!r}") from None
    values = fn(inst.nodes, inst.rounding_mode)
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(values, symmetric=True)


def nearest_neighbor_tour(d, start=0):
    """Greedy tour from ``start``; ties go to the lowest city index."""
    n = d.n
    if not 0 <= start < n:
        raise InvalidArgumentError(f"start city {start} out of range for {n} cities")
    values = d.values
    visited = np.zeros(n, dtype=bool)
    order = [start]
    visited[start] = True
    current = start
    for _ in range(n - 1):
        row = np.where(visited, np.inf, values[current])
        current = int(np.argmin(row))
        visited[current] = True
        order.append(current)
    return Tour.from_order(order, d)
