"""scikit-learn style wrappers around the solvers.

``X`` is either an ``(n_cities, 2)`` coordinate array or, with
``metric="precomputed"``, an ``(n, n)`` distance matrix. A fitted solver
exposes ``best_tour_`` (city indices into X), ``best_length_`` and, for the
colony, ``history_`` with the best length after every iteration.

    >>> solver = AntColonyTSP(variant="ACS", iterations=50, random_state=0)
    >>> order = solver.fit_predict(coords)
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .colony import AcoParams, run
from .distances import RoundingMode, WeightKind
from .exceptions import InvalidArgumentError
from .instance import (
    DistanceMatrix,
    TspInstance,
    build_distance_matrix,
    nearest_neighbor_tour,
    tour_length,
)
from .oracle import exact_optimum
from .validation import check_coordinates, check_distances

_METRICS = {
    "euclidean": (WeightKind.EUC_2D, RoundingMode.UNROUNDED_REAL),
    "euc_2d": (WeightKind.EUC_2D, RoundingMode.TSPLIB_INTEGER),
    "ceil_2d": (WeightKind.CEIL_2D, RoundingMode.TSPLIB_INTEGER),
    "att": (WeightKind.ATT, RoundingMode.TSPLIB_INTEGER),
    "geo": (WeightKind.GEO, RoundingMode.TSPLIB_INTEGER),
}


def distances_from_input(X, metric="euclidean"):
    """Turn estimator input into a :class:`DistanceMatrix`."""
    if isinstance(X, TspInstance):
        return build_distance_matrix(X)
    if isinstance(X, DistanceMatrix):
        return X
    if metric == "precomputed":
        return DistanceMatrix(check_distances(X))
    try:
        kind, rounding = _METRICS[metric]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown metric {metric!r}; use 'precomputed' or one of {sorted(_METRICS)}") from None
    inst = TspInstance.from_coordinates(check_coordinates(X), weight_kind=kind,
                                        rounding_mode=rounding)
    return build_distance_matrix(inst)


class _TourSolverMixin:
    """``fit_predict`` / ``score`` shared by every solver."""

    def fit_predict(self, X, y=None):
        return self.fit(X, y).best_tour_

    def predict(self, X=None):
        """The fitted tour. ``X`` is accepted for API symmetry and must match the fit size."""
        check_is_fitted(self, "best_tour_")
        if X is not None and len(X) != len(self.best_tour_):
            raise InvalidArgumentError("X does not match the fitted instance size")
        return self.best_tour_.copy()

    def score(self, X, y=None):
        """Negative length of the fitted tour on ``X`` (higher is better)."""
        check_is_fitted(self, "best_tour_")
        d = distances_from_input(X, self.metric)
        return -tour_length(self.best_tour_, d)


class AntColonyTSP(_TourSolverMixin, BaseEstimator):
    """Ant colony solver (AS, ASRank, MMAS or ACS) with an estimator interface.

    Parameters left as ``None`` take the variant's tabulated defaults.
    ``random_state`` must be an int (the 64-bit run seed) or None for 0;
    runs are bit-reproducible for a given seed.
    """

    def __init__(self, variant="ACS", iterations=100, n_ants=50, alpha=1.0, beta=1.0,
                 rho=None, tau0=0.1, xi=0.1, q0=0.9, rank_cutoff=6,
                 mmas_best="IterationBest", deposit=None, elitist_gb=False,
                 metric="euclidean", random_state=None):
        self.variant = variant
        self.iterations = iterations
        self.n_ants = n_ants
        self.alpha = alpha
        self.beta = beta
        self.rho = rho
        self.tau0 = tau0
        self.xi = xi
        self.q0 = q0
        self.rank_cutoff = rank_cutoff
        self.mmas_best = mmas_best
        self.deposit = deposit
        self.elitist_gb = elitist_gb
        self.metric = metric
        self.random_state = random_state

    def _params(self):
        seed = 0 if self.random_state is None else self.random_state
        if not isinstance(seed, (int, np.integer)):
            raise InvalidArgumentError("random_state must be an integer seed or None")
        return AcoParams(
            variant=self.variant, iterations=self.iterations, num_ants=self.n_ants,
            alpha=self.alpha, beta=self.beta, rho=self.rho, tau0=self.tau0, xi=self.xi,
            q0=self.q0, rank_cutoff=self.rank_cutoff, mmas_best=self.mmas_best,
            deposit=self.deposit, elitist_gb=self.elitist_gb, seed=int(seed))

    def fit(self, X, y=None):
        params = self._params()
        d = distances_from_input(X, self.metric)
        record = run(d, params, name=getattr(X, "name", None))
        self.params_ = params
        self.run_record_ = record
        self.best_tour_ = np.asarray(record.best_tour.order, dtype=np.intp)
        self.best_length_ = record.best_length
        self.history_ = np.asarray(record.best_length_per_iteration)
        self.n_iter_ = record.iterations
        self.n_cities_ = d.n
        return self


class NearestNeighborTSP(_TourSolverMixin, BaseEstimator):
    """Greedy nearest-neighbour baseline."""

    def __init__(self, start=0, metric="euclidean"):
        self.start = start
        self.metric = metric

    def fit(self, X, y=None):
        tour = nearest_neighbor_tour(distances_from_input(X, self.metric), self.start)
        self.best_tour_ = np.asarray(tour.order, dtype=np.intp)
        self.best_length_ = tour.length
        return self


class ExactTSP(_TourSolverMixin, BaseEstimator):
    """Exact optimum by enumeration (n <= 10) or Held-Karp (n <= 20)."""

    def __init__(self, metric="euclidean"):
        self.metric = metric

    def fit(self, X, y=None):
        result = exact_optimum(distances_from_input(X, self.metric))
        self.best_tour_ = np.asarray(result.optimal_order, dtype=np.intp)
        self.best_length_ = result.optimal_length
        self.method_ = result.method
        return self
