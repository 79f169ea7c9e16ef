"""Ant colony engine: tour construction and the four pheromone update rules.

Pheromone matrices are plain ``(n, n)`` float64 arrays and every update
function modifies its ``tau`` argument in place. When ``symmetric`` is true
deposits and local updates are mirrored so ``tau[i, j] == tau[j, i]`` holds
throughout a run.

Randomness comes from a single :class:`numpy.random.Generator` backed by
PCG64 and seeded with the run seed. Each iteration draws, in this order:
``m`` start cities, then per construction step the ACS exploitation draws
(one per ant) followed by one roulette draw per ant that samples
proportionally.
"""

import time
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .exceptions import InvalidArgumentError, InvariantViolationError
from .instance import (
    DistanceMatrix,
    Tour,
    TspInstance,
    build_distance_matrix,
    nearest_neighbor_tour,
)
from .records import RunRecord, pheromone_footprint
from .validation import check_positive_int, check_real

ZERO_DISTANCE_EPS = 1e-10
SEED_LIMIT = 2**64


class Variant(str, Enum):
    AS = "AS"
    ASRANK = "ASRank"
    MMAS = "MMAS"
    ACS = "ACS"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value.lower() == str(value).strip().lower():
                return member
        raise InvalidArgumentError(
            f"unknown variant {value!r}; choose from {', '.join(m.value for m in cls)}")


class MmasBest(str, Enum):
    ITERATION_BEST = "IterationBest"
    GLOBAL_BEST = "GlobalBest"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        if key in ("iterationbest", "iteration", "ib"):
            return cls.ITERATION_BEST
        if key in ("globalbest", "global", "gb"):
            return cls.GLOBAL_BEST
        raise InvalidArgumentError(f"unknown MMAS depositing ant {value!r}")


# Evaporation rate per variant; all other
# table entries are shared by the four variants.
DEFAULT_RHO = {Variant.AS: 0.5, Variant.ASRANK: 0.5, Variant.MMAS: 0.1, Variant.ACS: 0.1}


@dataclass(frozen=True)
class AcoParams:
    """Configuration of one colony run.

    ``rho=None`` selects the variant's tabulated evaporation rate.
    ``deposit=None`` means 1 for AS, ASRank and MMAS; for ACS it resolves per
    instance to ``tau0 * n * L_nn`` (``L_nn``: nearest-neighbour tour from
    city 0), so that ``tau0`` sits at the classic ``deposit / (n * L_nn)``
    level and the global rule raises trails on the best tour instead of
    lowering them toward a tiny ``1 / L_best``. ``xi`` and
    ``q0`` only matter for ACS, ``rank_cutoff`` and ``elitist_gb`` for ASRank,
    ``mmas_best`` for MMAS; they are validated only for their own variant.
    """

    variant: Variant = Variant.AS
    iterations: int = 100
    num_ants: int = 50
    alpha: float = 1.0
    beta: float = 1.0
    rho: float = None
    tau0: float = 0.1
    xi: float = 0.1
    q0: float = 0.9
    rank_cutoff: int = 6
    mmas_best: MmasBest = MmasBest.ITERATION_BEST
    deposit: float = None
    elitist_gb: bool = False
    seed: int = 0

    def __post_init__(self):
        variant = Variant.parse(self.variant)
        set_ = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        set_("variant", variant)
        set_("iterations", check_positive_int(self.iterations, "iterations"))
        set_("num_ants", check_positive_int(self.num_ants, "num_ants"))
        set_("alpha", check_real(self.alpha, "alpha", low=0.0))
        set_("beta", check_real(self.beta, "beta", low=0.0))
        rho = DEFAULT_RHO[variant] if self.rho is None else self.rho
        set_("rho", check_real(rho, "rho", 0.0, 1.0, low_open=True, high_open=True))
        set_("tau0", check_real(self.tau0, "tau0", low=0.0, low_open=True))
        if self.deposit is None and variant != Variant.ACS:
            set_("deposit", 1.0)
        if self.deposit is not None:
            set_("deposit", check_real(self.deposit, "deposit", low=0.0, low_open=True))
        set_("mmas_best", MmasBest.parse(self.mmas_best))
        set_("elitist_gb", bool(self.elitist_gb))
        seed = check_positive_int(self.seed, "seed", minimum=0)
        if seed >= SEED_LIMIT:
            raise InvalidArgumentError(f"seed must fit in 64 bits, got {seed}")
        set_("seed", seed)
        if variant == Variant.ACS:
            set_("xi", check_real(self.xi, "xi", 0.0, 1.0, low_open=True, high_open=True))
            set_("q0", check_real(self.q0, "q0", 0.0, 1.0))
        if variant == Variant.ASRANK:
            w = check_positive_int(self.rank_cutoff, "rank_cutoff")
            if w > self.num_ants:
                raise InvalidArgumentError(
                    f"rank_cutoff ({w}) cannot exceed the number of ants ({self.num_ants})")
            set_("rank_cutoff", w)

    @classmethod
    def for_variant(cls, variant, **overrides):
        """Parameters for ``variant`` with tabulated defaults; ``None`` overrides are ignored."""
        return cls(variant=variant, **{k: v for k, v in overrides.items() if v is not None})

    def resolve_deposit(self, d):
        """Concrete deposit constant for distance matrix ``d``."""
        if self.deposit is not None:
            return self.deposit
        return self.tau0 * d.n * nearest_neighbor_tour(d, 0).length

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def as_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["variant"] = self.variant.value
        out["mmas_best"] = self.mmas_best.value
        return out


def make_rng(seed):
    """The engine's generator: PCG64 seeded with a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(seed))


def heuristic_value(distance):
    """Inverse distance; coincident cities use ``1 / 1e-10`` instead of dividing by zero."""
    d = np.asarray(distance, dtype=np.float64)
    if (d < 0).any():
        raise InvalidArgumentError("distances must be non-negative")
    out = 1.0 / np.where(d > 0, d, ZERO_DISTANCE_EPS)
    return float(out) if out.ndim == 0 else out


def _values(d):
    return d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=np.float64)


def transition_weights(current, feasible, tau, d, alpha, beta):
    """``tau[current, j]**alpha * eta[current, j]**beta`` for each j in ``feasible``."""
    feasible = np.asarray(feasible, dtype=np.intp)
    if feasible.size == 0:
        raise InvariantViolationError("no feasible city left while building a tour")
    if (feasible == current).any():
        raise InvariantViolationError("current city listed as feasible")
    eta = heuristic_value(_values(d)[current, feasible])
    return np.power(tau[current, feasible], alpha) * np.power(eta, beta)


def select_next_proportional(weights, rng, cities=None):
    """Roulette-wheel choice using exactly one uniform draw.

    Returns a position in ``weights`` or, when ``cities`` is given, the
    corresponding entry of ``cities``.
    """
    weights = np.asarray(weights, dtype=np.float64)
    cum = np.cumsum(weights)
    k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    k = min(k, len(weights) - 1)
    while weights[k] <= 0:
        k -= 1
    return k if cities is None else int(cities[k])


def select_next_acs(current, feasible, tau, d, alpha, beta, q0, rng):
    """Pseudo-random-proportional rule.

    With probability ``q0`` take the heaviest edge (lowest city index on
    ties); otherwise fall back to the roulette wheel.
    """
    feasible = np.sort(np.asarray(feasible, dtype=np.intp))
    weights = transition_weights(current, feasible, tau, d, alpha, beta)
    if rng.random() < q0:
        return int(feasible[np.argmax(weights)])
    return select_next_proportional(weights, rng, feasible)


def acs_local_update(tau_ij, xi, tau0):
    """Pull a trail value toward ``tau0``: ``(1 - xi) * tau_ij + xi * tau0``."""
    return (1.0 - xi) * tau_ij + xi * tau0


def construct_tour(ant_start, params, tau, d, rng):
    """Build one ant's tour city by city (ACS trails are updated as edges are used)."""
    values = _values(d)
    n = values.shape[0]
    symmetric = d.symmetric if isinstance(d, DistanceMatrix) else bool(np.array_equal(values, values.T))
    unvisited = np.ones(n, dtype=bool)
    unvisited[ant_start] = False
    order = [int(ant_start)]
    current = int(ant_start)
    acs = params.variant == Variant.ACS

    def local(i, j):
        tau[i, j] = acs_local_update(tau[i, j], params.xi, params.tau0)
        if symmetric:
            tau[j, i] = tau[i, j]

    for _ in range(n - 1):
        feasible = np.flatnonzero(unvisited)
        if acs:
            nxt = select_next_acs(current, feasible, tau, d, params.alpha, params.beta,
                                  params.q0, rng)
            local(current, nxt)
        else:
            weights = transition_weights(current, feasible, tau, d, params.alpha, params.beta)
            nxt = select_next_proportional(weights, rng, feasible)
        unvisited[nxt] = False
        order.append(nxt)
        current = nxt
    if acs:
        local(current, order[0])
    return Tour.from_order(order, d)


def _local_update_edges(tau, src, dst, n, xi, tau0, symmetric):
    """Apply the ACS local rule once per traversal of each edge in (src, dst)."""
    if symmetric:
        lo, hi = np.minimum(src, dst), np.maximum(src, dst)
        keys = lo * n + hi
    else:
        keys = src * n + dst
    keys, counts = np.unique(keys, return_counts=True)
    flat = tau.reshape(-1)
    for c in range(1, int(counts.max()) + 1):
        k = keys[counts >= c]
        flat[k] = acs_local_update(flat[k], xi, tau0)
        if symmetric:
            i, j = np.divmod(k, n)
            flat[j * n + i] = flat[k]


def construct_colony(starts, params, tau, d, rng, eta_beta=None):
    """Build one tour per start city, all ants advancing one step at a time.

    Returns an ``(m, n)`` integer array of city orders. With a single ant
    and the same generator state this makes exactly the choices that
    :func:`construct_tour` makes.
    """
    values = _values(d)
    n = values.shape[0]
    symmetric = d.symmetric if isinstance(d, DistanceMatrix) else bool(np.array_equal(values, values.T))
    starts = np.asarray(starts, dtype=np.intp)
    m = starts.shape[0]
    if eta_beta is None:
        eta_beta = np.power(heuristic_value(values), params.beta)
    acs = params.variant == Variant.ACS
    choice = None if acs else np.power(tau, params.alpha) * eta_beta

    orders = np.empty((m, n), dtype=np.intp)
    orders[:, 0] = starts
    visited = np.zeros((m, n), dtype=bool)
    ants = np.arange(m)
    visited[ants, starts] = True
    current = starts.copy()

    for step in range(1, n):
        if acs:
            weights = np.power(tau[current], params.alpha) * eta_beta[current]
        else:
            weights = choice[current]
        weights[visited] = 0.0
        if acs:
            explore = rng.random(m) >= params.q0
            nxt = np.argmax(weights, axis=1)
            if explore.any():
                nxt[explore] = _roulette(weights[explore], rng)
        else:
            nxt = _roulette(weights, rng)
        if acs:
            _local_update_edges(tau, current, nxt, n, params.xi, params.tau0, symmetric)
        orders[:, step] = nxt
        visited[ants, nxt] = True
        current = nxt
    if acs:
        _local_update_edges(tau, current, starts, n, params.xi, params.tau0, symmetric)
    return orders


def _roulette(weights, rng):
    m, n = weights.shape
    cum = np.cumsum(weights, axis=1)
    total = cum[:, -1]
    thr = rng.random(m) * total
    nxt = (cum <= thr[:, None]).sum(axis=1)
    # Guard the u*total == total rounding case: step back to the last positive weight.
    last = n - 1 - np.argmax(weights[:, ::-1] > 0, axis=1)
    nxt = np.minimum(nxt, last)
    dead = ~(total > 0) | ~np.isfinite(total)
    if dead.any():
        raise InvariantViolationError("transition weights vanished for every feasible city")
    return nxt


def _edge_arrays(orders):
    orders = np.atleast_2d(np.asarray(orders, dtype=np.intp))
    return orders, np.roll(orders, -1, axis=1)


def _deposit(tau, orders, amounts, symmetric):
    src, dst = _edge_arrays(orders)
    amounts = np.broadcast_to(np.asarray(amounts, dtype=np.float64)[:, None], src.shape)
    delta = np.zeros_like(tau)
    np.add.at(delta, (src.ravel(), dst.ravel()), amounts.ravel())
    if symmetric:
        # a + b == b + a exactly, so both orientations receive identical sums
        delta = delta + delta.T
    tau += delta


def _evaporate(tau, rho):
    tau *= 1.0 - rho
    # Keep trails strictly positive even after very long runs.
    np.maximum(tau, np.finfo(np.float64).tiny, out=tau)


def _tour_arrays(tours):
    tours = list(tours)
    if not tours:
        return np.empty((0, 0), dtype=np.intp), np.empty(0)
    return (np.array([t.order for t in tours], dtype=np.intp),
            np.array([t.length for t in tours], dtype=np.float64))


def as_update(tau, tours, rho, deposit=1.0, symmetric=True):
    """Evaporate every trail, then let each ant add ``deposit / length`` to its edges."""
    _evaporate(tau, rho)
    orders, lengths = _tour_arrays(tours)
    if len(lengths):
        _deposit(tau, orders, deposit / lengths, symmetric)


def asrank_update(tau, ranked_tours, w, rho, deposit=1.0, symmetric=True, best_tour=None):
    """Rank-weighted update over the ``w`` best tours (best first).

    The ant of rank r (1-based) deposits ``(w - r) * deposit / length``, so the
    rank-w ant contributes nothing. Passing ``best_tour`` adds the elitist
    term ``w * deposit / best_length`` on that tour's edges.
    """
    ranked = list(ranked_tours)
    lengths = [t.length for t in ranked]
    if any(a > b for a, b in zip(lengths, lengths[1:])):
        raise InvalidArgumentError("ranked tours must be sorted by ascending length")
    _evaporate(tau, rho)
    ranked = ranked[:w]
    if ranked:
        orders, lengths = _tour_arrays(ranked)
        weights = w - np.arange(1, len(ranked) + 1, dtype=np.float64)
        _deposit(tau, orders, weights * deposit / lengths, symmetric)
    if best_tour is not None:
        _deposit(tau, [best_tour.order], np.array([w * deposit / best_tour.length]), symmetric)


def mmas_trail_limits(best_length, rho, n, deposit=1.0):
    """``tau_max = deposit / (rho * best_length)`` and ``tau_min = tau_max / (2n)``."""
    if best_length <= 0:
        raise InvalidArgumentError("best_length must be positive")
    tau_max = deposit / (rho * best_length)
    return tau_max / (2 * n), tau_max


def mmas_update(tau, best_tour, rho, deposit, tau_min, tau_max, symmetric=True):
    """Evaporate, deposit on ``best_tour`` only, then clamp into [tau_min, tau_max]."""
    if tau_min > tau_max:
        raise InvalidArgumentError("tau_min must not exceed tau_max")
    tau *= 1.0 - rho
    _deposit(tau, [best_tour.order], np.array([deposit / best_tour.length]), symmetric)
    np.clip(tau, tau_min, tau_max, out=tau)


def acs_global_update(tau, best_tour, rho, deposit=1.0, symmetric=True):
    """Mix ``deposit / best_length`` into the best tour's edges; no other entry changes."""
    src, dst = _edge_arrays([best_tour.order])
    src, dst = src.ravel(), dst.ravel()
    target = deposit / best_tour.length
    tau[src, dst] = (1.0 - rho) * tau[src, dst] + rho * target
    if symmetric:
        tau[dst, src] = tau[src, dst]


class AntColony:
    """Mutable state of one run: pheromone, generator and best-so-far tour.

    ``step()`` performs one iteration. Tests and tools can also call
    ``construct()`` and ``update()`` separately to inspect the trails between
    the two phases.
    """

    def __init__(self, d, params, rng=None):
        self.d = d if isinstance(d, DistanceMatrix) else DistanceMatrix(d)
        self.params = params
        self.deposit = params.resolve_deposit(self.d)
        self.rng = make_rng(params.seed) if rng is None else rng
        self.n = self.d.n
        self.symmetric = self.d.symmetric
        self.tau = np.full((self.n, self.n), params.tau0)
        eta_beta = np.power(heuristic_value(self.d.values), params.beta)
        np.fill_diagonal(eta_beta, 0.0)
        self.eta_beta = eta_beta
        self.best_tour = None
        self.tau_min = None
        self.tau_max = None
        self.history = []
        self.iteration = 0

    @property
    def best_length(self):
        return np.inf if self.best_tour is None else self.best_tour.length

    def construct(self):
        """Let every ant build a tour; returns ``(orders, lengths)``."""
        p = self.params
        starts = self.rng.integers(0, self.n, size=p.num_ants)
        orders = construct_colony(starts, p, self.tau, self.d, self.rng, self.eta_beta)
        values = self.d.values
        lengths = values[orders, np.roll(orders, -1, axis=1)].sum(axis=1)
        return orders, lengths

    def update(self, orders, lengths):
        """Track the best tour and apply the variant's pheromone update."""
        p = self.params
        rank = np.argsort(lengths, kind="stable")
        iteration_best = Tour.from_order(orders[rank[0]], self.d).canonical(self.d)
        improved = iteration_best.length < self.best_length
        if improved:
            self.best_tour = iteration_best
        sym = self.symmetric

        if p.variant == Variant.AS:
            _evaporate(self.tau, p.rho)
            _deposit(self.tau, orders, self.deposit / lengths, sym)
        elif p.variant == Variant.ASRANK:
            w = p.rank_cutoff
            top = rank[:w]
            ranked = [Tour(tuple(int(c) for c in orders[k]), float(lengths[k])) for k in top]
            asrank_update(self.tau, ranked, w, p.rho, self.deposit, sym,
                          best_tour=self.best_tour if p.elitist_gb else None)
        elif p.variant == Variant.MMAS:
            if improved:
                self.tau_min, self.tau_max = mmas_trail_limits(
                    self.best_tour.length, p.rho, self.n, self.deposit)
            source = iteration_best if p.mmas_best == MmasBest.ITERATION_BEST else self.best_tour
            mmas_update(self.tau, source, p.rho, self.deposit, self.tau_min, self.tau_max, sym)
        else:
            acs_global_update(self.tau, self.best_tour, p.rho, self.deposit, sym)

        self.iteration += 1
        self.history.append(self.best_tour.length)
        return iteration_best

    def step(self):
        return self.update(*self.construct())


def run(instance, params, callback=None, name=None, run_index=0):
    """Run ``params.iterations`` colony iterations and return a :class:`RunRecord`.

    ``instance`` may be a :class:`TspInstance` or a :class:`DistanceMatrix`.
    ``callback(colony)`` is invoked after every iteration.
    """
    if isinstance(instance, TspInstance):
        d = build_distance_matrix(instance)
        name = instance.name if name is None else name
    elif isinstance(instance, DistanceMatrix):
        d = instance
    else:
        d = DistanceMatrix(instance)
    start = time.perf_counter()
    colony = AntColony(d, params)
    for _ in range(params.iterations):
        colony.step()
        if callback is not None:
            callback(colony)
    wall_ms = (time.perf_counter() - start) * 1000.0
    history = tuple(float(x) for x in colony.history)
    if any(b > a for a, b in zip(history, history[1:])):
        raise InvariantViolationError("best-so-far series increased")
    return RunRecord(
        instance=name or "unnamed",
        variant=params.variant.value,
        seed=params.seed,
        best_tour=colony.best_tour,
        best_length_per_iteration=history,
        wall_time_ms=wall_ms,
        pheromone_bytes=pheromone_footprint(d.n),
        dimension=d.n,
        run_index=run_index,
    )
