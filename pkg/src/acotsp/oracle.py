"""Exact optimal tours for small instances.

Two independent routes are provided so each can check the other: plain
enumeration of permutations (n <= 10) and the Held-Karp subset dynamic
program (n <= 20). The DP keeps a float64 table of ``2**(n-1) * (n-1)``
entries, about 80 MB at n = 20.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import permutations

import numpy as np

from .exceptions import SizeLimitError
from .instance import DistanceMatrix, tour_length

BRUTE_FORCE_LIMIT = 10
HELD_KARP_LIMIT = 20


class OracleMethod(str, Enum):
    ENUMERATION = "Enumeration"
    HELD_KARP = "HeldKarp"


@dataclass(frozen=True)
class OracleResult:
    optimal_length: float
    optimal_order: tuple
    method: OracleMethod


def _as_matrix(d):
    return d if isinstance(d, DistanceMatrix) else DistanceMatrix(d)


def brute_force_optimum(d):
    """Minimum tour by enumerating every cycle through city 0.

    For symmetric matrices each cycle and its reversal are the same tour, so
    only permutations whose first element is smaller than their last are
    scored, giving (n-1)!/2 candidates; asymmetric matrices score all (n-1)!.
    """
    d = _as_matrix(d)
    n = d.n
    if n > BRUTE_FORCE_LIMIT:
        raise SizeLimitError(f"enumeration is limited to n <= {BRUTE_FORCE_LIMIT}, got n = {n}")
    perms = np.array(list(permutations(range(1, n))), dtype=np.intp)
    if d.symmetric:
        perms = perms[perms[:, 0] < perms[:, -1]]
    values = d.values
    lengths = values[0, perms[:, 0]] + values[perms[:, -1], 0]
    for k in range(n - 2):
        lengths = lengths + values[perms[:, k], perms[:, k + 1]]
    best = int(np.argmin(lengths))
    order = (0,) + tuple(int(c) for c in perms[best])
    return OracleResult(tour_length(order, d), order, OracleMethod.ENUMERATION)


def held_karp_optimum(d):
    """Exact optimum via the O(n^2 2^n) subset dynamic program.

    ``cost[mask, j]`` is the cheapest path that leaves city 0, visits exactly
    the cities in ``mask`` (bit j-1 stands for city j) and ends at city j.
    Masks are processed one popcount layer at a time so each layer is a
    handful of vectorised operations.
    """
    d = _as_matrix(d)
    n = d.n
    if n > HELD_KARP_LIMIT:
        raise SizeLimitError(f"Held-Karp is limited to n <= {HELD_KARP_LIMIT}, got n = {n}")
    values = d.values
    k = n - 1
    full = 1 << k
    cost = np.full((full, k), np.inf)
    parent = np.full((full, k), -1, dtype=np.int8)
    inner = values[1:, 1:]
    for j in range(k):
        cost[1 << j, j] = values[0, j + 1]

    masks = np.arange(full)
    popcount = np.zeros(full, dtype=np.int8)
    for j in range(k):
        popcount += ((masks >> j) & 1).astype(np.int8)

    for size in range(2, k + 1):
        layer = masks[popcount == size]
        for j in range(k):
            sel = layer[(layer >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            cand = cost[prev] + inner[:, j]
            best = np.argmin(cand, axis=1)
            cost[sel, j] = cand[np.arange(len(sel)), best]
            parent[sel, j] = best

    closing = cost[full - 1] + values[1:, 0]
    last = int(np.argmin(closing))
    order = []
    mask = full - 1
    j = last
    while j >= 0:
        order.append(j + 1)
        prev_j = int(parent[mask, j])
        mask ^= 1 << j
        j = prev_j if mask else -1
    order = (0,) + tuple(reversed(order))
    return OracleResult(tour_length(order, d), order, OracleMethod.HELD_KARP)


def exact_optimum(d):
    """Enumeration up to n = 10, Held-Karp beyond."""
    d = _as_matrix(d)
    if d.n <= BRUTE_FORCE_LIMIT:
        return brute_force_optimum(d)
    return held_karp_optimum(d)
