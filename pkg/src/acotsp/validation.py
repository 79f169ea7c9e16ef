"""Input validation helpers used by the estimators and the engine."""

import numbers

import numpy as np
from sklearn.utils import check_array

from .exceptions import InvalidArgumentError

MIN_CITIES = 3


def check_coordinates(X):
    """Validate an ``(n_cities, 2)`` coordinate array and return it as float64."""
    try:
        X = check_array(X, dtype=np.float64, ensure_min_samples=MIN_CITIES)
    except ValueError as exc:
        raise InvalidArgumentError(str(exc)) from exc
    if X.shape[1] != 2:
        raise InvalidArgumentError(
            f"expected 2 coordinate columns, got {X.shape[1]}")
    return X


def check_distances(D):
    """Validate a square, finite, non-negative distance matrix.

    The diagonal is ignored on input and zeroed on output.
    """
    try:
        D = check_array(D, dtype=np.float64, ensure_min_samples=MIN_CITIES,
                        ensure_min_features=MIN_CITIES, copy=True)
    except ValueError as exc:
        raise InvalidArgumentError(str(exc)) from exc
    if D.shape[0] != D.shape[1]:
        raise InvalidArgumentError(f"distance matrix must be square, got {D.shape}")
    np.fill_diagonal(D, 0.0)
    if (D < 0).any():
        raise InvalidArgumentError("distances must be non-negative")
    return D


def check_order(order, n):
    """Return ``order`` as an int array after checking it is a permutation of 0..n-1."""
    order = np.asarray(order)
    if order.ndim != 1 or order.shape[0] != n:
        raise InvalidArgumentError(
            f"tour has {order.size} entries, distance matrix has {n} cities")
    if order.size and not np.issubdtype(order.dtype, np.integer):
        raise InvalidArgumentError("tour entries must be integers")
    order = order.astype(np.intp, copy=False)
    if not np.array_equal(np.sort(order), np.arange(n)):
        raise InvalidArgumentError("tour is not a permutation of the city indices")
    return order


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidArgumentError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidArgumentError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_real(value, name, low=None, high=None, low_open=False, high_open=False):
    """Check ``value`` is a finite real inside the given (optionally open) bounds."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidArgumentError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value}")
    if low is not None and (value < low or (low_open and value == low)):
        raise InvalidArgumentError(f"{name}={value} is below its lower bound {low}")
    if high is not None and (value > high or (high_open and value == high)):
        raise InvalidArgumentError(f"{name}={value} is above its upper bound {high}")
    return value
