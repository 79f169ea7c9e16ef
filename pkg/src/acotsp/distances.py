"""TSPLIB edge-weight functions.

Each kind has a scalar form taking two coordinate pairs and a vectorised
``*_matrix`` form over an ``(n, 2)`` array. Both follow the arithmetic of
the TSPLIB reference code; under :attr:`RoundingMode.UNROUNDED_REAL` the
final integer conversion is skipped and the raw real value is returned.
"""

import math
from enum import Enum

import numpy as np

from .exceptions import InvalidArgumentError, UnsupportedFormatError

GEO_PI = 3.141592
GEO_EARTH_RADIUS = 6378.388


class WeightKind(str, Enum):
    EUC_2D = "EUC_2D"
    CEIL_2D = "CEIL_2D"
    ATT = "ATT"
    GEO = "GEO"
    EXPLICIT = "EXPLICIT"

    @classmethod
    def parse(cls, text):
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise UnsupportedFormatError(
                f"unsupported EDGE_WEIGHT_TYPE {text.strip()!r}") from None


class RoundingMode(str, Enum):
    TSPLIB_INTEGER = "tsplib"
    UNROUNDED_REAL = "real"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"tsplib": cls.TSPLIB_INTEGER, "tsplibinteger": cls.TSPLIB_INTEGER,
                   "integer": cls.TSPLIB_INTEGER, "real": cls.UNROUNDED_REAL,
                   "unroundedreal": cls.UNROUNDED_REAL, "unrounded": cls.UNROUNDED_REAL}
        try:
            return aliases[key]
        except KeyError:
            raise InvalidArgumentError(f"unknown rounding mode {value!r}") from None


def nint(x):
    """Nearest integer, halves rounded away from zero (C ``(int)(x + 0.5)`` for x >= 0)."""
    return math.copysign(math.floor(abs(x) + 0.5), x)


def _nint_array(x):
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def euc2d_distance(p, q, mode=RoundingMode.TSPLIB_INTEGER):
    r = math.hypot(p[0] - q[0], p[1] - q[1])
    return float(nint(r)) if mode == RoundingMode.TSPLIB_INTEGER else r


def ceil2d_distance(p, q, mode=RoundingMode.TSPLIB_INTEGER):
    r = math.hypot(p[0] - q[0], p[1] - q[1])
    return float(math.ceil(r)) if mode == RoundingMode.TSPLIB_INTEGER else r


def att_distance(p, q, mode=RoundingMode.TSPLIB_INTEGER):
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    r = math.sqrt((dx * dx + dy * dy) / 10.0)
    if mode != RoundingMode.TSPLIB_INTEGER:
        return r
    t = nint(r)
    return float(t + 1 if t < r else t)


def geo_radians(x):
    """Convert a TSPLIB ``DDD.MM`` (degrees.minutes) value to radians."""
    deg = math.trunc(x)
    minutes = x - deg
    return GEO_PI * (deg + 5.0 * minutes / 3.0) / 180.0


def geo_distance(p, q, mode=RoundingMode.TSPLIB_INTEGER):
    """Great-circle distance in km between (latitude, longitude) points."""
    if p[0] == q[0] and p[1] == q[1]:
        return 0.0
    lat_p, lon_p = geo_radians(p[0]), geo_radians(p[1])
    lat_q, lon_q = geo_radians(q[0]), geo_radians(q[1])
    q1 = math.cos(lon_p - lon_q)
    q2 = math.cos(lat_p - lat_q)
    q3 = math.cos(lat_p + lat_q)
    arg = 0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)
    r = GEO_EARTH_RADIUS * math.acos(min(1.0, max(-1.0, arg)))
    if mode == RoundingMode.TSPLIB_INTEGER:
        return float(int(r + 1.0))
    return r


def _deltas(nodes):
    nodes = np.asarray(nodes, dtype=np.float64)
    dx = nodes[:, 0, None] - nodes[None, :, 0]
    dy = nodes[:, 1, None] - nodes[None, :, 1]
    return dx, dy


def euc2d_matrix(nodes, mode=RoundingMode.TSPLIB_INTEGER):
    r = np.hypot(*_deltas(nodes))
    return _nint_array(r) if mode == RoundingMode.TSPLIB_INTEGER else r


def ceil2d_matrix(nodes, mode=RoundingMode.TSPLIB_INTEGER):
    r = np.hypot(*_deltas(nodes))
    return np.ceil(r) if mode == RoundingMode.TSPLIB_INTEGER else r


def att_matrix(nodes, mode=RoundingMode.TSPLIB_INTEGER):
    dx, dy = _deltas(nodes)
    r = np.sqrt((dx * dx + dy * dy) / 10.0)
    if mode != RoundingMode.TSPLIB_INTEGER:
        return r
    t = _nint_array(r)
    return np.where(t < r, t + 1.0, t)


def geo_matrix(nodes, mode=RoundingMode.TSPLIB_INTEGER):
    nodes = np.asarray(nodes, dtype=np.float64)
    deg = np.trunc(nodes)
    rad = GEO_PI * (deg + 5.0 * (nodes - deg) / 3.0) / 180.0
    lat, lon = rad[:, 0], rad[:, 1]
    q1 = np.cos(lon[:, None] - lon[None, :])
    q2 = np.cos(lat[:, None] - lat[None, :])
    q3 = np.cos(lat[:, None] + lat[None, :])
    arg = np.clip(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3), -1.0, 1.0)
    r = GEO_EARTH_RADIUS * np.arccos(arg)
    if mode == RoundingMode.TSPLIB_INTEGER:
        r = np.trunc(r + 1.0)
    same = (nodes[:, None, 0] == nodes[None, :, 0]) & (nodes[:, None, 1] == nodes[None, :, 1])
    r[same] = 0.0
    return r


SCALAR_FUNCTIONS = {
    WeightKind.EUC_2D: euc2d_distance,
    WeightKind.CEIL_2D: ceil2d_distance,
    WeightKind.ATT: att_distance,
    WeightKind.GEO: geo_distance,
}

MATRIX_FUNCTIONS = {
    WeightKind.EUC_2D: euc2d_matrix,
    WeightKind.CEIL_2D: ceil2d_matrix,
    WeightKind.ATT: att_matrix,
    WeightKind.GEO: geo_matrix,
}


def distance(kind, p, q, mode=RoundingMode.TSPLIB_INTEGER):
    try:
        fn = SCALAR_FUNCTIONS[WeightKind(kind)]
    except (KeyError, ValueError):
        raise UnsupportedFormatError(f"no distance function for {kind!r}") from None
    return fn(p, q, mode)
