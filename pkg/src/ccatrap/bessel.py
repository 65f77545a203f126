r"""Bessel functions of the first kind of integer order.

Small arguments use the ascending series. Otherwise all orders ``0..n`` are
generated together by Miller's downward recurrence
:math:`J_{m-1} = (2m/x) J_m - J_{m+1}`, started well above both ``n`` and
``x`` and normalised with :math:`J_0 + 2\sum_{k\ge1} J_{2k} = 1`.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import UnsupportedRangeError

__all__ = ["bessel_j", "bessel_j_orders", "MAX_ORDER", "MAX_ARGUMENT"]

MAX_ORDER = 5000
MAX_ARGUMENT = 2000.0
_SERIES_LIMIT = 1.0
_RESCALE = 1e250


def _check(n_max, x):
    if n_max < 0 or n_max > MAX_ORDER:
        raise UnsupportedRangeError(f"order {n_max} outside [0, {MAX_ORDER}]")
    if not (0.0 <= x <= MAX_ARGUMENT):
        raise UnsupportedRangeError(f"argument {x!r} outside [0, {MAX_ARGUMENT}]")


def _series(n_max, x):
    out = np.zeros(n_max + 1)
    h = 0.5 * x
    q = -h * h
    for n in range(n_max + 1):
        term = math.exp(n * math.log(h) - math.lgamma(n + 1)) if h > 0 else float(n == 0)
        s = term
        k = 1
        while term != 0.0 and abs(term) > 1e-17 * abs(s):
            term *= q / (k * (n + k))
            s += term
            k += 1
        out[n] = s
        if s == 0.0:
            break
    return out


def _miller(n_max, x):
    start = max(n_max, int(x)) + 40 + int(12.0 * x ** (1.0 / 3.0))
    start += start % 2
    out = np.zeros(n_max + 1)
    hi, cur = 0.0, 1e-300
    norm = 0.0
    for m in range(start, 0, -1):
        lo = 2.0 * m / x * cur - hi
        hi, cur = cur, lo
        # cur now holds J_{m-1}, hi holds J_m
        if m - 1 <= n_max:
            out[m - 1] = cur
        if (m - 1) % 2 == 0 and m - 1 > 0:
            norm += 2.0 * cur
        if abs(cur) > _RESCALE:
            cur /= _RESCALE
            hi /= _RESCALE
            out /= _RESCALE
            norm /= _RESCALE
    norm += cur
    return out / norm


def bessel_j_orders(n_max: int, x: float) -> np.ndarray:
    """Return ``[J_0(x), ..., J_{n_max}(x)]``."""
    n_max = int(n_max)
    x = float(x)
    _check(n_max, x)
    if x == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    if x <= _SERIES_LIMIT:
        return _series(n_max, x)
    return _miller(n_max, x)


def bessel_j(n: int, x: float) -> float:
    """``J_n(x)`` for ``0 <= n <= MAX_ORDER`` and ``0 <= x <= MAX_ARGUMENT``."""
    return float(bessel_j_orders(n, x)[int(n)])
