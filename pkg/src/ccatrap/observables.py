"""Localization measures, time averages and coupling thresholds.

The localized photon cloud is ``A exp(-|x|/lambda)`` modulated in time with
frequency ``omega_+``. Its time-averaged weight ``eps_floc`` and the trapped
atomic weight ``eps_atr = 2 p_b^2`` are closed forms of ``eta``. Both are
monotone, so a threshold ``eta*`` is the crossing of a fixed level ``eps_c``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateError, DomainError, InsufficientWindowError
from .model import ModelParams

__all__ = [
    "LocalizationMetrics",
    "localization_metrics",
    "eps_floc",
    "eps_atr",
    "threshold",
    "long_time_average",
    "probability_profiles",
    "oscillation_frequency",
    "DEFAULT_EPS_C",
]

DEFAULT_EPS_C = 2.7e-3


def eps_floc(eta):
    """Time-averaged localized photon weight ``eta^4 / (2 eta^4 + 8)``."""
    e4 = np.asarray(eta, dtype=float) ** 4
    return e4 / (2.0 * e4 + 8.0)


def eps_atr(eta):
    """Time-averaged trapped atomic weight ``2 p_b^2``."""
    e4 = np.asarray(eta, dtype=float) ** 4
    return e4 * e4 / (2.0 * (e4 + 2.0 * np.sqrt(e4 + 4.0) + 4.0) ** 2)


@dataclass(frozen=True)
class LocalizationMetrics:
    eta: float
    A: float
    lam: float
    eps_floc: float
    eps_atr: float


def localization_metrics(p: ModelParams) -> LocalizationMetrics:
    """Amplitude ``A``, length ``lam`` and the two averaged weights at ``p.eta``."""
    eta = p.eta
    if eta == 0.0:
        raise DegenerateError("localization length diverges at g = 0")
    e4 = eta**4
    s = np.sqrt(e4 + 4.0)
    gap = e4 / (s + 2.0)  # s - 2 without cancellation
    A = eta**5 / ((e4 + 2.0 * s + 4.0) * np.sqrt(gap))
    lam = 1.0 / np.arcsinh(0.5 * np.sqrt(gap))
    return LocalizationMetrics(
        eta=float(eta),
        A=float(A),
        lam=float(lam),
        eps_floc=float(eps_floc(eta)),
        eps_atr=float(eps_atr(eta)),
    )


_METRICS = {"floc": eps_floc, "atr": eps_atr}


def threshold(metric: str, eps_c: float = DEFAULT_EPS_C, xtol: float = 1e-7) -> float:
    """Smallest ``eta`` at which ``metric`` (``"floc"`` or ``"atr"``) reaches ``eps_c``."""
    try:
        fn = _METRICS[metric]
    except KeyError:
        raise DomainError(f"unknown metric {metric!r}; use 'floc' or 'atr'") from None
    eps_c = float(eps_c)
    if not 0.0 < eps_c < 0.5:
        raise DomainError(f"eps_c = {eps_c!r} is unreachable; both metrics stay below 1/2")
    lo, hi = 0.0, 1.0
    while fn(hi) < eps_c:
        hi *= 2.0
    return float(brentq(lambda e: fn(e) - eps_c, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))


def long_time_average(times, signal, omega_plus: float, t_start: float | None = None,
                      min_periods: int = 5) -> float:
    """Mean of ``signal`` over a whole number of periods ``2 pi / omega_plus``.

    The window starts at ``t_start`` (default: first sample) and covers as many
    full periods as the samples allow; at least ``min_periods`` are required.
    The signal is linearly interpolated onto a fine uniform grid before the
    trapezoid average.
    """
    times = np.asarray(times, dtype=float)
    signal = np.asarray(signal, dtype=float)
    if times.shape != signal.shape or times.ndim != 1:
        raise DomainError("times and signal must be 1-D arrays of equal length")
    if omega_plus <= 0:
        raise DomainError("omega_plus must be positive")
    t0 = times[0] if t_start is None else float(t_start)
    period = 2.0 * np.pi / omega_plus
    n_periods = int(np.floor((times[-1] - t0) / period + 1e-9))
    if n_periods < min_periods:
        raise InsufficientWindowError(
            f"only {n_periods} full periods after t = {t0:g}; need {min_periods}"
        )
    t1 = t0 + n_periods * period
    samples = max(64 * n_periods, 4 * np.count_nonzero((times >= t0) & (times <= t1)))
    grid = np.linspace(t0, t1, samples + 1)
    vals = np.interp(grid, times, signal)
    return float(np.trapezoid(vals, grid) / (t1 - t0))


def probability_profiles(trace, frames):
    """Return ``(p_e, p_x)``: atomic population and a ``(n_times, n_sites)`` array."""
    p_e = np.abs(trace.alpha) ** 2
    if not frames:
        return p_e, np.zeros((p_e.size, 0))
    p_x = np.array([np.abs(fr.psi) ** 2 for fr in frames])
    return p_e, p_x


def oscillation_frequency(times, signal) -> float:
    """Angular frequency of a periodic signal from its mean crossings.

    Crossing instants are located by linear interpolation; the frequency is
    ``pi * (n - 1) / (last - first)`` for ``n`` crossings.
    """
    times = np.asarray(times, dtype=float)
    y = np.asarray(signal, dtype=float) - np.mean(signal)
    idx = np.nonzero(np.signbit(y[:-1]) != np.signbit(y[1:]))[0]
    if idx.size < 3:
        raise InsufficientWindowError("fewer than three mean crossings")
    tc = times[idx] - y[idx] * (times[idx + 1] - times[idx]) / (y[idx + 1] - y[idx])
    return float(np.pi * (tc.size - 1) / (tc[-1] - tc[0]))
