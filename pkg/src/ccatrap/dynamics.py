r"""Emission of an initially excited atom into the empty array.

The state at time ``t`` splits into a continuum part and a bound part, both
for the atomic amplitude ``alpha(t) = alpha_u + alpha_b`` and for the photon
amplitude ``psi(x, t) = psi_u + psi_b``. Bound parts are closed forms. The
continuum parts are k-integrals evaluated by adaptive Gauss-Kronrod; for the
atomic amplitude there is an independent route through the Bessel expansion

.. math::
    \alpha_u(t) = I_0 J_0(2Jt) + \sum_{n\ge1} 2(-1)^n I_n J_{2n}(2Jt),

whose coefficients ``I_n`` do not depend on time.

Times are physical (same units as ``1/J``); the integrands depend on ``J t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bessel
from .errors import ConvergenceError, DomainError, UnsupportedRangeError
from .model import ModelParams
from .quadrature import DEFAULT_SPEC, QuadratureResult, QuadratureSpec, integrate
from .spectrum import bound_state

__all__ = [
    "EmissionTrace",
    "FieldFrame",
    "alpha_bound",
    "alpha_unbound",
    "alpha_unbound_quad",
    "alpha_unbound_bessel",
    "alpha_markov",
    "unbound_coefficients",
    "psi_bound",
    "psi_unbound_quad",
    "evolve",
    "BESSEL_SWITCH_JT",
]

BESSEL_SWITCH_JT = 200.0
_QUARTERS = (-np.pi, -0.5 * np.pi, 0.0, 0.5 * np.pi, np.pi)
_TAIL_TOL = 1e-10


def _check_t(t):
    t = float(t)
    if not np.isfinite(t) or t < 0:
        raise DomainError(f"time must be finite and non-negative, got {t!r}")
    return t


def alpha_bound(p: ModelParams, t):
    """Bound-state part of the atomic amplitude, ``2 p_b cos(omega_+ t)``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    if p.g == 0.0:
        out = np.zeros_like(t)
    else:
        bs = bound_state(p)
        out = 2.0 * bs.p_b * np.cos(bs.omega * t)
    return out.item() if out.ndim == 0 else out


def alpha_markov(p: ModelParams, t):
    """Weak-coupling exponential ``exp(-eta^2 J t / 2)``."""
    t = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * p.eta**2 * p.J * t)
    return out.item() if out.ndim == 0 else out


def _alpha_integrand(eta, tau):
    e2 = eta * eta
    quarter = 0.25 * e2 * e2

    def f(k):
        s = np.sin(k)
        return (e2 / (2.0 * np.pi)) * s * s * np.exp(-2j * tau * np.cos(k)) / (
            np.sin(2.0 * k) ** 2 + quarter
        )

    return f


def _alpha_unbound_quad_result(p: ModelParams, t: float, q: QuadratureSpec) -> QuadratureResult:
    tau = p.J * t
    n0 = 1 + math.ceil(2.0 * tau / np.pi)
    return integrate(_alpha_integrand(p.eta, tau), _QUARTERS, q, initial_panels=n0)


def alpha_unbound_quad(p: ModelParams, t: float, q: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Continuum part of the atomic amplitude by direct k-quadrature.

    For ``g = 0`` the atom is decoupled and the value is exactly 1.
    """
    t = _check_t(t)
    if p.g == 0.0:
        return 1.0 + 0j
    return complex(_alpha_unbound_quad_result(p, t, q).value)


_COEFF_CACHE: dict[float, np.ndarray] = {}


def _cosine_moments(eta: float, n_max: int, tol: float) -> np.ndarray:
    # Periodic trapezoid rule through one FFT; converges geometrically with a
    # rate set by the pole distance ~eta^2/4 of the integrand off the real axis.
    e2 = eta * eta
    quarter = 0.25 * e2 * e2
    width = 0.5 * np.arcsinh(0.5 * e2)
    M = max(1024, 1 << int(np.ceil(np.log2(max(8 * (n_max + 1), 40.0 / width)))))
    prev = None
    while True:
        k = 2.0 * np.pi * np.arange(M) / M
        s = np.sin(k)
        F = e2 * s * s / (np.sin(2.0 * k) ** 2 + quarter)
        In = np.fft.rfft(F).real[: 2 * n_max + 1 : 2] / M
        if prev is not None and np.abs(In - prev).max() < tol:
            return In
        if M > 2**26:
            raise ConvergenceError(f"cosine moments for eta={eta:g} did not converge")
        prev = In
        M *= 2


def unbound_coefficients(eta: float, n_max: int, tol: float = 1e-14) -> np.ndarray:
    r"""Bessel-series coefficients ``a_0 .. a_{n_max}``.

    ``a_0 = I_0`` and ``a_n = 2 (-1)^n I_n`` with ``I_n`` the continuum
    integral where the exponential is replaced by ``cos(2 n k)``. The
    integrand is smooth and periodic, so ``I_n`` come from the periodic
    trapezoid rule (one FFT), refined until two grids agree to ``tol``.
    Cached per ``eta`` in blocks that grow in powers of two.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    if eta <= 0:
        raise DomainError("coefficients need eta > 0")
    cached = _COEFF_CACHE.get(float(eta))
    if cached is not None and cached.size > n_max:
        return cached[: n_max + 1].copy()
    block = max(64, 1 << n_max.bit_length())
    In = _cosine_moments(float(eta), block - 1, tol)
    a = 2.0 * (-1.0) ** np.arange(block) * In
    a[0] = In[0]
    _COEFF_CACHE[float(eta)] = a
    return a[: n_max + 1].copy()


def _bessel_sum(eta, tau, n_max):
    a = unbound_coefficients(eta, n_max)
    jn = bessel.bessel_j_orders(2 * n_max, 2.0 * tau)[::2]
    terms = a * jn
    return terms


def alpha_unbound_bessel(p: ModelParams, t: float, n_max: int | None = None) -> float:
    """Continuum part of the atomic amplitude from the Bessel series.

    With ``n_max`` given the partial sum through ``n_max`` is returned.
    Otherwise ``n_max`` starts beyond the Bessel turning point and doubles
    until adding the extra terms changes the sum by less than ``1e-10``.
    """
    t = _check_t(t)
    if p.g == 0.0:
        return 1.0
    tau = p.J * t
    eta = p.eta
    if n_max is not None:
        if n_max < 1:
            raise DomainError("n_max must be at least 1")
        return float(_bessel_sum(eta, tau, int(n_max)).sum())
    n = max(16, math.ceil(tau + 4.0 * tau ** (1.0 / 3.0) + 16))
    prev = None
    while True:
        if 2 * n > bessel.MAX_ORDER:
            raise ConvergenceError(
                f"Bessel series for Jt={tau:g} needs orders beyond {bessel.MAX_ORDER}"
            )
        total = float(_bessel_sum(eta, tau, n).sum())
        if prev is not None and abs(total - prev) < _TAIL_TOL:
            return total
        prev = total
        n *= 2


def alpha_unbound(p: ModelParams, t: float, q: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Continuum atomic amplitude, switching to the Bessel route for ``Jt > 200``.

    The quadrature route is kept whenever the Bessel orders needed would leave
    the supported envelope.
    """
    t = _check_t(t)
    if p.J * t > BESSEL_SWITCH_JT:
        try:
            return complex(alpha_unbound_bessel(p, t))
        except (ConvergenceError, UnsupportedRangeError):
            pass
    return alpha_unbound_quad(p, t, q)


def psi_bound(p: ModelParams, x, t: float):
    """Bound-state part of the photon amplitude at sites ``x``.

    ``2 sqrt(p_b) N rho^|x|`` times ``-i sin(omega_+ t)`` on even ``|x|`` and
    ``cos(omega_+ t)`` on odd ``|x|``.
    """
    t = _check_t(t)
    ax = np.abs(np.asarray(x, dtype=np.int64))
    if p.g == 0.0:
        out = np.zeros(ax.shape, dtype=complex)
    else:
        bs = bound_state(p)
        amp = 2.0 * np.sqrt(bs.p_b) * bs.norm_N * bs.rho**ax
        wt = bs.omega * t
        out = np.where(ax % 2 == 0, -1j * np.sin(wt), np.cos(wt)) * amp
    return out.item() if out.ndim == 0 else out


def _psi_integrand(eta, tau, x):
    e2 = eta * eta
    x = np.asarray(x)
    ax, inv = np.unique(np.abs(x), return_inverse=True)
    neg = x < 0

    def f(k):
        s = np.abs(np.sin(k))
        sc = 4.0 * s * np.cos(k)
        pre = (eta / np.pi) * np.exp(-2j * tau * np.cos(k)) * s / (1j * e2 + sc)
        refl = e2 / (e2 + 1j * sc)
        # e^{i|k||x|} once per distinct |x|; the other phases are conjugates
        E = np.exp(1j * np.abs(k)[:, None] * ax[None, :])[:, inv]
        Ec = E.conj()
        pos_k = (k >= 0)[:, None]
        plane = np.where(pos_k ^ neg[None, :], E, Ec)
        mirror = E
        return pre[:, None] * (plane - refl[:, None] * mirror)

    return f


_SITE_CHUNK = 96


def _psi_unbound_quad_result(p, x, t, q):
    # sites are integrated in chunks to bound the (nodes x sites) workspace
    tau = p.J * t
    x = np.asarray(x)
    order = np.argsort(np.abs(x), kind="stable")
    value = np.empty(x.size, dtype=complex)
    error = 0.0
    panels = evaluations = 0
    for start in range(0, x.size, _SITE_CHUNK):
        sel = order[start : start + _SITE_CHUNK]
        xs = x[sel]
        xmax = float(np.abs(xs).max())
        n0 = 1 + math.ceil((2.0 * tau + 0.5 * np.pi * xmax) / np.pi)
        res = integrate(_psi_integrand(p.eta, tau, xs), _QUARTERS, q, initial_panels=n0)
        value[sel] = res.value
        error = max(error, res.error)
        panels += res.panels
        evaluations += res.evaluations
    return QuadratureResult(value, error, panels, evaluations)


def psi_unbound_quad(p: ModelParams, x, t: float, q: QuadratureSpec = DEFAULT_SPEC):
    """Continuum part of the photon amplitude at sites ``x`` by k-quadrature.

    All sites share the quadrature panels; the tolerance applies to each.
    """
    t = _check_t(t)
    xs = np.atleast_1d(np.asarray(x, dtype=np.int64))
    if p.g == 0.0:
        out = np.zeros(xs.shape, dtype=complex)
    else:
        out = np.asarray(_psi_unbound_quad_result(p, xs, t, q).value, dtype=complex)
    return out.item() if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class EmissionTrace:
    """Atomic amplitude on a time grid, split into continuum and bound parts.

    ``diagnostics`` holds one dict per time with the route used and the
    achieved error bound.
    """

    times: np.ndarray
    alpha_u: np.ndarray
    alpha_b: np.ndarray
    diagnostics: list = field(default_factory=list, compare=False)

    @property
    def alpha(self) -> np.ndarray:
        return self.alpha_u + self.alpha_b

    @property
    def p_e(self) -> np.ndarray:
        return np.abs(self.alpha) ** 2


@dataclass(frozen=True)
class FieldFrame:
    """Photon amplitude over the sites ``x`` at one time."""

    t: float
    x: np.ndarray
    psi_u: np.ndarray
    psi_b: np.ndarray
    error: float = 0.0

    @property
    def psi(self) -> np.ndarray:
        return self.psi_u + self.psi_b

    @property
    def p_x(self) -> np.ndarray:
        return np.abs(self.psi) ** 2


def _window_sites(window):
    if np.ndim(window) == 0:
        X = int(window)
        if X < 0:
            raise DomainError("window half-width must be non-negative")
        return np.arange(-X, X + 1)
    lo, hi = (int(v) for v in window)
    if hi < lo:
        raise DomainError("window must satisfy lo <= hi")
    return np.arange(lo, hi + 1)


def evolve(
    p: ModelParams,
    times,
    window=0,
    q: QuadratureSpec = DEFAULT_SPEC,
    check_norm: bool = False,
    with_field: bool = True,
):
    """Atomic trace and photon frames for the emission problem.

    Parameters
    ----------
    p : ModelParams
    times : array_like
        Non-decreasing, non-negative times. Used as given.
    window : int or (int, int)
        Half-width ``X`` of the site window ``[-X, X]``, or explicit bounds.
    q : QuadratureSpec
    check_norm : bool
        Require the window to contain the light cone, ``X >= 2 J t_max + 10``.
    with_field : bool
        Skip the photon frames when False.

    Returns
    -------
    (EmissionTrace, list of FieldFrame)
    """
    times = np.asarray(times, dtype=float).ravel()
    if times.size == 0:
        raise DomainError("empty time grid")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be non-negative and non-decreasing")
    sites = _window_sites(window)
    if check_norm:
        need = 2.0 * p.J * times.max() + 10.0
        if min(-sites[0], sites[-1]) < need:
            raise DomainError(
                f"window [{sites[0]}, {sites[-1]}] does not contain the light cone "
                f"(need half-width >= {need:g})"
            )
    alpha_u = np.empty(times.size, dtype=complex)
    diagnostics = []
    for i, t in enumerate(times):
        if p.g == 0.0:
            alpha_u[i] = 1.0
            diagnostics.append({"t": float(t), "route": "exact", "error": 0.0})
            continue
        tau = p.J * t
        if tau > BESSEL_SWITCH_JT:
            try:
                alpha_u[i] = alpha_unbound_bessel(p, t)
                diagnostics.append({"t": float(t), "route": "bessel", "error": _TAIL_TOL})
                continue
            except (ConvergenceError, UnsupportedRangeError):
                pass
        res = _alpha_unbound_quad_result(p, t, q)
        alpha_u[i] = res.value
        diagnostics.append(
            {"t": float(t), "route": "quadrature", "error": res.error, "panels": res.panels}
        )
    alpha_b = np.asarray(alpha_bound(p, times), dtype=float)
    trace = EmissionTrace(times, alpha_u, alpha_b, diagnostics)
    frames = []
    if with_field:
        for t in times:
            pb = np.asarray(psi_bound(p, sites, t), dtype=complex)
            if p.g == 0.0:
                frames.append(FieldFrame(float(t), sites, np.zeros(sites.size, complex), pb))
                continue
            res = _psi_unbound_quad_result(p, sites, t, q)
            frames.append(
                FieldFrame(float(t), sites, np.asarray(res.value, dtype=complex), pb, res.error)
            )
    return trace, frames
