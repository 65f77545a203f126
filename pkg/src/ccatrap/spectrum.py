"""Bound and scattering eigenstates of the single-excitation Hamiltonian.

Two bound states sit at ``omega_+- = +-sqrt(2J^2 + sqrt(g^4 + 4J^4))`` with a
photon cloud decaying as ``rho**|x|``. The continuum is labelled by the photon
momentum ``k``; its amplitudes drop the ``1/sqrt(N)`` plane-wave factor, which
the ``dk/2pi`` measure restores inside k-integrals.

The atomic component of each bound state is chosen real and positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError
from .model import ModelParams

__all__ = [
    "BoundState",
    "ScatteringState",
    "bound_energies",
    "bound_state",
    "bound_amplitude",
    "scattering_state",
    "decay_factor",
    "atomic_weight",
]


def bound_energies(p: ModelParams) -> tuple[float, float]:
    """Return ``(omega_plus, omega_minus)``; both sit on the band edges when g = 0."""
    J = p.J
    w = float(np.sqrt(2.0 * J**2 + np.sqrt(p.g**4 + 4.0 * J**4)))
    return w, -w


def decay_factor(p: ModelParams) -> float:
    """Spatial decay ratio ``rho`` of the bound-state photon cloud."""
    w, _ = bound_energies(p)
    J = p.J
    q = np.sqrt(p.g**4 + 4.0 * J**4)
    # w^2 - 4J^2 = q - 2J^2 = g^4/(q + 2J^2); (w - sqrt(.))/2J flipped for large g
    return float(2.0 * J / (w + np.sqrt(p.g**4 / (q + 2.0 * J * J))))


def atomic_weight(eta: float) -> float:
    """Atomic excitation probability ``p_b`` of either bound state."""
    e4 = eta**4
    return float(e4 / (2.0 * (e4 + 2.0 * np.sqrt(e4 + 4.0) + 4.0)))


@dataclass(frozen=True)
class BoundState:
    mu: int
    omega: float
    rho: float
    p_b: float
    norm_N: float

    @property
    def atomic_amplitude(self) -> float:
        return float(np.sqrt(self.p_b))

    def amplitudes(self, x):
        """Photon amplitudes ``mu * N * (mu*rho)**|x|`` at the sites ``x``."""
        x = np.abs(np.asarray(x, dtype=np.int64))
        return self.mu * self.norm_N * (self.mu * self.rho) ** x


def bound_state(p: ModelParams, mu: int = 1) -> BoundState:
    """Closed-form bound state with energy ``mu * omega_plus``."""
    if mu not in (1, -1):
        raise DomainError(f"mu must be +1 or -1, got {mu!r}")
    if p.g == 0.0:
        raise DegenerateError("no bound state for g = 0 (levels merge with the band edges)")
    w, _ = bound_energies(p)
    rho = decay_factor(p)
    p_b = atomic_weight(p.eta)
    rho2 = rho * rho
    norm_N = float(np.sqrt((1.0 - p_b) * (1.0 - rho2) / (1.0 + rho2)))
    return BoundState(mu=mu, omega=mu * w, rho=rho, p_b=p_b, norm_N=norm_N)


def bound_amplitude(bs: BoundState, x: int) -> float:
    """Amplitude ``<x|Psi_mu>``; the atomic one is ``sqrt(p_b)``."""
    return float(bs.amplitudes(int(x)))


@dataclass(frozen=True)
class ScatteringState:
    """Continuum eigenstate at momentum ``k`` (``1/sqrt(N)`` dropped).

    ``gamma`` is the reflection amplitude, ``1 + gamma`` the transmission one
    and ``u_ke`` the atomic amplitude. Since the group velocity is
    ``-2J sin k``, these are incoming-wave states: ``u_ke`` is the atomic
    Green element at ``E - i0`` times ``g``. The set is complete either way.
    """

    k: float
    gamma: complex
    u_ke: complex

    @property
    def transmission(self) -> complex:
        return 1.0 + self.gamma

    def field_amplitude(self, x):
        """Photon amplitude ``e^{ikx} + gamma e^{i|kx|}`` at sites ``x``."""
        x = np.asarray(x, dtype=float)
        out = np.exp(1j * self.k * x) + self.gamma * np.exp(1j * np.abs(self.k * x))
        return out.item() if out.ndim == 0 else out


def _gamma(eta, k):
    s = np.abs(np.sin(k))
    c = np.cos(k)
    e2 = eta * eta
    return -e2 / (4j * s * c + e2)


def _u_ke(eta, k):
    s = np.abs(np.sin(k))
    c = np.cos(k)
    return 2.0 * eta * s / (4.0 * s * c - 1j * eta * eta)


def scattering_state(p: ModelParams, k: float) -> ScatteringState:
    """Scattering eigenstate with energy ``2J cos k``, ``k`` in ``(-pi, pi)``, ``k != 0``."""
    k = float(k)
    if not np.isfinite(k) or abs(k) >= np.pi or k == 0.0:
        raise DegenerateError(f"k = {k!r} is a band edge or outside (-pi, pi)")
    eta = p.eta
    if eta == 0.0:
        return ScatteringState(k, 0j, 0j)
    return ScatteringState(k, complex(_gamma(eta, k)), complex(_u_ke(eta, k)))
