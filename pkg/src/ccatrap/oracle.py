"""Exact finite-ring reference by dense diagonalisation.

Basis ordering: index 0 is the excited atom ``|e>``; index ``1 + (x + N/2)``
is the photon at cavity ``x`` for ``x = -N/2 .. N/2-1``. The ring closes with
a hopping link between ``x = N/2-1`` and ``x = -N/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, WrapError
from .model import ModelParams

__all__ = [
    "FiniteLattice",
    "Eigenpairs",
    "build_hamiltonian",
    "eigendecompose",
    "propagate_exact",
    "validate",
    "ValidationReport",
    "WRAP_MARGIN",
]

MAX_N = 2**14
WRAP_MARGIN = 10.0


@dataclass(frozen=True)
class FiniteLattice:
    params: ModelParams
    N: int
    H: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.N + 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.N // 2, self.N // 2)

    def index(self, x):
        """Basis index of cavity ``x`` (array-friendly)."""
        x = np.asarray(x)
        if np.any(x < -self.N // 2) or np.any(x >= self.N // 2):
            raise DomainError(f"site outside the ring of {self.N} cavities")
        return 1 + x + self.N // 2


def build_hamiltonian(p: ModelParams, N: int) -> FiniteLattice:
    """Single-excitation Hamiltonian of the atom plus a ring of ``N`` cavities."""
    N = int(N)
    if N % 2 or N < 4 or N > MAX_N:
        raise DomainError(f"N must be even with 4 <= N <= {MAX_N}, got {N}")
    H = np.zeros((N + 1, N + 1))
    i = np.arange(1, N + 1)
    j = 1 + (i % N)
    H[i, j] = p.J
    H[j, i] = p.J
    centre = 1 + N // 2
    H[0, centre] = H[centre, 0] = p.g
    return FiniteLattice(p, N, H)


@dataclass(frozen=True)
class Eigenpairs:
    lattice: FiniteLattice
    energies: np.ndarray
    vectors: np.ndarray = field(repr=False)

    def out_of_band(self) -> np.ndarray:
        """Eigenvalues outside ``[-2J, 2J]`` (the bound states for large ``N``)."""
        J = self.lattice.params.J
        E = self.energies
        return E[np.abs(E) > 2.0 * J * (1.0 + 1e-12)]


def eigendecompose(lat: FiniteLattice) -> Eigenpairs:
    """Full orthonormal eigenbasis of ``lat.H`` (LAPACK ``syevd`` via numpy)."""
    try:
        E, V = np.linalg.eigh(lat.H)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    return Eigenpairs(lat, E, V)


def propagate_exact(eig: Eigenpairs, t):
    """Amplitudes of ``exp(-iHt)|e>``.

    Returns ``(alpha, psi)``: ``alpha`` has the shape of ``t`` and ``psi`` has
    an extra trailing axis over the ring sites ``lattice.sites``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    V = eig.vectors
    weights = V[0, :]
    phases = np.exp(-1j * np.multiply.outer(t, eig.energies)) * weights
    amps = phases @ V.T
    return amps[..., 0], amps[..., 1:]


@dataclass
class ValidationReport:
    eta: float
    N: int
    tmax: float
    window: int
    max_alpha_dev: float
    max_psi_dev: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_alpha_dev < self.tol and self.max_psi_dev < self.tol

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "N": self.N,
            "tmax": self.tmax,
            "window": self.window,
            "max_alpha_dev": self.max_alpha_dev,
            "max_psi_dev": self.max_psi_dev,
            "tol": self.tol,
            "passed": self.passed,
        }


def wrap_limit(p: ModelParams, N: int, margin: float = WRAP_MARGIN) -> float:
    """Latest time before the light cone plus ``margin`` sites reaches the antipode."""
    return (0.5 * N - margin) / (2.0 * p.J)


def validate(p: ModelParams, N: int, times, window: int = 50, tol: float = 1e-3, q=None):
    """Compare the analytic emission dynamics with the finite ring.

    Raises :class:`WrapError` when ``max(times)`` is past :func:`wrap_limit`.
    """
    from .dynamics import evolve
    from .quadrature import DEFAULT_SPEC

    times = np.asarray(times, dtype=float).ravel()
    limit = wrap_limit(p, N)
    if times.max() > limit:
        raise WrapError(
            f"t_max = {times.max():g} exceeds the wrap limit {limit:g} for N = {N}"
        )
    if window >= N // 2:
        raise DomainError("window must fit inside the ring")
    lat = build_hamiltonian(p, N)
    eig = eigendecompose(lat)
    alpha_N, psi_N = propagate_exact(eig, times)
    trace, frames = evolve(p, times, window, q or DEFAULT_SPEC)
    idx = lat.index(np.arange(-window, window + 1)) - 1
    psi_a = np.array([fr.psi for fr in frames])
    return ValidationReport(
        eta=p.eta,
        N=N,
        tmax=float(times.max()),
        window=int(window),
        max_alpha_dev=float(np.abs(trace.alpha - alpha_N).max()),
        max_psi_dev=float(np.abs(psi_a - psi_N[:, idx]).max()),
        tol=float(tol),
    )
