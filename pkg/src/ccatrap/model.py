"""Model parameters and free-photon band of the coupled-cavity array.

The array has nearest-neighbour hopping ``J`` and the atom couples with
strength ``g`` to cavity ``x = 0``. Atom and cavity are resonant and their
common frequency is the energy origin.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["ModelParams", "dispersion", "group_velocity"]


@dataclass(frozen=True)
class ModelParams:
    """Hopping rate ``J``, coupling ``g`` and the ratio ``eta = g/J``.

    >>> ModelParams(J=2.0, g=1.0).eta
    0.5
    """

    J: float = 1.0
    g: float = 0.0
    eta: float = field(init=False)
    omega0: float = field(default=0.0, init=False)

    def __post_init__(self):
        J = float(self.J)
        g = float(self.g)
        if not np.isfinite(J) or J <= 0:
            raise DomainError(f"hopping J must be positive, got {self.J!r}")
        if not np.isfinite(g) or g < 0:
            raise DomainError(f"coupling g must be non-negative, got {self.g!r}")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "eta", g / J)

    @classmethod
    def from_eta(cls, eta: float, J: float = 1.0) -> "ModelParams":
        return cls(J=J, g=eta * J)


def _check_k(k):
    k = np.asarray(k, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(np.abs(k) > np.pi):
        raise DomainError("momentum k must lie in [-pi, pi]")
    return k


def _scalar(a):
    return a.item() if np.ndim(a) == 0 else a


def dispersion(k, p: ModelParams = ModelParams()):
    """Free photon energy ``2 J cos k``."""
    k = _check_k(k)
    return _scalar(2.0 * p.J * np.cos(k))


def group_velocity(k, p: ModelParams = ModelParams()):
    """Derivative of the dispersion, ``-2 J sin k`` (sites per unit time)."""
    k = _check_k(k)
    return _scalar(-2.0 * p.J * np.sin(k))
