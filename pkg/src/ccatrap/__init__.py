"""Atom emission into a coupled-cavity array: bound states, dynamics, localization."""

__version__ = "0.1.0"

from .model import ModelParams, dispersion, group_velocity  # noqa: E402
from .spectrum import bound_energies, bound_state, scattering_state  # noqa: E402
from .dynamics import evolve  # noqa: E402
from .observables import localization_metrics, threshold  # noqa: E402

__all__ = [
    "ModelParams",
    "dispersion",
    "group_velocity",
    "bound_energies",
    "bound_state",
    "scattering_state",
    "evolve",
    "localization_metrics",
    "threshold",
]
