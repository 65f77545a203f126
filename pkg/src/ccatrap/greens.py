r"""Scalar Green-function algebra of the atom + array system.

Only the matrix elements needed downstream are exposed: the bare atomic
element ``G0e = 1/z``, the local lattice element ``G00``, the general lattice
element between sites ``0`` and ``j``, and the dressing functions ``f``,
``f1 = g G00 f`` and ``f2 = g G0e f``.

Energies on the real axis inside the band ``[-2J, 2J]`` sit on the branch cut.
They must carry a side tag: ``side=+1`` is the limit ``z + i0`` and
``side=-1`` is ``z - i0``. On-cut values come from closed forms; no finite
``delta`` regularisation is ever used.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchPointError, DegenerateError, DomainError, PoleError
from .model import ModelParams

__all__ = [
    "ComplexEnergy",
    "Residues",
    "classify",
    "g0e",
    "g00",
    "lattice_green",
    "dressing",
    "pole_equation",
    "residues",
]

OFF_CUT = "off_cut"
ON_CUT = "on_cut"


@dataclass(frozen=True)
class ComplexEnergy:
    """A complex energy with its position relative to the branch cut.

    ``side`` is ``+1``/``-1`` for points on the cut and ``0`` otherwise.
    """

    z: complex
    side: int = 0
    kind: str = OFF_CUT


def classify(z, p: ModelParams = ModelParams(), side: int | None = None) -> ComplexEnergy:
    """Tag ``z`` as lying off or on the branch cut of ``G00``.

    A real ``z`` inside ``(-2J, 2J)`` needs ``side``. Passing ``side`` for a
    point off the cut is an error, as is ``z = +-2J``.
    """
    if isinstance(z, ComplexEnergy):
        if side is not None and side != z.side:
            raise DomainError("conflicting side tags")
        return z
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise DomainError(f"non-finite energy {z!r}")
    edge = 2.0 * p.J
    if z.imag == 0.0 and abs(z.real) == edge:
        raise BranchPointError(f"z = {z.real:+g} is a branch point of G00")
    if z.imag == 0.0 and abs(z.real) < edge:
        if side not in (1, -1):
            raise DomainError(
                f"z = {z.real:g} lies on the cut [-2J, 2J]; pass side=+1 or side=-1"
            )
        return ComplexEnergy(z, int(side), ON_CUT)
    if side not in (None, 0):
        raise DomainError(f"side tag given for off-cut energy {z!r}")
    return ComplexEnergy(z, 0, OFF_CUT)


def _cut_root(z: complex, J: float) -> complex:
    # sqrt(z-2J)*sqrt(z+2J) with principal factors: behaves like z at infinity
    return np.sqrt(z - 2.0 * J) * np.sqrt(z + 2.0 * J)


def g0e(z) -> complex:
    """Bare atomic Green function ``1/z``."""
    if isinstance(z, ComplexEnergy):
        z = z.z
    z = complex(z)
    if z == 0:
        raise PoleError("G0e has a pole at z = 0", pole=0.0)
    return 1.0 / z


def lattice_green(z, j: int, p: ModelParams = ModelParams(), side: int | None = None) -> complex:
    r"""Bare lattice Green function between sites ``0`` and ``j``.

    Equals :math:`\frac{1}{2\pi}\int_{-\pi}^{\pi} dk\, e^{ikj}/(z - 2J\cos k)`.
    Off the cut the decaying root :math:`|\tilde z - \sqrt{\tilde z^2-1}| < 1`
    is used; on the cut ``side=+1`` gives
    :math:`-i(\tilde z - i\sqrt{1-\tilde z^2})^{|j|}/\sqrt{4J^2-z^2}`.
    """
    ce = classify(z, p, side)
    n = abs(int(j))
    J = p.J
    if ce.kind == OFF_CUT:
        zt = ce.z / (2.0 * J)
        w = zt - np.sqrt(zt - 1.0) * np.sqrt(zt + 1.0)
        return complex(w**n / _cut_root(ce.z, J))
    x = ce.z.real
    zt = x / (2.0 * J)
    s = ce.side
    root = np.sqrt(4.0 * J * J - x * x)
    w = zt - 1j * s * np.sqrt(1.0 - zt * zt)
    return complex(-1j * s * w**n / root)


def g00(z, p: ModelParams = ModelParams(), side: int | None = None) -> complex:
    """Local lattice Green function ``<0|G0(z)|0>``; ``1/sqrt(z^2-4J^2)`` off the cut."""
    return lattice_green(z, 0, p, side)


def pole_equation(z, p: ModelParams = ModelParams()) -> complex:
    """``1 - g^2/(z sqrt(z^2-4J^2))``; vanishes at the two bound-state energies."""
    ce = classify(z, p)
    if ce.kind != OFF_CUT:
        raise DomainError("pole_equation is defined off the branch cut only")
    return 1.0 - p.g**2 * g0e(ce.z) * g00(ce, p)


def dressing(z, p: ModelParams = ModelParams(), side: int | None = None):
    """Return the triple ``(f, f1, f2)`` at ``z``.

    ``f = g / (1 - g^2 G0e G00)``, ``f1 = g G00 f`` and ``f2 = g G0e f``.
    Raises :class:`PoleError` at a bound-state energy.
    """
    ce = classify(z, p, side)
    if p.g == 0.0:
        return 0j, 0j, 0j
    e = g0e(ce.z)
    loc = g00(ce, p)
    denom = 1.0 - p.g**2 * e * loc
    # G00 loses ~|z|^2/|z^2-4J^2| in relative accuracy near the band edges
    cond = 1.0 + abs(ce.z) ** 2 / max(abs(ce.z**2 - 4.0 * p.J**2), 1e-300)
    if abs(denom) < 16.0 * np.finfo(float).eps * cond:
        raise PoleError(f"f(z) has a pole at z = {ce.z.real:.15g}", pole=ce.z.real)
    f = p.g / denom
    return f, p.g * loc * f, p.g * e * f


@dataclass(frozen=True)
class Residues:
    """Residues of ``f``, ``f1``, ``f2`` at ``omega_+`` (``r`` flips sign at ``omega_-``)."""

    r: float
    r1: float
    r2: float


def residues(p: ModelParams) -> Residues:
    """Closed-form residues of the dressing functions at ``omega_+``."""
    if p.g == 0.0:
        raise DegenerateError("no poles for g = 0")
    g, J = p.g, p.J
    q = np.sqrt(g**4 + 4.0 * J**4)
    r = g**5 / (2.0 * q * np.sqrt(2.0 * J**2 + q))
    r1 = g**4 / (2.0 * q)
    r2 = g**6 / (2.0 * q * (2.0 * J**2 + q))
    return Residues(float(r), float(r1), float(r2))
