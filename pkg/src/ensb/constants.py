"""Physical constants and laboratory-unit conversions.

Everything inside the package is expressed in powers of electron-volts
(hbar = c = 1).  Times become eV^-1, lengths eV^-1, cross sections eV^-2.
Conversions from laboratory units happen once, at construction time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class PhysicalConstants:
    electron_mass_eV: float = 0.511e6
    fine_structure_alpha: float = 1.0 / 137.035999084
    hbar_eV_s: float = 6.582119569e-16
    hbar_c_eV_cm: float = 1.973269804e-5
    # r_e = alpha / m in natural units (eV^-1); derived unless given
    classical_electron_radius: float = field(default=0.0)

    def __post_init__(self):
        if self.classical_electron_radius == 0.0:
            object.__setattr__(
                self,
                "classical_electron_radius",
                self.fine_structure_alpha / self.electron_mass_eV,
            )
        for name in (
            "electron_mass_eV",
            "fine_structure_alpha",
            "hbar_eV_s",
            "hbar_c_eV_cm",
            "classical_electron_radius",
        ):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


CONSTANTS = PhysicalConstants()

M_E = CONSTANTS.electron_mass_eV
ALPHA = CONSTANTS.fine_structure_alpha
R_E = CONSTANTS.classical_electron_radius


def ps_to_inv_eV(t_ps: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Convert a duration in picoseconds to natural units (eV^-1)."""
    return t_ps * 1e-12 / constants.hbar_eV_s


def inv_eV_to_ps(t: float, constants: PhysicalConstants = CONSTANTS) -> float:
    return t * constants.hbar_eV_s * 1e12


def MeV(x: float) -> float:
    return x * 1e6


def deg(x: float) -> float:
    return math.radians(x)


def inv_eV2_to_cm2(sigma: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Convert an area from eV^-2 to cm^2."""
    return sigma * constants.hbar_c_eV_cm**2
