"""Relativistic kinematics in natural units.

Frame convention: both laser waves travel along +z, so the wave light-cone
vector is n = (1, 0, 0, 1).  Polar angles are measured from +z, azimuths
from +x.  Four-vectors use the (+, -, -, -) metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .constants import M_E
from .errors import DomainError, SingularConfigurationError


@dataclass(frozen=True)
class FourVector:
    t: float
    x: float
    y: float
    z: float

    @classmethod
    def from_spatial(cls, t, vec) -> "FourVector":
        return cls(float(t), float(vec[0]), float(vec[1]), float(vec[2]))

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def components(self):
        return (self.t, self.x, self.y, self.z)

    def dot(self, other) -> float:
        return minkowski_dot(self, other)

    def square(self) -> float:
        return minkowski_dot(self, self)

    def __add__(self, other):
        if isinstance(other, ComplexFourVector):
            return NotImplemented
        return FourVector(self.t + other.t, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        if isinstance(other, ComplexFourVector):
            return NotImplemented
        return FourVector(self.t - other.t, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self):
        return FourVector(-self.t, -self.x, -self.y, -self.z)

    def __mul__(self, c):
        if isinstance(c, complex):
            return ComplexFourVector(*(c * a for a in self.components()))
        return FourVector(c * self.t, c * self.x, c * self.y, c * self.z)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)


@dataclass(frozen=True)
class ComplexFourVector:
    t: complex
    x: complex
    y: complex
    z: complex

    def components(self):
        return (self.t, self.x, self.y, self.z)

    def conj(self) -> "ComplexFourVector":
        return ComplexFourVector(*(complex(a).conjugate() for a in self.components()))

    def dot(self, other) -> complex:
        """Bilinear Minkowski product; no implicit conjugation."""
        return minkowski_dot(self, other)

    def __add__(self, other):
        a, b = self.components(), other.components()
        return ComplexFourVector(*(u + v for u, v in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self.components(), other.components()
        return ComplexFourVector(*(u - v for u, v in zip(a, b)))

    def __neg__(self):
        return ComplexFourVector(*(-a for a in self.components()))

    def __mul__(self, c):
        return ComplexFourVector(*(c * a for a in self.components()))

    __rmul__ = __mul__


def minkowski_dot(a, b):
    """(a b) = a0 b0 - a.b for real or complex four-vectors."""
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z


N_WAVE = FourVector(1.0, 0.0, 0.0, 1.0)


def unit_vector(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def light_cone_vector(theta: float, phi: float) -> FourVector:
    """n' = (1, n') for a unit direction (theta, phi)."""
    return FourVector.from_spatial(1.0, unit_vector(theta, phi))


def photon_four_vector(omega: float, theta: float, phi: float) -> FourVector:
    return omega * light_cone_vector(theta, phi)


def wave_four_vector(omega: float) -> FourVector:
    """k_j = omega_j n for a wave travelling along +z."""
    return omega * N_WAVE


@dataclass(frozen=True)
class ElectronState:
    """On-shell electron: energy, |p| and the direction of p.

    Both ``energy`` and ``momentum_magnitude`` are stored so that slow
    electrons keep full relative precision in |p|.
    """

    energy: float
    momentum_magnitude: float
    polar_angle: float
    azimuth: float = 0.0

    def __post_init__(self):
        E, p = self.energy, self.momentum_magnitude
        if not (math.isfinite(E) and math.isfinite(p)) or p < 0:
            raise DomainError(f"invalid electron state E={E!r}, |p|={p!r}")
        if abs((E - p) * (E + p) - M_E**2) > 1e-10 * M_E**2:
            raise DomainError(f"electron off mass shell: E^2-p^2={(E - p) * (E + p)!r}, m^2={M_E**2!r}")
        if not 0.0 <= self.polar_angle <= math.pi:
            raise DomainError(f"polar angle must lie in [0, pi], got {self.polar_angle!r}")

    @classmethod
    def from_energy(cls, energy: float, polar_angle: float, azimuth: float = 0.0) -> "ElectronState":
        if energy < M_E:
            raise DomainError(f"total energy {energy!r} eV below rest mass {M_E!r} eV")
        p = math.sqrt((energy - M_E) * (energy + M_E))
        return cls(energy, p, polar_angle, azimuth)

    @classmethod
    def from_velocity(cls, v: float, polar_angle: float, azimuth: float = 0.0) -> "ElectronState":
        if not 0.0 <= v < 1.0:
            raise DomainError(f"velocity must lie in [0, 1), got {v!r}")
        gamma = 1.0 / math.sqrt((1.0 - v) * (1.0 + v))
        return cls(gamma * M_E, gamma * M_E * v, polar_angle, azimuth)

    @property
    def velocity(self) -> float:
        return self.momentum_magnitude / self.energy

    @property
    def direction(self) -> np.ndarray:
        return unit_vector(self.polar_angle, self.azimuth)

    @property
    def momentum(self) -> np.ndarray:
        return self.momentum_magnitude * self.direction

    def four_momentum(self) -> FourVector:
        return FourVector.from_spatial(self.energy, self.momentum)

    def light_cone_energy(self) -> float:
        """(n p) = E - |p| cos(theta), evaluated without cancellation."""
        E, p = self.energy, self.momentum_magnitude
        return M_E**2 / (E + p) + 2.0 * p * math.sin(0.5 * self.polar_angle) ** 2


@dataclass(frozen=True)
class PhotonDirection:
    polar_angle: float
    azimuth: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.polar_angle <= math.pi:
            raise DomainError(f"photon polar angle must lie in [0, pi], got {self.polar_angle!r}")

    @property
    def unit(self) -> np.ndarray:
        return unit_vector(self.polar_angle, self.azimuth)

    def null_vector(self) -> FourVector:
        return light_cone_vector(self.polar_angle, self.azimuth)


@dataclass(frozen=True)
class ResonanceChannel:
    s1: int
    s2: int
    combined_energy: float
    resonant_frequency: float
    resonance_parameter: float
    transit_width: float

    def __post_init__(self):
        if self.combined_energy <= 0:
            raise DomainError(f"channel ({self.s1},{self.s2}) has non-positive combined energy")


def a_parameter(state: ElectronState) -> float:
    """a = |p| sin(theta) / (n p)."""
    np_ = state.light_cone_energy()
    if np_ <= 0.0:
        raise DomainError("(n p) = 0: electron collinear with the waves at v = 1")
    return state.momentum_magnitude * math.sin(state.polar_angle) / np_


def interference_photon_angle(state: ElectronState) -> PhotonDirection:
    """Spontaneous-photon direction inside the interference region.

    cot(theta'/2) = a_i and the photon shares the electron azimuth.
    """
    a = a_parameter(state)
    return PhotonDirection(2.0 * math.atan2(1.0, a), state.azimuth)


def interference_final_polar(initial: ElectronState, E_f: float) -> tuple:
    """Final polar angles theta_f with a_f = a_i at final energy E_f.

    Returns every root in [0, pi] ordered by |theta_f - theta_i|; an empty
    tuple means no final direction satisfies the constraint.  The final
    azimuth equals the initial one.
    """
    if E_f <= M_E:
        raise DomainError(f"final energy {E_f!r} eV must exceed the rest mass")
    a = a_parameter(initial)
    p = math.sqrt((E_f - M_E) * (E_f + M_E))
    # p sin(t) + a p cos(t) = a E_f  <=>  sin(t + psi) = a E_f / (p sqrt(1 + a^2))
    psi = math.atan(a)
    s = a * E_f / (p * math.hypot(1.0, a))
    if s > 1.0 + 1e-14:
        return ()
    base = math.asin(min(s, 1.0))
    roots = []
    for t in (base - psi, math.pi - base - psi):
        if -1e-12 <= t <= math.pi + 1e-12:
            t = min(max(t, 0.0), math.pi)
            if all(abs(t - r) > 1e-12 for r in roots):
                roots.append(t)
    roots.sort(key=lambda t: abs(t - initial.polar_angle))
    return tuple(roots)


class CombinedEnergy(NamedTuple):
    value: float
    resonant: bool
    case: Optional[str]


def interference_case(s1: int, s2: int) -> Optional[str]:
    """Which of the three correlated-exchange forms (s1, s2) belongs to."""
    if s1 == s2:
        return "equal"
    if s1 == s2 - 1:
        return "second_extra"
    if s1 == s2 + 1:
        return "first_extra"
    return None


def combined_energy(s1: int, s2: int, omega1: float, omega2: float) -> CombinedEnergy:
    """omega = s1 omega1 + s2 omega2 drawn from the waves at the emission vertex."""
    if not omega1 > omega2 > 0:
        raise DomainError(f"require omega1 > omega2 > 0, got {omega1!r}, {omega2!r}")
    value = s1 * omega1 + s2 * omega2
    return CombinedEnergy(value, value > 0, interference_case(s1, s2))


def intermediate_momentum(p_i, k_prime, s1, s2, k1, k2) -> FourVector:
    """q_i = p_i - k' + s1 k1 + s2 k2."""
    return p_i - k_prime + s1 * k1 + s2 * k2


def resonant_frequency(p_i: FourVector, n_prime: FourVector, omega: float) -> float:
    """Spontaneous-photon frequency that puts q_i on the mass shell."""
    np_prime = n_prime.dot(p_i)
    if np_prime <= 0.0:
        raise DomainError("(n' p_i) must be positive")
    omega_i = omega * N_WAVE.dot(p_i) / np_prime
    d_i = omega * N_WAVE.dot(n_prime) / np_prime
    return omega_i / (1.0 + d_i)


def resonant_frequency_interference(a_i: float, theta_i: float, omega: float,
                                    np_i: Optional[float] = None) -> float:
    """Resonant frequency for a photon emitted at cot(theta'/2) = a_i.

    With cot(theta'/2) = a the photon light-cone product obeys
    (n'p)(1 + a^2) = (np)(1 - a^2 + 2a cot(theta_i)), which gives
    omega'_i = omega (1 + a^2) / (1 - a^2 + 2a cot(theta_i)).  Passing
    ``np_i`` = (n p_i) adds the recoil factor 1/(1 + d_i) with
    d_i = 2 omega / ((n p_i)(1 - a^2 + 2a cot(theta_i))).
    """
    if math.sin(theta_i) == 0.0:
        raise SingularConfigurationError("a cot(theta_i) is indeterminate along the wave axis; use resonant_frequency")
    if a_i == 0.0:
        den = 1.0
    else:
        den = 1.0 - a_i * a_i + 2.0 * a_i * math.cos(theta_i) / math.sin(theta_i)
    if abs(den) < 1e-14:
        raise SingularConfigurationError(f"1 - a^2 + 2a cot(theta_i) vanishes for a={a_i!r}, theta_i={theta_i!r}")
    w = omega * (1.0 + a_i * a_i) / den
    if np_i is None:
        return w
    if not np_i > 0:
        raise DomainError("(n p_i) must be positive")
    return w / (1.0 + 2.0 * omega / (np_i * den))


def resonance_parameter(omega_prime: float, omega_res: float, omega: float, tau: float) -> float:
    """beta = (1 - omega'/omega'_res) * omega tau / 2."""
    return (1.0 - omega_prime / omega_res) * omega * tau / 2.0


def transit_width(omega_res: float, omega: float, tau: float) -> float:
    """Gamma = sqrt(2) omega'_res / (omega tau)."""
    if not omega * tau > 0:
        raise DomainError("omega * tau must be positive")
    return math.sqrt(2.0) * omega_res / (omega * tau)


def small_angle_threshold(p_i: FourVector, omega_pm: float) -> float:
    """Order-of-magnitude scattering angle below which diagram (b) interferes.

    Negative values (electron moving against the waves) are returned as 0.
    """
    p = float(np.linalg.norm(p_i.spatial))
    if p <= 0.0:
        raise DomainError("|p_i| must be positive")
    return max(0.0, (1.0 - N_WAVE.dot(p_i) / p_i.t) * omega_pm / p)


def scattering_angle_allowed(theta: float, threshold: float, safety: float = 10.0) -> bool:
    """Reject scattering angles within ``safety`` times the small-angle threshold."""
    return theta > safety * threshold


def scattering_angle(state_i: ElectronState, state_f: ElectronState) -> float:
    c = float(np.dot(state_i.direction, state_f.direction))
    return math.acos(min(1.0, max(-1.0, c)))


def u_invariants(omega: float, p_i: FourVector, k_prime: FourVector, q_i: FourVector):
    """u = 2 omega (n p_i)/m^2 and u' = (n k')/(n q_i)."""
    nq = N_WAVE.dot(q_i)
    if nq <= 0.0:
        raise DomainError("(n q_i) must be positive")
    u = 2.0 * omega * N_WAVE.dot(p_i) / M_E**2
    return u, N_WAVE.dot(k_prime) / nq
