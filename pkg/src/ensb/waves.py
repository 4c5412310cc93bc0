"""Two-wave laser field and the multiphoton arguments at each vertex."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import CONSTANTS, M_E, PhysicalConstants, ps_to_inv_eV
from .errors import DomainError, NumericalConsistencyError, PhysicsRegimeWarning
from .kinematics import ComplexFourVector, FourVector, N_WAVE

EPS = float(np.finfo(float).eps)
# |Q_perp| below this many ulps of its inputs is rounding residue
Q_PERP_ULPS = 64
ETA_MAX = 0.3
ETA_WARN = 0.1
OMEGA_TAU_MIN = 1.0
OMEGA_TAU_WARN = 10.0


def envelope_gaussian(phi):
    """Pulse envelope exp(-phi^2) in the dimensionless wave variable."""
    return np.exp(-np.square(phi))


ENVELOPES = {"gaussian": envelope_gaussian}


def eta_from_field_strength(F0: float, omega: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Classical intensity parameter eta0 = e F0 / (m omega).

    F0 in V/cm, omega in eV.  e F0 in eV/cm is numerically F0; one power of
    hbar*c turns it into eV^2.
    """
    if not (F0 > 0 and omega > 0):
        raise DomainError("field strength and frequency must be positive")
    return F0 * constants.hbar_c_eV_cm / (constants.electron_mass_eV * omega)


def field_strength_from_eta(eta0: float, omega: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Inverse of :func:`eta_from_field_strength`; returns V/cm."""
    return eta0 * constants.electron_mass_eV * omega / constants.hbar_c_eV_cm


def quasimono_margin(omega: float, tau: float) -> float:
    """omega * tau; the quasimonochromatic approximation needs it large."""
    if not tau > 0:
        raise DomainError("pulse width must be positive")
    return omega * tau


def check_quasimono(omega: float, tau: float) -> float:
    wt = quasimono_margin(omega, tau)
    if wt < OMEGA_TAU_MIN:
        raise DomainError(f"omega*tau = {wt:.4g} < {OMEGA_TAU_MIN}: pulse is not quasimonochromatic")
    if wt < OMEGA_TAU_WARN:
        warnings.warn(f"omega*tau = {wt:.4g} is small; quasimonochromatic approximation is marginal",
                      PhysicsRegimeWarning, stacklevel=3)
    return wt


@dataclass(frozen=True)
class LaserWave:
    omega: float
    eta0: float
    delta: int = 1
    tau: float = math.inf
    envelope: str = "gaussian"

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"wave frequency must be positive, got {self.omega!r}")
        if not 0 <= self.eta0 < ETA_MAX:
            raise DomainError(f"eta0 = {self.eta0!r} outside the moderately-strong-field range [0, {ETA_MAX})")
        if self.eta0 > ETA_WARN:
            warnings.warn(f"eta0 = {self.eta0} > {ETA_WARN}: expansion in eta0 becomes crude",
                          PhysicsRegimeWarning, stacklevel=3)
        if self.delta not in (1, -1):
            raise DomainError(f"only circular polarization (delta = +-1) is supported, got {self.delta!r}")
        if self.envelope not in ENVELOPES:
            raise DomainError(f"unknown envelope {self.envelope!r}; available: {sorted(ENVELOPES)}")
        check_quasimono(self.omega, self.tau)

    @classmethod
    def from_lab(cls, omega_eV, *, eta0=None, field_strength_V_cm=None, delta=1, tau_ps=math.inf,
                 envelope="gaussian"):
        if (eta0 is None) == (field_strength_V_cm is None):
            raise DomainError("give exactly one of eta0 or field_strength_V_cm")
        if eta0 is None:
            eta0 = eta_from_field_strength(field_strength_V_cm, omega_eV)
        return cls(omega_eV, eta0, delta, ps_to_inv_eV(tau_ps), envelope)

    @property
    def omega_tau(self) -> float:
        return self.omega * self.tau

    @property
    def field_strength_V_cm(self) -> float:
        return field_strength_from_eta(self.eta0, self.omega)

    def envelope_fn(self):
        return ENVELOPES[self.envelope]


@dataclass(frozen=True)
class TwoWaveField:
    wave1: LaserWave
    wave2: LaserWave
    delta_angle: float = 0.0

    def __post_init__(self):
        if not self.wave1.omega > self.wave2.omega:
            raise DomainError(
                f"wave ordering requires omega1 > omega2, got {self.wave1.omega!r} <= {self.wave2.omega!r}")

    @classmethod
    def from_lab(cls, omega1_eV, omega2_eV, eta01, eta02, tau_ps, delta_deg=0.0, delta1=1, delta2=-1):
        return cls(
            LaserWave.from_lab(omega1_eV, eta0=eta01, delta=delta1, tau_ps=tau_ps),
            LaserWave.from_lab(omega2_eV, eta0=eta02, delta=delta2, tau_ps=tau_ps),
            math.radians(delta_deg),
        )

    def wave(self, j: int) -> LaserWave:
        return (self.wave1, self.wave2)[j - 1]

    @property
    def counter_rotating(self) -> bool:
        return self.wave1.delta == -self.wave2.delta

    @property
    def rotation_sign(self) -> int:
        """+1 selects alpha_{0+} (counter-rotating), -1 selects alpha_{0-}."""
        return 1 if self.counter_rotating else -1

    @property
    def omega_plus(self) -> float:
        return self.wave1.omega + self.wave2.omega

    @property
    def omega_minus(self) -> float:
        return self.wave1.omega - self.wave2.omega

    @property
    def tau(self) -> float:
        """Common pulse width; the resonant formulas assume tau1 = tau2."""
        if self.wave1.tau != self.wave2.tau:
            raise DomainError("resonant cross sections assume equal pulse widths tau1 = tau2")
        return self.wave1.tau

    def polarization_axes(self, j: int):
        """(e_jx, e_jy) as 3-vectors; wave 2 axes are rotated by delta_angle about z."""
        ang = 0.0 if j == 1 else self.delta_angle
        ex = np.array([math.cos(ang), math.sin(ang), 0.0])
        ey = np.array([-math.sin(ang), math.cos(ang), 0.0])
        return ex, ey

    def epsilon(self, j: int, sign: int) -> ComplexFourVector:
        """eps_j^(+-) = e_jx +- i delta_j e_jy as a four-vector with zero time part."""
        ex, ey = self.polarization_axes(j)
        v = ex + sign * 1j * self.wave(j).delta * ey
        return ComplexFourVector(0j, complex(v[0]), complex(v[1]), complex(v[2]))


def combination_frequencies(field: TwoWaveField):
    return field.omega_plus, field.omega_minus


@dataclass(frozen=True)
class VertexParams:
    gamma01: float
    gamma02: float
    alpha0_plus: float
    alpha0_minus: float
    chi1: float = 0.0
    chi2: float = 0.0


def _transverse_Q(p: FourVector, p_prime: FourVector):
    np_, npp = N_WAVE.dot(p), N_WAVE.dot(p_prime)
    if np_ <= 0 or npp <= 0:
        raise DomainError("(n p) and (n p') must be positive")
    return p.x / np_ - p_prime.x / npp, p.y / np_ - p_prime.y / npp, np_, npp


def minus_Q_squared(p: FourVector, p_prime: FourVector) -> float:
    """-Q^2 for Q = p/(np) - p'/(np').

    (n Q) = 0 identically, so -Q^2 equals |Q_perp|^2; the transverse form is
    used because the Minkowski form cancels O(1) terms.  The Minkowski value
    is kept as a consistency guard.  A |Q_perp| within ``Q_PERP_ULPS``
    rounding units of the transverse inputs is interference-geometry residue
    and is returned as 0.
    """
    qx, qy, np_, npp = _transverse_Q(p, p_prime)
    perp2 = qx * qx + qy * qy
    Q = p / np_ - p_prime / npp
    mink = -Q.square()
    if abs(mink) < 1e-12:
        mink = 0.0
    if abs(mink - perp2) > 1e-9 * max(1.0, perp2, Q.t * Q.t):
        raise NumericalConsistencyError(f"-Q^2 = {mink!r} inconsistent with |Q_perp|^2 = {perp2!r}")
    scale = abs(p.x / np_) + abs(p.y / np_) + abs(p_prime.x / npp) + abs(p_prime.y / npp)
    if math.sqrt(perp2) <= Q_PERP_ULPS * EPS * scale:
        return 0.0
    return perp2


def gamma0_general(eta0: float, omega_j: float, p: FourVector, p_prime: FourVector) -> float:
    """Bunkin-Fedorov parameter eta0 (m/omega_j) sqrt(-Q^2)."""
    return eta0 * M_E / omega_j * math.sqrt(minus_Q_squared(p, p_prime))


class Phases(NamedTuple):
    chi1: float
    chi2: float
    defined: bool


def chi_phases(p: FourVector, p_prime: FourVector, delta_angle: float, tol: float = 1e-14) -> Phases:
    """Azimuth of Q_perp relative to e_1x, and the same relative to e_2x.

    When Q_perp vanishes the phases are irrelevant (they multiply a zero
    gamma); ``defined`` is then False and chi1 is reported as 0.
    """
    qx, qy, np_, npp = _transverse_Q(p, p_prime)
    scale = abs(p.x / np_) + abs(p.y / np_) + abs(p_prime.x / npp) + abs(p_prime.y / npp)
    if math.hypot(qx, qy) <= tol * max(scale, 1.0):
        return Phases(0.0, -delta_angle, False)
    chi1 = math.atan2(qy, qx)
    return Phases(chi1, chi1 - delta_angle, True)


def alpha0_general(field: TwoWaveField, sign: int, p: FourVector, p_prime: FourVector) -> float:
    """Interference parameter eta01 eta02 m^2/(omega1 +- omega2) (1/(np) - 1/(np'))."""
    np_, npp = N_WAVE.dot(p), N_WAVE.dot(p_prime)
    if np_ <= 0 or npp <= 0:
        raise DomainError("(n p) and (n p') must be positive")
    w = field.omega_plus if sign > 0 else field.omega_minus
    eta = field.wave1.eta0 * field.wave2.eta0
    return eta * M_E**2 / w * (npp - np_) / (np_ * npp)


def emission_vertex_params(omega: float, u: float, u_prime: float, field: TwoWaveField,
                           chi1: float = 0.0, chi2: float | None = None) -> VertexParams:
    """Multiphoton arguments at the photon-emission vertex at resonance."""
    if u <= 0:
        raise DomainError("u must be positive")
    r = u_prime / u
    if r < 0 or r > 1 + 1e-12:
        raise DomainError(f"require 0 <= u' <= u, got u'/u = {r!r}")
    r = min(r, 1.0)
    root = math.sqrt(r * (1.0 - r))
    eta1, eta2 = field.wave1.eta0, field.wave2.eta0
    return VertexParams(
        gamma01=2.0 * eta1 * omega / field.wave1.omega * root,
        gamma02=2.0 * eta2 * omega / field.wave2.omega * root,
        alpha0_plus=2.0 * eta1 * eta2 * omega / field.omega_plus * r,
        alpha0_minus=2.0 * eta1 * eta2 * omega / field.omega_minus * r,
        chi1=chi1,
        chi2=chi1 - field.delta_angle if chi2 is None else chi2,
    )


def scattering_vertex_gamma(field: TwoWaveField, a_i: float, a_f: float, dphi: float):
    """(gamma01, gamma02) at the nucleus-scattering vertex via the a-parameters."""
    if a_i < 0 or a_f < 0:
        raise DomainError("a-parameters are non-negative")
    root = math.sqrt(max(0.0, a_i * a_i + a_f * a_f - 2.0 * a_i * a_f * math.cos(dphi)))
    return tuple(field.wave(j).eta0 * M_E / field.wave(j).omega * root for j in (1, 2))
