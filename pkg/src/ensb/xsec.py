"""Emission probabilities, field-free baselines and resonant cross sections.

Cross sections are returned in natural units (eV^-2 per steradian, with an
extra eV^-1 when differential in the photon energy); use
:func:`ensb.constants.inv_eV2_to_cm2` for cm^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import ALPHA, M_E, R_E
from .errors import DomainError, KinematicSingularityError
from .kinematics import (ElectronState, FourVector, N_WAVE, PhotonDirection, a_parameter, combined_energy,
                         interference_photon_angle, resonant_frequency, resonance_parameter, transit_width,
                         u_invariants, wave_four_vector)
from .profiles import ProfileParams, ScatteringArgs, profile_partial, profile_res
from .waves import TwoWaveField, alpha0_general, chi_phases, gamma0_general, minus_Q_squared

CHANNELS = ((1, 0), (0, 1), (1, 1))
INTEGRATED_CHANNELS = ((1, 0), (0, 1))


def _check_channel(channel, allowed=CHANNELS):
    channel = tuple(channel)
    if channel not in allowed:
        raise DomainError(f"unsupported channel {channel!r}; expected one of {allowed}")
    return channel


def _require_counter_rotating(fld: TwoWaveField):
    if not fld.counter_rotating:
        raise DomainError("resonant cross sections are implemented for counter-rotating waves only "
                          "(delta1 = -delta2)")


@dataclass(frozen=True)
class EmissionProbability:
    value: float
    channel: tuple
    regime: str

    def __post_init__(self):
        if self.value < 0:
            raise DomainError(f"negative emission probability {self.value!r}")
        if self.regime not in ("general", "interference"):
            raise DomainError(f"unknown regime {self.regime!r}")


@dataclass(frozen=True)
class CrossSectionResult:
    value: float
    differential: str
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise DomainError(f"negative cross section {self.value!r}")
        if self.components:
            total = sum(self.components.values())
            if abs(total - self.value) > 1e-10 * max(abs(self.value), 1e-300):
                raise DomainError("channel decomposition does not sum to the total")


# -- emission vertex ---------------------------------------------------------

def _check_u(u, u_prime):
    if not u > 0:
        raise DomainError(f"u must be positive, got {u!r}")
    if u_prime < 0 or u_prime > u * (1 + 1e-12):
        raise DomainError(f"require 0 <= u' <= u, got u={u!r}, u'={u_prime!r}")


def w2_10(eta01: float, u: float, u_prime: float) -> float:
    """W'' for one photon absorbed from a single wave."""
    _check_u(u, u_prime)
    r = u_prime / u
    return eta01**2 * (1.0 + u_prime**2 / (2.0 * (1.0 + u_prime)) - 4.0 * r * (1.0 - r))


def u_omega(omega: float, omega1: float, omega2: float, u: float, u_prime: float) -> float:
    return 1.0 - omega**2 / (omega1 * omega2) * (1.0 - u_prime / u)


def d_vector(fld: TwoWaveField, gamma01: float, gamma02: float, chi1: float, chi2: float):
    """D = -(eta01 e^{i chi2} gamma02 eps1^- + eta02 e^{i chi1} gamma01 eps2^-)/2."""
    e1 = fld.epsilon(1, -1)
    e2 = fld.epsilon(2, -1)
    c1 = fld.wave1.eta0 * complex(math.cos(chi2), math.sin(chi2)) * gamma02
    c2 = fld.wave2.eta0 * complex(math.cos(chi1), math.sin(chi1)) * gamma01
    return -0.5 * (e1 * c1 + e2 * c2)


def w2_11_general(fld: TwoWaveField, omega: float, u: float, u_prime: float, u_w: float,
                  p_i: FourVector, q_i: FourVector, gamma01: float, gamma02: float,
                  chi1: float, chi2: float) -> float:
    """W'' for one photon absorbed from each wave, including the D-vector terms."""
    _check_u(u, u_prime)
    r = u_prime / u
    D = d_vector(fld, gamma01, gamma02, chi1, chi2)
    Dc = D.conj()
    dd = D.dot(Dc).real
    mix = (Dc.dot(q_i) - Dc.dot(p_i) / (1.0 + u_prime)).real
    bracket = (-4.0 * r * r * u_w**2 * (1.0 - u * u_prime / (2.0 * (1.0 + u_prime)))
               + 4.0 * r * u_w
               - 0.5 * dd * (1.0 + u_prime**2 / (2.0 * (1.0 + u_prime)))
               - 4.0 * r * r / M_E * u * u_w * mix)
    return (fld.wave1.eta0 * fld.wave2.eta0) ** 2 * bracket


# -- resonance kinematics ----------------------------------------------------

@dataclass(frozen=True)
class ResonanceInputs:
    """Geometry and field for a resonant ENSB evaluation.

    The photon direction defaults to the interference direction of the
    initial electron; the final electron azimuth defaults to the initial one.
    """

    state_i: ElectronState
    field: TwoWaveField
    theta_f: float
    phi_f: Optional[float] = None
    photon: Optional[PhotonDirection] = None
    Z: int = 1
    rho: float = 5.0

    def __post_init__(self):
        if self.Z < 1:
            raise DomainError(f"nuclear charge must be a positive integer, got {self.Z!r}")
        if not 0.0 <= self.theta_f <= math.pi:
            raise DomainError(f"theta_f must lie in [0, pi], got {self.theta_f!r}")
        if not self.rho > 0:
            raise DomainError("rho must be positive")
        if self.phi_f is None:
            object.__setattr__(self, "phi_f", self.state_i.azimuth)
        if self.photon is None:
            object.__setattr__(self, "photon", interference_photon_angle(self.state_i))
        _require_counter_rotating(self.field)

    def final_state(self, energy: Optional[float] = None) -> ElectronState:
        E = self.state_i.energy if energy is None else energy
        if E == self.state_i.energy:
            return ElectronState(E, self.state_i.momentum_magnitude, self.theta_f, self.phi_f)
        return ElectronState.from_energy(E, self.theta_f, self.phi_f)


@dataclass(frozen=True)
class ChannelKinematics:
    channel: tuple
    omega: float
    omega_res: float
    n_prime: FourVector
    k_prime: FourVector
    p_i: FourVector
    q_i: FourVector
    u: float
    u_prime: float
    regime: str

    @property
    def nq(self) -> float:
        return N_WAVE.dot(self.q_i)


def channel_kinematics(inputs: ResonanceInputs, channel) -> ChannelKinematics:
    """Resonant photon frequency and intermediate electron momentum for a channel."""
    s1, s2 = _check_channel(channel)
    fld = inputs.field
    ce = combined_energy(s1, s2, fld.wave1.omega, fld.wave2.omega)
    p_i = inputs.state_i.four_momentum()
    n_prime = inputs.photon.null_vector()
    w_res = resonant_frequency(p_i, n_prime, ce.value)
    k_prime = w_res * n_prime
    q_i = p_i - k_prime + wave_four_vector(ce.value)
    u, u_prime = u_invariants(ce.value, p_i, k_prime, q_i)
    if u_prime > u:
        u_prime = u  # rounding at the interference point
    regime = "interference" if minus_Q_squared(p_i, q_i) == 0.0 else "general"
    return ChannelKinematics((s1, s2), ce.value, w_res, n_prime, k_prime, p_i, q_i, u, u_prime, regime)


def _w2(inputs: ResonanceInputs, kin: ChannelKinematics) -> float:
    fld = inputs.field
    if kin.channel == (1, 0):
        return w2_10(fld.wave1.eta0, kin.u, kin.u_prime)
    if kin.channel == (0, 1):
        return w2_10(fld.wave2.eta0, kin.u, kin.u_prime)
    g1 = gamma0_general(fld.wave1.eta0, fld.wave1.omega, kin.p_i, kin.q_i)
    g2 = gamma0_general(fld.wave2.eta0, fld.wave2.omega, kin.p_i, kin.q_i)
    chi1, chi2, _ = chi_phases(kin.p_i, kin.q_i, fld.delta_angle)
    uw = u_omega(kin.omega, fld.wave1.omega, fld.wave2.omega, kin.u, kin.u_prime)
    return w2_11_general(fld, kin.omega, kin.u, kin.u_prime, uw, kin.p_i, kin.q_i, g1, g2, chi1, chi2)


def emission_probability(inputs: ResonanceInputs, channel) -> EmissionProbability:
    """dW'/(d omega' d Omega') at the channel's resonant frequency."""
    kin = channel_kinematics(inputs, channel)
    w2 = _w2(inputs, kin)
    if w2 < 0.0:
        raise DomainError(
            f"W'' for channel {kin.channel} is negative ({w2:.3g}) at u'/u = {kin.u_prime / kin.u:.3g}: the "
            "small-parameter expansion does not hold this far from the interference direction")
    value = ALPHA * M_E**2 * w2 / (4.0 * math.pi * inputs.state_i.energy)
    return EmissionProbability(value, kin.channel, kin.regime)


# -- field-free baselines ----------------------------------------------------

def _transfer(state_i: ElectronState, state_f: ElectronState) -> np.ndarray:
    return state_f.momentum - state_i.momentum


def mott(state_i: ElectronState, state_f: ElectronState, Z: int = 1) -> float:
    """Elastic electron-nucleus cross section dsigma/dOmega_f."""
    q = _transfer(state_i, state_f)
    q2 = float(q @ q)
    if q2 <= 0.0:
        raise DomainError("momentum transfer vanishes: forward Mott cross section diverges")
    num = state_i.energy * state_f.energy + M_E**2 + float(state_i.momentum @ state_f.momentum)
    return 2.0 * Z**2 * R_E**2 * M_E**2 / q2**2 * num


def scattering_partial(q_i: FourVector, p_f: FourVector, q: np.ndarray, Z: int = 1) -> float:
    """Partial scattering cross section for an intermediate electron q_i."""
    q = np.asarray(q, dtype=float)
    q2 = float(q @ q)
    if q2 <= 0.0:
        raise DomainError("momentum transfer vanishes")
    num = M_E**2 + q_i.dot(p_f) + 2.0 * float(q_i.spatial @ p_f.spatial)
    return 2.0 * Z**2 * R_E**2 * M_E**2 / q2**2 * num


def _kappa(state: ElectronState, n_unit: np.ndarray) -> float:
    k = state.energy - float(n_unit @ state.momentum)
    if k <= 0.0:
        raise DomainError("kappa' = E - n'.p must be positive")
    return k


def bh_photon_probability(state_i: ElectronState, state_f: ElectronState, photon: PhotonDirection,
                          omega_prime: float) -> float:
    """Field-free photon emission probability per d omega' d Omega'."""
    if not omega_prime > 0:
        raise DomainError("photon energy must be positive")
    n = photon.unit
    ki, kf = _kappa(state_i, n), _kappa(state_f, n)
    q = _transfer(state_i, state_f)
    nq = float(n @ q)
    return ALPHA / (4.0 * math.pi**2) * (float(q @ q) - nq * nq * M_E**2 / (ki * kf)) / (omega_prime * ki * kf)


def bethe_heitler(state_i: ElectronState, state_f: ElectronState, photon: PhotonDirection,
                  omega_prime: float, Z: int = 1) -> float:
    """dsigma_BH/(d omega' d Omega' d Omega_f) as Mott times the emission probability."""
    return mott(state_i, state_f, Z) * bh_photon_probability(state_i, state_f, photon, omega_prime)


# -- resonant cross sections -------------------------------------------------

def _profile_channel(channel):
    return (1, 0) if channel == (0, 1) else channel


def resonant_summed_xsec(inputs: ResonanceInputs, omega_prime: float, channels=CHANNELS) -> CrossSectionResult:
    """Resonant cross section summed over stimulated photon numbers.

    Differential in omega', Omega' and Omega_f; each channel is evaluated at
    its own resonance parameter for the given photon energy.
    """
    if not omega_prime > 0:
        raise DomainError("photon energy must be positive")
    tau = inputs.field.tau
    sigma_m = mott(inputs.state_i, inputs.final_state(), inputs.Z)
    comps = {}
    for ch in (_check_channel(c) for c in channels):
        kin = channel_kinematics(inputs, ch)
        dw = emission_probability(inputs, ch).value
        beta = resonance_parameter(omega_prime, kin.omega_res, kin.omega, tau)
        prof = profile_res(ProfileParams(beta, inputs.rho, _profile_channel(ch)))
        comps[ch] = inputs.state_i.energy * tau**2 / (2.0 * kin.nq**2) * sigma_m * kin.omega_res * dw * prof
    return CrossSectionResult(sum(comps.values()), "d omega' d Omega' d Omega_f", comps)


def resonant_integrated_xsec(inputs: ResonanceInputs) -> CrossSectionResult:
    """Resonant cross section integrated over the peak, differential in Omega' and Omega_f."""
    tau = inputs.field.tau
    sigma_m = mott(inputs.state_i, inputs.final_state(), inputs.Z)
    comps = {}
    for ch in INTEGRATED_CHANNELS:
        kin = channel_kinematics(inputs, ch)
        dw = emission_probability(inputs, ch).value
        comps[ch] = (math.sqrt(math.pi / 2.0) * inputs.state_i.energy * tau / (kin.nq**2 * kin.omega)
                     * sigma_m * kin.omega_res**2 * dw)
    return CrossSectionResult(sum(comps.values()), "d Omega' d Omega_f", comps)


def scattering_args(inputs: ResonanceInputs, q_i: FourVector, p_f: FourVector) -> ScatteringArgs:
    """Multiphoton arguments at the nucleus vertex for the electron q_i -> p_f."""
    fld = inputs.field
    g1 = gamma0_general(fld.wave1.eta0, fld.wave1.omega, q_i, p_f)
    g2 = gamma0_general(fld.wave2.eta0, fld.wave2.omega, q_i, p_f)
    chi1, chi2, _ = chi_phases(q_i, p_f, fld.delta_angle)
    a0 = alpha0_general(fld, fld.rotation_sign, q_i, p_f)
    return ScatteringArgs(g1, g2, a0, chi1, chi2, fld.delta_angle, fld.rotation_sign, fld.wave1.envelope)


def resonant_partial_xsec(inputs: ResonanceInputs, channel, l1: int, l2: int, omega_prime: float,
                          final_energy: str = "elastic") -> CrossSectionResult:
    """Partial resonant cross section for l1, l2 photons exchanged at the nucleus vertex.

    ``final_energy='elastic'`` keeps E_f = E_i; ``'conserved'`` uses
    E_f = q_i0 - (l1 + s1) omega1 - (l2 + s2) omega2.
    """
    ch = _check_channel(channel)
    fld = inputs.field
    tau = fld.tau
    kin = channel_kinematics(inputs, ch)
    s1, s2 = ch
    if final_energy == "elastic":
        state_f = inputs.final_state()
    elif final_energy == "conserved":
        E_f = kin.q_i.t - (l1 + s1) * fld.wave1.omega - (l2 + s2) * fld.wave2.omega
        if E_f <= M_E:
            raise DomainError(f"final energy {E_f!r} eV below the rest mass for l=({l1},{l2})")
        state_f = inputs.final_state(E_f)
    else:
        raise DomainError(f"final_energy must be 'elastic' or 'conserved', got {final_energy!r}")
    p_f = state_f.four_momentum()
    dsig = scattering_partial(kin.q_i, p_f, _transfer(inputs.state_i, state_f), inputs.Z)
    dw = emission_probability(inputs, ch).value
    beta = resonance_parameter(omega_prime, kin.omega_res, kin.omega, tau)
    prof = profile_partial(l1, l2, ProfileParams(beta, inputs.rho, _profile_channel(ch)),
                           scattering_args(inputs, kin.q_i, p_f))
    value = omega_prime * tau**2 * inputs.state_i.energy / (2.0 * kin.nq**2) * dw * dsig * prof
    return CrossSectionResult(value, "d omega' d Omega' d Omega_f", {(ch, l1, l2): value})


# -- enhancement ratio -------------------------------------------------------

@dataclass(frozen=True)
class RatioResult:
    r10: float
    r01: float

    @property
    def total(self) -> float:
        return self.r10 + self.r01


def ratio_closed_form(state_i: ElectronState, theta_f: float, fld: TwoWaveField, channel=(1, 0),
                      phi_f: Optional[float] = None) -> float:
    """Enhancement ratio of the integrated resonant cross section over Bethe-Heitler.

    Uses the interference photon direction, elastic final electron and
    f = (k'_f/k'_i) / (4 sin^2(theta/2) - (cos th'_f - cos th'_i)^2 m^2/(k'_i k'_f)),
    with th' the angles between the photon and each electron momentum.
    """
    ch = _check_channel(channel, INTEGRATED_CHANNELS)
    _require_counter_rotating(fld)
    j = 1 if ch == (1, 0) else 2
    wave = fld.wave(j)
    tau = fld.tau
    inputs = ResonanceInputs(state_i, fld, theta_f, phi_f)
    state_f = inputs.final_state()
    n = inputs.photon.unit
    ki, kf = _kappa(state_i, n), _kappa(state_f, n)
    cos_i = float(n @ state_i.direction)
    cos_f = float(n @ state_f.direction)
    cos_t = float(state_i.direction @ state_f.direction)
    den = 2.0 * (1.0 - cos_t) - (cos_f - cos_i) ** 2 * M_E**2 / (ki * kf)
    if den <= 0.0:
        raise KinematicSingularityError(f"f-function denominator {den!r} is not positive")
    f = (kf / ki) / den
    w_res = resonant_frequency(state_i.four_momentum(), inputs.photon.null_vector(), wave.omega)
    p2 = state_i.momentum_magnitude**2
    return (math.pi * math.sqrt(2.0 * math.pi) / 8.0 * wave.eta0**2 * (wave.omega * tau) ** 2
            * (w_res / wave.omega) * (M_E**2 / p2) * f)


def bandwidth(tau: float) -> float:
    """Photon-energy window 4/tau that converts the integrated resonant peak into a
    per-unit-energy comparison with the Bethe-Heitler spectrum."""
    return 4.0 / tau


def ratio_direct(inputs: ResonanceInputs) -> RatioResult:
    """Integrated resonant channels divided by Bethe-Heitler at omega'_res times 4/tau."""
    integ = resonant_integrated_xsec(inputs)
    state_f = inputs.final_state()
    out = {}
    for ch in INTEGRATED_CHANNELS:
        kin = channel_kinematics(inputs, ch)
        bh = bethe_heitler(inputs.state_i, state_f, inputs.photon, kin.omega_res, inputs.Z)
        if not bh > 0.0:
            raise KinematicSingularityError(f"Bethe-Heitler cross section {bh!r} is not positive")
        out[ch] = integ.components[ch] / (bh * bandwidth(inputs.field.tau))
    return RatioResult(out[(1, 0)], out[(0, 1)])


def ratio_components(inputs: ResonanceInputs) -> dict:
    """Convenience bundle used by scans: closed-form and direct ratios."""
    fld = inputs.field
    direct = ratio_direct(inputs)
    return {
        "R10_closed": ratio_closed_form(inputs.state_i, inputs.theta_f, fld, (1, 0), inputs.phi_f),
        "R10_direct": direct.r10,
        "R01": direct.r01,
        "R_res": direct.total,
    }


def resonance_summary(inputs: ResonanceInputs, channel=(1, 0)) -> dict:
    """Resonant frequency, transit width and a-parameter for reporting."""
    kin = channel_kinematics(inputs, channel)
    return {
        "a_i": a_parameter(inputs.state_i),
        "theta_photon": inputs.photon.polar_angle,
        "omega_res": kin.omega_res,
        "Gamma": transit_width(kin.omega_res, kin.omega, inputs.field.tau),
        "u": kin.u,
        "u_prime": kin.u_prime,
        "regime": kin.regime,
    }
