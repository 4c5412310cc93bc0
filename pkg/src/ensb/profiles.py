"""Resonance peak profiles.

P^(1,0)(beta) = exp(-2 beta^2) int_{-rho}^{rho} dphi/(4 rho) |erf(phi + i beta) + 1|^2
P^(1,1)(beta) = exp(-beta^2)   int_{-rho}^{rho} dphi/(8 rho) |erf(sqrt2 phi + i beta/sqrt2) + 1|^2

The exponential prefactors are folded into the erf factor (see
:func:`ensb.specfun.scaled_erf_plus_one`) so large |beta| never overflows.
Partial profiles additionally weight the integrand by |I_{l1+s1, l2+s2}(phi)|^2
with envelope-modulated multiphoton arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .specfun import DEFAULT_CONTROL, IArgs, SeriesControl, i_two_wave, i_two_wave_table, index_range, \
    scaled_erf_plus_one
from .waves import ENVELOPES

CHANNELS = ((1, 0), (0, 1), (1, 1))
PROFILE_TOL = 1e-9
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ProfileParams:
    beta: float
    rho: float = 5.0
    channel: tuple = (1, 0)

    def __post_init__(self):
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho!r}")
        if tuple(self.channel) not in CHANNELS:
            raise DomainError(f"unsupported channel {self.channel!r}; expected one of {CHANNELS}")
        object.__setattr__(self, "channel", tuple(self.channel))


def erf_weight(phi, beta, channel):
    """Integrand weight |exp(.) (erf + 1)|^2 / (4 rho or 8 rho, without the rho)."""
    if channel == (1, 1):
        return np.abs(scaled_erf_plus_one(SQRT2 * np.asarray(phi), beta / SQRT2)) ** 2 / 8.0
    return np.abs(scaled_erf_plus_one(phi, beta)) ** 2 / 4.0


def _quad(fn, rho, tol):
    value, err, info, *rest = integrate.quad(fn, -rho, rho, epsabs=tol * 1e-2, epsrel=1e-12, limit=400,
                                             points=[0.0], full_output=1)
    if rest or err > tol:
        raise ConvergenceError(f"profile quadrature did not converge (error estimate {err:.3g})",
                               partial=value, bound=err)
    return value


def profile_res(params: ProfileParams, tol: float = PROFILE_TOL) -> float:
    """Summed resonance profile P_res for one channel; (0,1) shares the (1,0) form."""
    beta, rho, ch = params.beta, params.rho, params.channel
    return _quad(lambda phi: float(erf_weight(phi, beta, ch)), rho, tol) / rho


@dataclass(frozen=True)
class ScatteringArgs:
    """Peak multiphoton arguments at the nucleus-scattering vertex.

    Along the pulse gamma_j(phi) = gamma0j g(phi) and alpha(phi) = alpha0 g(phi)^2.
    """

    gamma01: float = 0.0
    gamma02: float = 0.0
    alpha0: float = 0.0
    chi1: float = 0.0
    chi2: float = 0.0
    delta_angle: float = 0.0
    rotation_sign: int = 1
    envelope: str = "gaussian"
    control: SeriesControl = field(default=DEFAULT_CONTROL)

    def at(self, phi: float) -> IArgs:
        g = float(ENVELOPES[self.envelope](phi))
        return IArgs(self.chi1, self.chi2, self.gamma01 * g, self.gamma02 * g, self.alpha0 * g * g,
                     self.delta_angle, self.rotation_sign)


def profile_partial(l1: int, l2: int, params: ProfileParams, scattering: ScatteringArgs,
                    tol: float = PROFILE_TOL) -> float:
    """Partial profile P_{l1 l2}: the summed profile weighted by |I_{l1+s1, l2+s2}(phi)|^2."""
    s1, s2 = (1, 0) if params.channel == (0, 1) else params.channel
    n1, n2 = l1 + s1, l2 + s2
    beta, rho, ch = params.beta, params.rho, params.channel

    def integrand(phi):
        ival = i_two_wave(n1, n2, scattering.at(phi), scattering.control)
        return float(erf_weight(phi, beta, ch)) * abs(ival) ** 2

    return _quad(integrand, rho, tol) / rho


def profile_partial_table(params: ProfileParams, scattering: ScatteringArgs, nodes: int = 200):
    """All partial profiles at once on a fixed Gauss-Legendre rule.

    Returns ``(l1_values, l2_values, table)`` with ``table[i, j]`` the
    partial profile for (l1_values[i], l2_values[j]).  Intended for
    spectrum decompositions and normalization checks.
    """
    s1, s2 = (1, 0) if params.channel == (0, 1) else params.channel
    rho = params.rho
    n1 = index_range(scattering.gamma01, scattering.alpha0)
    n2 = index_range(scattering.gamma02, scattering.alpha0)
    x, w = np.polynomial.legendre.leggauss(nodes)
    # split at 0 so both halves see a smooth integrand
    phis = np.concatenate([0.5 * rho * (x - 1.0), 0.5 * rho * (x + 1.0)])
    weights = np.concatenate([0.5 * rho * w, 0.5 * rho * w])
    acc = np.zeros((n1.size, n2.size))
    for phi, wt in zip(phis, weights):
        tab = i_two_wave_table(n1, n2, scattering.at(phi), scattering.control)
        acc += wt * float(erf_weight(phi, params.beta, params.channel)) * np.abs(tab) ** 2
    return n1 - s1, n2 - s2, acc / rho


def gaussian_envelope(beta):
    """Reference curve exp(-2 beta^2)."""
    return np.exp(-2.0 * np.square(beta))
