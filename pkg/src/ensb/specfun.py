"""Special functions: Bessel J_n, complex erf, and the two-wave series I_{n1 n2}.

I_{n1 n2} = exp(-i(n1 chi1 + n2 chi2))
            * sum_s exp(i s (chi1 +- chi2 - Delta)) J_s(alpha) J_{n1-s}(gamma1) J_{n2 -+ s}(gamma2)

Every term is bounded by |J_s(alpha)|, so truncating s beyond the Bessel
turning point of alpha controls the error independently of n1, n2 and the
gammas.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import AccuracyWarning, ConvergenceError, DomainError

ERF_RE_MAX = 20.0
ERF_IM_MAX = 10.0
_TAIL_RUN = 5


def bessel_j(n, x):
    """Integer-order Bessel function of the first kind.

    Vectorised over ``n`` and ``x``.  Values that underflow below the
    smallest normal double are returned as exact zeros; use
    :func:`bessel_underflows` to detect that case.
    """
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        if np.any(n != np.round(n)):
            raise DomainError("bessel_j takes integer orders only")
        n = n.astype(np.int64)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("bessel_j argument must be finite")
    val = special.jv(n, x)
    val = np.where(np.abs(val) < np.finfo(float).tiny, 0.0, val)
    return val if val.ndim else float(val)


def bessel_underflows(n, x) -> bool:
    """True when J_n(x) is nonzero mathematically but below double range."""
    if x == 0:
        return False
    return special.jv(n, x) == 0.0 or abs(special.jv(n, x)) < np.finfo(float).tiny


def complex_erf(z):
    """Error function of complex argument.

    Accurate to ~1e-13 relative on |Re z| <= 20, |Im z| <= 10; outside that
    box an :class:`AccuracyWarning` is issued.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z.real) > ERF_RE_MAX) or np.any(np.abs(z.imag) > ERF_IM_MAX):
        warnings.warn("complex_erf evaluated outside |Re z|<=20, |Im z|<=10", AccuracyWarning, stacklevel=2)
    val = special.erf(z)
    return val if val.ndim else complex(val)


def scaled_erf_plus_one(x, b):
    """exp(-b^2) * (erf(x + i b) + 1) without overflow for large b.

    Built on the Faddeeva function w(z) = exp(-z^2) erfc(-i z), taking the
    branch whose argument stays in the upper half plane.
    """
    x = np.asarray(x, dtype=float)
    b = np.asarray(b, dtype=float)
    phase = np.exp(-x * x - 2j * x * b)
    neg = x < 0
    # x < 0: erf(z)+1 = erfc(-z) = exp(-z^2) w(-i z)
    # x >= 0: erf(z)+1 = 2 - erfc(z) = 2 - exp(-z^2) w(i z)
    w_neg = special.wofz(b - 1j * x)
    w_pos = special.wofz(-b + 1j * x)
    out = np.where(neg, phase * w_neg, 2.0 * np.exp(-b * b) - phase * w_pos)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class IArgs:
    chi1: float = 0.0
    chi2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    alpha: float = 0.0
    delta_angle: float = 0.0
    rotation_sign: int = 1

    def __post_init__(self):
        for name in ("chi1", "chi2", "gamma1", "gamma2", "alpha", "delta_angle"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise DomainError("gamma arguments are non-negative")
        if self.rotation_sign not in (1, -1):
            raise DomainError("rotation_sign must be +1 or -1")


@dataclass(frozen=True)
class SeriesControl:
    absolute_tolerance: float = 1e-12
    max_terms: int = 10**6

    def __post_init__(self):
        if not self.absolute_tolerance > 0:
            raise DomainError("tolerance must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be positive")


DEFAULT_CONTROL = SeriesControl()


def series_half_width(alpha: float) -> int:
    """Half-width of the s window: |alpha| + 10 sqrt(|alpha| + 1) + 10."""
    a = abs(alpha)
    return int(math.ceil(a + 10.0 * math.sqrt(a + 1.0) + 10.0))


def _s_window(args: IArgs, ctrl: SeriesControl):
    half = series_half_width(args.alpha)
    while True:
        if 2 * half + 1 > ctrl.max_terms:
            raise ConvergenceError(
                f"I-series needs more than max_terms={ctrl.max_terms} terms for alpha={args.alpha!r}",
                partial=None, bound=None)
        s = np.arange(-half, half + 1)
        js = special.jv(s, args.alpha)
        edge = np.concatenate([np.abs(js[:_TAIL_RUN]), np.abs(js[-_TAIL_RUN:])])
        if np.all(edge < ctrl.absolute_tolerance):
            return s, js
        half *= 2


def i_two_wave(n1: int, n2: int, args: IArgs, ctrl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Two-wave generalized Bessel function I_{n1 n2} for circular polarization."""
    s, js = _s_window(args, ctrl)
    sg = args.rotation_sign
    psi = args.chi1 + sg * args.chi2 - args.delta_angle
    terms = np.exp(1j * s * psi) * js * special.jv(n1 - s, args.gamma1) * special.jv(n2 - sg * s, args.gamma2)
    total = terms.sum()
    return complex(np.exp(-1j * (n1 * args.chi1 + n2 * args.chi2)) * total)


def i_two_wave_table(n1_values, n2_values, args: IArgs, ctrl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
    """I_{n1 n2} on the grid n1_values x n2_values.

    The series is a product of two Bessel matrices with a diagonal phase
    weight, so the whole table costs one matrix multiplication.
    """
    n1 = np.asarray(n1_values, dtype=np.int64)
    n2 = np.asarray(n2_values, dtype=np.int64)
    s, js = _s_window(args, ctrl)
    sg = args.rotation_sign
    psi = args.chi1 + sg * args.chi2 - args.delta_angle
    weight = np.exp(1j * s * psi) * js
    m1 = special.jv(n1[:, None] - s[None, :], args.gamma1)
    m2 = special.jv(n2[:, None] - sg * s[None, :], args.gamma2)
    table = (m1 * weight[None, :]) @ m2.T
    phase = np.exp(-1j * (n1[:, None] * args.chi1 + n2[None, :] * args.chi2))
    return phase * table


def index_range(gamma: float, alpha: float, margin: int = 20) -> np.ndarray:
    """Symmetric index range holding all non-negligible I_{n1 n2} for one wave."""
    g = abs(gamma)
    half = series_half_width(alpha) + int(math.ceil(g + 10.0 * math.sqrt(g + 1.0))) + margin
    return np.arange(-half, half + 1)


def i_interference(n1: int, n2: int, alpha: float, delta_angle: float = 0.0, rotation_sign: int = 1) -> complex:
    """I_{n1 n2} with both gammas zero: exp(-i n1 Delta) J_{n1}(alpha) delta_{n1, +-n2}."""
    if n1 != rotation_sign * n2:
        return 0j
    return complex(np.exp(-1j * n1 * delta_angle) * special.jv(n1, alpha))
