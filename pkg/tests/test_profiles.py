import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from ensb.errors import ConvergenceError, DomainError
from ensb.profiles import (ProfileParams, ScatteringArgs, erf_weight, gaussian_envelope, profile_partial,
                           profile_partial_table, profile_res)
from ensb.specfun import SeriesControl

ORACLE = json.loads((Path(__file__).parent / "data" / "profile_oracle.json").read_text())
RHO = {"5": 5.0, "sqrt2": math.sqrt(2.0)}
# max of P(beta)/P(0)/exp(-2 beta^2) on [0, 3], read off the Simpson oracle
DECAY_CONSTANT = {"5": 1.7365e5, "sqrt2": 7.7510e5}


@pytest.mark.parametrize("key", ["5", "sqrt2"])
def test_matches_simpson_oracle(key):
    betas = ORACLE["beta"][::8]
    ref = ORACLE["P10"][key][::8]
    for b, r in zip(betas, ref):
        assert profile_res(ProfileParams(b, RHO[key])) == pytest.approx(r, abs=1e-8)


def test_peak_value():
    assert profile_res(ProfileParams(0.0)) == pytest.approx(0.92021154392, abs=1e-10)


@given(st.floats(min_value=0, max_value=6), st.sampled_from([(1, 0), (0, 1), (1, 1)]))
def test_symmetric_and_peaked(beta, channel):
    p = profile_res(ProfileParams(beta, channel=channel))
    assert p >= 0
    assert p == pytest.approx(profile_res(ProfileParams(-beta, channel=channel)), abs=1e-12)
    assert p <= profile_res(ProfileParams(0.0, channel=channel)) + 1e-12


def test_channel_01_shares_form():
    assert profile_res(ProfileParams(0.7, channel=(0, 1))) == profile_res(ProfileParams(0.7))


@pytest.mark.parametrize("key", ["5", "sqrt2"])
def test_decay_bound(key):
    rho = RHO[key]
    p0 = profile_res(ProfileParams(0.0, rho))
    for b in np.linspace(0, 3, 31):
        assert profile_res(ProfileParams(b, rho)) / p0 <= math.exp(-2 * b * b) * DECAY_CONSTANT[key]


@given(st.floats(min_value=-3, max_value=3), st.floats(min_value=0.5, max_value=8))
@settings(max_examples=25, deadline=None)
def test_channel_11_is_rescaled_10(beta, rho):
    # substituting psi = sqrt2 phi: P11(beta; rho) = P10(beta/sqrt2; sqrt2 rho) / 2
    p11 = profile_res(ProfileParams(beta, rho, (1, 1)))
    p10 = profile_res(ProfileParams(beta / math.sqrt(2), math.sqrt(2) * rho))
    assert p11 == pytest.approx(p10 / 2, abs=1e-9)


def test_integral_over_beta():
    total, _ = integrate.quad(lambda b: profile_res(ProfileParams(b)), -10, 10, limit=200)
    assert total == pytest.approx(math.sqrt(math.pi / 2), rel=0.02)


def test_erf_weight_direct():
    for phi, beta in ((0.3, 1.2), (-2.0, 0.5)):
        direct = math.exp(-2 * beta * beta) * abs(special.erf(complex(phi, beta)) + 1) ** 2 / 4
        assert erf_weight(phi, beta, (1, 0)) == pytest.approx(direct, rel=1e-12)
        b2 = beta / math.sqrt(2)
        direct = math.exp(-beta * beta) * abs(special.erf(complex(math.sqrt(2) * phi, b2)) + 1) ** 2 / 8
        assert erf_weight(phi, beta, (1, 1)) == pytest.approx(direct, rel=1e-12)


def test_param_validation():
    with pytest.raises(DomainError):
        ProfileParams(0.0, rho=0.0)
    with pytest.raises(DomainError):
        ProfileParams(0.0, channel=(2, 0))


def test_gaussian_reference():
    assert gaussian_envelope(0.0) == 1.0
    assert gaussian_envelope(1 / math.sqrt(2)) == pytest.approx(math.exp(-1))


@pytest.mark.parametrize("channel", [(1, 0), (0, 1), (1, 1)])
@pytest.mark.parametrize("scat", [
    ScatteringArgs(gamma01=3.0, gamma02=2.0, alpha0=5.0, chi1=0.3, chi2=-0.1, delta_angle=0.2),
    ScatteringArgs(gamma01=12.0, gamma02=0.0, alpha0=30.0, rotation_sign=-1),
    ScatteringArgs(gamma01=0.5, gamma02=0.5, alpha0=-20.0),
])
def test_normalization_closure(channel, scat):
    params = ProfileParams(0.4, channel=channel)
    _, _, table = profile_partial_table(params, scat)
    assert table.sum() == pytest.approx(profile_res(params), abs=1e-4)


def test_table_matches_adaptive_partial():
    params = ProfileParams(0.2)
    scat = ScatteringArgs(gamma01=2.0, gamma02=1.0, alpha0=4.0, chi1=0.5)
    l1, l2, table = profile_partial_table(params, scat)
    for i, j in ((0, 0), (3, 5), (len(l1) // 2, len(l2) // 2)):
        assert profile_partial(int(l1[i]), int(l2[j]), params, scat, tol=1e-10) == pytest.approx(table[i, j], abs=1e-8)


def test_kronecker_partials():
    # with gamma = 0 only n1 = n2 survive and carry |J_n(alpha g^2)|^2
    params = ProfileParams(0.0)
    scat = ScatteringArgs(alpha0=6.0, delta_angle=0.7)
    assert profile_partial(2, 2, params, scat) == 0.0  # n = (3, 2)
    l1, l2 = 1, 2  # indices n1 = l1 + 1 = 2, n2 = l2 = 2
    weight = lambda phi: erf_weight(phi, 0.0, (1, 0)) * special.jv(2, 6.0 * math.exp(-2 * phi * phi)) ** 2
    ref = integrate.quad(weight, -5, 5, epsabs=1e-13, points=[0])[0] / 5
    assert profile_partial(l1, l2, params, scat) == pytest.approx(ref, abs=1e-10)


def test_partial_zero_field_is_one_line():
    params = ProfileParams(0.0)
    scat = ScatteringArgs()
    assert profile_partial(-1, 0, params, scat) == pytest.approx(profile_res(params), abs=1e-12)
    assert profile_partial(0, 0, params, scat) == 0.0
    ch01 = ProfileParams(0.0, channel=(0, 1))
    assert profile_partial(-1, 0, ch01, scat) == pytest.approx(profile_res(ch01), abs=1e-12)


def test_series_failure_propagates():
    scat = ScatteringArgs(alpha0=400.0, control=SeriesControl(max_terms=50))
    with pytest.raises(ConvergenceError):
        profile_partial(0, 0, ProfileParams(0.0), scat)
