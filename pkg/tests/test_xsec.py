import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from scipy import integrate

from ensb.constants import ALPHA, M_E
from ensb.errors import DomainError, KinematicSingularityError
from ensb.kinematics import ElectronState, PhotonDirection, transit_width
from ensb.profiles import ProfileParams, profile_partial, profile_partial_table, profile_res
from ensb.waves import TwoWaveField
from ensb.xsec import (CrossSectionResult, EmissionProbability, ResonanceInputs, bethe_heitler,
                       bh_photon_probability, channel_kinematics, emission_probability, mott,
                       ratio_closed_form, ratio_components, ratio_direct, resonant_integrated_xsec,
                       resonant_partial_xsec, resonant_summed_xsec, scattering_args, scattering_partial,
                       u_omega, w2_10, w2_11_general)

DEG = math.pi / 180


def reference_field(**kw):
    args = dict(omega1_eV=2.35, omega2_eV=1.0, eta01=0.1, eta02=0.1, tau_ps=0.1)
    args.update(kw)
    return TwoWaveField.from_lab(**args)


def reference_inputs(**kw):
    return ResonanceInputs(ElectronState.from_energy(1.02e6, 163 * DEG), reference_field(**kw), 10 * DEG)


def backscatter_inputs(v, theta_f_deg, **kw):
    return ResonanceInputs(ElectronState.from_velocity(v, 163 * DEG), reference_field(**kw), theta_f_deg * DEG)


# -- emission vertex ----------------------------------------------------------

def test_w2_10_examples():
    u = 3e-5
    assert w2_10(0.1, u, u) == pytest.approx(0.01 * (1 + u * u / (2 * (1 + u))), rel=1e-12)
    assert w2_10(0.1, u, 0.0) == pytest.approx(0.01, rel=1e-15)
    with pytest.raises(DomainError):
        w2_10(0.1, 0.0, 0.0)
    with pytest.raises(DomainError):
        w2_10(0.1, 1e-3, 2e-3)


def test_w2_10_symbolic_half():
    eta, u = sp.symbols("eta u", positive=True)
    up = u / 2
    expr = eta**2 * (1 + up**2 / (2 * (1 + up)) - 4 * (up / u) * (1 - up / u))
    assert sp.simplify(expr - eta**2 * u**2 / (8 + 4 * u)) == 0
    for val in (1e-5, 0.3, 2.0):
        ref = float(0.01 * val**2 / (8 + 4 * val))
        assert w2_10(0.1, val, val / 2) == pytest.approx(ref, rel=1e-12)


def _zero_d_args(fld):
    p = ElectronState.from_velocity(0.1, 1.0).four_momentum()
    return dict(p_i=p, q_i=p, gamma01=0.0, gamma02=0.0, chi1=0.0, chi2=0.0)


def test_w2_11_interference_reduction_symbolic():
    u, up, uw = sp.symbols("u up uw", positive=True)
    r = up / u
    bracket = -4 * r**2 * uw**2 * (1 - u * up / (2 * (1 + up))) + 4 * r * uw
    reduced = sp.simplify(bracket.subs({uw: 1, up: u}))
    assert sp.simplify(reduced - 2 * u**2 / (1 + u)) == 0
    fld = reference_field()
    for val in (2e-5, 0.01, 0.7):
        uw_val = u_omega(3.35, 2.35, 1.0, val, val)
        assert uw_val == 1.0
        got = w2_11_general(fld, 3.35, val, val, uw_val, **_zero_d_args(fld))
        assert got == pytest.approx(1e-4 * 2 * val**2 / (1 + val), rel=1e-10)


def test_w2_11_vanishes_without_u_prime():
    fld = reference_field()
    uw = u_omega(3.35, 2.35, 1.0, 1e-3, 0.0)
    assert w2_11_general(fld, 3.35, 1e-3, 0.0, uw, **_zero_d_args(fld)) == 0.0


@pytest.mark.parametrize("channel", [(1, 0), (0, 1), (1, 1)])
def test_emission_probability_interference_forms(channel):
    inputs = reference_inputs()
    kin = channel_kinematics(inputs, channel)
    assert kin.regime == "interference"
    u = kin.u
    assert kin.u_prime == pytest.approx(u, rel=1e-9)
    E = inputs.state_i.energy
    got = emission_probability(inputs, channel)
    if channel == (1, 1):
        ref = ALPHA * M_E**2 * 0.01 * 0.01 / (2 * math.pi * E) * u * u / (1 + u)
    else:
        ref = ALPHA * M_E**2 * 0.01 / (4 * math.pi * E) * (1 + u * u / (2 * (1 + u)))
    assert got.value == pytest.approx(ref, rel=1e-8)
    assert got.channel == channel and got.regime == "interference"


def test_channel_hierarchy():
    inputs = reference_inputs()
    w10 = emission_probability(inputs, (1, 0)).value
    w11 = emission_probability(inputs, (1, 1)).value
    assert w10 / w11 >= 1e3
    summed = resonant_summed_xsec(inputs, channel_kinematics(inputs, (1, 0)).omega_res).components
    assert summed[(1, 0)] >= 1e3 * summed[(1, 1)]


def test_emission_probability_negative_expansion_rejected():
    s = ElectronState.from_velocity(0.5, 163 * DEG)
    inputs = ResonanceInputs(s, reference_field(), 10 * DEG, photon=PhotonDirection(2.0, 0.0))
    with pytest.raises(DomainError):
        emission_probability(inputs, (1, 1))


def test_result_types_validate():
    with pytest.raises(DomainError):
        EmissionProbability(-1.0, (1, 0), "general")
    with pytest.raises(DomainError):
        CrossSectionResult(1.0, "x", {"a": 0.5})


# -- field-free baselines -----------------------------------------------------

@pytest.mark.parametrize("v", [0.01, 0.03, 0.05])
@pytest.mark.parametrize("theta_deg", [30, 90, 180])
def test_mott_rutherford_limit(v, theta_deg):
    si = ElectronState.from_velocity(v, 0.0)
    sf = ElectronState(si.energy, si.momentum_magnitude, theta_deg * DEG, 0.0)
    p = si.momentum_magnitude
    ruth = ALPHA**2 / (4 * p * p * v * v * math.sin(theta_deg * DEG / 2) ** 4)
    assert mott(si, sf) == pytest.approx(ruth, rel=0.05)


def test_mott_scalings():
    si = ElectronState.from_velocity(0.1, 0.0)
    sf = ElectronState(si.energy, si.momentum_magnitude, 1.0, 0.0)
    assert mott(si, sf, Z=3) == pytest.approx(9 * mott(si, sf), rel=1e-14)
    with pytest.raises(DomainError):
        mott(si, si)


def test_mott_q4_scaling_at_fixed_numerator():
    qi = ElectronState.from_velocity(0.1, 0.0).four_momentum()
    pf = ElectronState.from_velocity(0.1, 0.5).four_momentum()
    q = np.array([1e3, 0.0, 0.0])
    assert scattering_partial(qi, pf, q / 2) == pytest.approx(16 * scattering_partial(qi, pf, q), rel=1e-14)
    with pytest.raises(DomainError):
        scattering_partial(qi, pf, np.zeros(3))


def test_scattering_partial_matches_mott_at_q_equal_p():
    si = ElectronState.from_velocity(0.2, 0.3, 0.1)
    sf = ElectronState(si.energy, si.momentum_magnitude, 1.4, -0.2)
    q = sf.momentum - si.momentum
    # with q_i = p_i the numerator m^2 + (p_i p_f) + 2 p_i.p_f equals E_iE_f + m^2 + p_i.p_f
    assert scattering_partial(si.four_momentum(), sf.four_momentum(), q) == pytest.approx(mott(si, sf), rel=1e-12)


def test_scattering_partial_close_to_mott_in_field():
    inputs = reference_inputs()
    kin = channel_kinematics(inputs, (1, 0))
    sf = inputs.final_state()
    ratio = scattering_partial(kin.q_i, sf.four_momentum(), sf.momentum - inputs.state_i.momentum) / mott(
        inputs.state_i, sf)
    assert ratio == pytest.approx(1.0, abs=1e-3)


def test_bh_examples():
    si = ElectronState.from_velocity(0.1, 0.0)
    photon = PhotonDirection(1.2, 0.4)
    assert bh_photon_probability(si, si, photon, 2.0) == 0.0
    sf = ElectronState(si.energy, si.momentum_magnitude, 0.8, 0.0)
    # photon along y is perpendicular to the transfer in the x-z plane
    perp = PhotonDirection(math.pi / 2, math.pi / 2)
    q = sf.momentum - si.momentum
    ki, kf = si.energy - perp.unit @ si.momentum, sf.energy - perp.unit @ sf.momentum
    ref = ALPHA / (4 * math.pi**2) * (q @ q) / (2.0 * ki * kf)
    assert bh_photon_probability(si, sf, perp, 2.0) == pytest.approx(ref, rel=1e-12)
    assert bethe_heitler(si, sf, photon, 2.0, Z=2) == mott(si, sf, 2) * bh_photon_probability(si, sf, photon, 2.0)
    with pytest.raises(DomainError):
        bh_photon_probability(si, sf, photon, 0.0)


@pytest.mark.parametrize("theta_f", [10, 30])
def test_bh_positive_on_ratio_grid(theta_f):
    for v in np.geomspace(0.05, 0.9, 25):
        inputs = backscatter_inputs(float(v), theta_f)
        w = channel_kinematics(inputs, (1, 0)).omega_res
        assert bethe_heitler(inputs.state_i, inputs.final_state(), inputs.photon, w) > 0


# -- resonant cross sections --------------------------------------------------

def test_summed_peaks_at_resonance():
    inputs = reference_inputs()
    kin = channel_kinematics(inputs, (1, 0))
    gam = transit_width(kin.omega_res, kin.omega, inputs.field.tau)
    at = resonant_summed_xsec(inputs, kin.omega_res, [(1, 0)]).value
    for off in (-2, -0.5, 0.5, 2):
        assert resonant_summed_xsec(inputs, kin.omega_res + off * gam, [(1, 0)]).value < at


@pytest.mark.parametrize("channel", [(1, 0), (0, 1)])
def test_integrated_matches_omega_integral(channel):
    inputs = reference_inputs()
    kin = channel_kinematics(inputs, channel)
    gam = transit_width(kin.omega_res, kin.omega, inputs.field.tau)
    f = lambda w: resonant_summed_xsec(inputs, w, [channel]).value
    total, _ = integrate.quad(f, kin.omega_res - 12 * gam, kin.omega_res + 12 * gam, limit=200,
                              points=[kin.omega_res])
    assert total == pytest.approx(resonant_integrated_xsec(inputs).components[channel], rel=0.02)


def test_integrated_scalings():
    base = resonant_integrated_xsec(reference_inputs())
    assert resonant_integrated_xsec(reference_inputs(tau_ps=0.2)).value == pytest.approx(2 * base.value, rel=1e-12)
    eta = resonant_integrated_xsec(reference_inputs(eta01=0.05)).components[(1, 0)]
    assert eta == pytest.approx(base.components[(1, 0)] / 4, rel=1e-6)
    assert base.value == pytest.approx(sum(base.components.values()), rel=1e-14)


def small_field_inputs():
    fld = reference_field(eta01=0.01, eta02=0.01)
    return ResonanceInputs(ElectronState.from_velocity(0.05, 163 * DEG), fld, 150 * DEG)


def test_partial_sum_reproduces_summed():
    inputs = small_field_inputs()
    kin = channel_kinematics(inputs, (1, 0))
    w = kin.omega_res * (1 - 0.3 * 2 / (kin.omega * inputs.field.tau))  # beta = 0.3
    scat = scattering_args(inputs, kin.q_i, inputs.final_state().four_momentum())
    params = ProfileParams(0.3)
    l1, l2, table = profile_partial_table(params, scat)
    # elastic final energy: the l-dependence sits entirely in the partial profile
    unit = resonant_partial_xsec(inputs, (1, 0), 0, 0, w).value / profile_partial(0, 0, params, scat)
    other = resonant_partial_xsec(inputs, (1, 0), 3, -2, w).value / profile_partial(3, -2, params, scat)
    assert other == pytest.approx(unit, rel=1e-12)
    total = unit * table.sum()
    summed = resonant_summed_xsec(inputs, w, [(1, 0)]).value
    assert total == pytest.approx(summed, rel=1e-4)


def test_partial_tau_squared_at_fixed_beta():
    def at(tau_ps):
        inputs = ResonanceInputs(small_field_inputs().state_i, reference_field(eta01=0.01, eta02=0.01, tau_ps=tau_ps),
                                 150 * DEG)
        kin = channel_kinematics(inputs, (1, 0))
        return resonant_partial_xsec(inputs, (1, 0), -1, 0, kin.omega_res).value
    assert at(0.2) == pytest.approx(4 * at(0.1), rel=1e-9)


def test_partial_final_energy_policy():
    inputs = small_field_inputs()
    kin = channel_kinematics(inputs, (1, 0))
    conserved = resonant_partial_xsec(inputs, (1, 0), -1, 0, kin.omega_res, final_energy="conserved")
    elastic = resonant_partial_xsec(inputs, (1, 0), -1, 0, kin.omega_res)
    assert conserved.value == pytest.approx(elastic.value, rel=1e-3)
    with pytest.raises(DomainError):
        resonant_partial_xsec(inputs, (1, 0), 0, 0, kin.omega_res, final_energy="other")


# -- ratio --------------------------------------------------------------------

def test_co_rotating_rejected():
    with pytest.raises(DomainError):
        ResonanceInputs(ElectronState.from_velocity(0.1, 163 * DEG), reference_field(delta2=1), 10 * DEG)


@pytest.mark.parametrize("theta_f", [10, 30])
def test_closed_and_direct_agree(theta_f):
    for v in np.linspace(0.05, 0.3, 6):
        r = ratio_components(backscatter_inputs(float(v), theta_f))
        assert r["R10_direct"] == pytest.approx(r["R10_closed"], rel=0.3)
        assert r["R_res"] == pytest.approx(r["R10_direct"] + r["R01"], rel=1e-14)


def test_ratio_tau_squared():
    a = ratio_direct(backscatter_inputs(0.1, 10)).r10
    b = ratio_direct(backscatter_inputs(0.1, 10, tau_ps=0.2)).r10
    assert b == pytest.approx(4 * a, rel=1e-10)
    s = ElectronState.from_velocity(0.1, 163 * DEG)
    assert ratio_closed_form(s, 10 * DEG, reference_field(tau_ps=0.2)) == pytest.approx(
        4 * ratio_closed_form(s, 10 * DEG, reference_field()), rel=1e-12)


def test_ratio_channel_validation():
    s = ElectronState.from_velocity(0.1, 163 * DEG)
    with pytest.raises(DomainError):
        ratio_closed_form(s, 10 * DEG, reference_field(), channel=(1, 1))


def test_ratio_singular_denominator():
    # final direction equal to the initial one: no momentum transfer
    s = ElectronState.from_velocity(0.1, 163 * DEG)
    with pytest.raises(KinematicSingularityError):
        ratio_closed_form(s, 163 * DEG, reference_field())


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=-3, max_value=3))
def test_observables_independent_of_delta(delta_deg_scale):
    delta_deg = 60 * delta_deg_scale
    base = backscatter_inputs(0.1, 10)
    moved = backscatter_inputs(0.1, 10, delta_deg=delta_deg)
    assert ratio_direct(moved).total == pytest.approx(ratio_direct(base).total, rel=1e-12)
    w = channel_kinematics(base, (1, 0)).omega_res
    assert resonant_summed_xsec(moved, w).value == pytest.approx(resonant_summed_xsec(base, w).value, rel=1e-12)
