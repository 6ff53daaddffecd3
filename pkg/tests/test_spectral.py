"""Reservoir description: values, invariants, presets."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from qbrownian.spectral import (SpectrumParams, TemperatureMode,
                                TemperatureRegime, markovian_rates,
                                spectral_density, spectral_distribution,
                                thermal_occupation, thermalization_time,
                                thermalization_time_normalized)

PRESETS = (0.5, 1.0, 3.0)

params_st = st.tuples(
    st.floats(0.1, 5.0), st.floats(1e-3, 1.0), st.floats(0.05, 20.0))


def test_spectral_density_values():
    p = SpectrumParams(1.0, 0.1, 10.0)
    assert math.isclose(spectral_density(1.0, p), 0.01 * math.exp(-0.1),
                        rel_tol=1e-14)
    assert spectral_density(0.0, p) == 0.0
    with pytest.raises(ValueError):
        spectral_density(-1.0, p)


def test_spectral_density_peak_location():
    # argmax of w^s e^(-w/r) sits at s*r
    p = SpectrumParams(3.0, 0.2, 1.0)
    w = np.linspace(0.01, 12.0, 4000)
    assert abs(w[np.argmax(spectral_density(w, p))] - 3.0) < 0.01


def test_constructor_validation():
    with pytest.raises(ValueError):
        SpectrumParams(0.0, 0.1, 1.0)
    with pytest.raises(ValueError):
        SpectrumParams(1.0, -0.1, 1.0)
    with pytest.raises(ValueError):
        SpectrumParams(1.0, 0.1, -1.0)
    SpectrumParams(1.0, 0.0, 1.0)  # decoupled reservoir is allowed


def test_presets():
    assert SpectrumParams.sub_ohmic(0.1, 1.0).s == 0.5
    assert SpectrumParams.ohmic(0.1, 1.0).s == 1.0
    assert SpectrumParams.super_ohmic(0.1, 1.0).s == 3.0


def test_thermal_occupation_branches():
    assert thermal_occupation(1.0, TemperatureRegime.zero()) == 0.0
    exact = TemperatureRegime.exact(1.0)
    assert math.isclose(thermal_occupation(1.0, exact),
                        1.0 / (math.e - 1.0), rel_tol=1e-14)
    high = TemperatureRegime.high_t(100.0)
    n_h = thermal_occupation(1.0, high)
    n_e = thermal_occupation(1.0, TemperatureRegime.exact(100.0))
    assert n_h == 100.0
    assert abs(n_h - n_e) / n_h < 0.005


def test_thermal_occupation_domain_errors():
    with pytest.raises(ValueError):
        thermal_occupation(0.0, TemperatureRegime.exact(1.0))
    with pytest.raises(ValueError):
        thermal_occupation(0.0, TemperatureRegime.high_t(100.0))


def test_temperature_regime_validation():
    with pytest.raises(ValueError):
        TemperatureRegime.exact(0.0)
    with pytest.raises(ValueError):
        TemperatureRegime.high_t(-1.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        TemperatureRegime.high_t(5.0)
    assert any("high-T" in str(w.message) for w in caught)


def test_spectral_distribution_branches():
    high = TemperatureRegime.high_t(100.0)
    p1 = SpectrumParams(1.0, 0.1, 2.0)
    w = np.array([0.25, 1.0, 3.0])
    # Ohmic high-T: alpha^2 theta e^(-w/r), flat towards w -> 0
    expect = 0.01 * 100.0 * np.exp(-w / 2.0)
    assert np.allclose(spectral_distribution(w, p1, high), expect, rtol=1e-14)
    # sub-Ohmic high-T diverges towards w -> 0+
    ps = SpectrumParams(0.5, 0.1, 2.0)
    vals = spectral_distribution(np.array([1e-6, 1e-3, 1.0]), ps, high)
    assert vals[0] > vals[1] > vals[2]
    # zero T: J/2, finite (zero) at the origin
    pz = TemperatureRegime.zero()
    assert spectral_distribution(0.0, ps, pz) == 0.0
    assert np.isclose(spectral_distribution(1.0, ps, pz),
                      0.5 * spectral_density(1.0, ps), rtol=1e-15)


def test_high_t_equals_exact_with_substituted_occupation():
    # high-T branch == J(w) * theta/w identically
    p = SpectrumParams(0.5, 0.3, 3.0)
    high = TemperatureRegime.high_t(50.0)
    w = np.linspace(0.05, 30.0, 200)
    lhs = spectral_distribution(w, p, high)
    rhs = spectral_density(w, p) * (50.0 / w)
    assert np.allclose(lhs, rhs, rtol=5e-15)


def test_markovian_rates_values():
    p = SpectrumParams(1.0, 0.1, 10.0)
    high = TemperatureRegime.high_t(100.0)
    d, g = markovian_rates(p, high)
    assert math.isclose(g, 0.5 * math.pi * 0.01 * math.exp(-0.1), rel_tol=1e-14)
    assert math.isclose(d, math.pi * 0.01 * 100 * math.exp(-0.1), rel_tol=1e-14)
    assert round(d, 4) == 2.8426
    assert round(g, 6) == 0.014213


def test_markovian_rates_zero_t_equality():
    for s in PRESETS:
        p = SpectrumParams(s, 0.17, 0.8)
        d, g = markovian_rates(p, TemperatureRegime.zero())
        assert math.isclose(d, g, rel_tol=1e-15)


def test_markovian_delta_same_for_all_s_at_r_1():
    high = TemperatureRegime.high_t(100.0)
    vals = [markovian_rates(SpectrumParams(s, 0.1, 1.0), high)[0]
            for s in PRESETS]
    assert vals[0] == vals[1] == vals[2]


def test_gamma_m_temperature_invariant():
    p = SpectrumParams(3.0, 0.2, 2.0)
    regimes = (TemperatureRegime.zero(), TemperatureRegime.high_t(100.0),
               TemperatureRegime.exact(3.0))
    gammas = {markovian_rates(p, t)[1] for t in regimes}
    assert len(gammas) == 1


def test_thermalization_time_values():
    assert math.isclose(
        thermalization_time_normalized(SpectrumParams(1.0, 0.1, 1.0)),
        math.e, rel_tol=1e-15)
    # super-Ohmic minimum exactly at r = 1/2
    res = minimize_scalar(
        lambda r: thermalization_time_normalized(SpectrumParams(3.0, 1.0, r)),
        bracket=(0.2, 0.7, 2.0), method="golden",
        options={"xtol": 1e-10})
    assert abs(res.x - 0.5) < 1e-6
    assert math.isclose(res.fun, 0.25 * math.e**2, rel_tol=1e-10)


def test_thermalization_time_monotone_for_s_le_1():
    r = np.exp(np.linspace(np.log(0.05), np.log(10.0), 300))
    for s in (0.5, 1.0):
        vals = [thermalization_time_normalized(SpectrumParams(s, 1.0, x))
                for x in r]
        assert np.all(np.diff(vals) < 0)


def test_thermalization_time_absolute():
    p = SpectrumParams(1.0, 0.1, 1.0)
    assert math.isclose(thermalization_time(p),
                        math.e / (math.pi * 0.01), rel_tol=1e-14)
    assert thermalization_time(SpectrumParams(1.0, 0.0, 1.0)) == math.inf


@given(params_st, st.floats(0.0, 40.0))
@settings(max_examples=60, deadline=None)
def test_nonnegativity_property(params, w):
    s, alpha, r = params
    p = SpectrumParams(s, alpha, r)
    assert spectral_density(w, p) >= 0.0
    assert spectral_distribution(w, p, TemperatureRegime.zero()) >= 0.0
    if w > 0:
        assert spectral_distribution(w, p, TemperatureRegime.exact(2.0)) >= 0.0


@given(params_st, st.floats(0.01, 40.0))
@settings(max_examples=60, deadline=None)
def test_alpha_squared_scaling_exact(params, w):
    s, alpha, r = params
    p1 = SpectrumParams(s, alpha, r)
    p2 = SpectrumParams(s, 2 * alpha, r)
    assert spectral_density(w, p2) == 4.0 * spectral_density(w, p1)


@given(params_st)
@settings(max_examples=60, deadline=None)
def test_normalized_time_alpha_invariant(params):
    s, alpha, r = params
    a = thermalization_time_normalized(SpectrumParams(s, alpha, r))
    b = thermalization_time_normalized(SpectrumParams(s, 7 * alpha, r))
    assert a == b
