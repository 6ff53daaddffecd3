"""Heating function: assembly vs ODE route, limits, approximations."""

import math
import warnings

import numpy as np
import pytest

from qbrownian.heating import (HeatingTrace, big_gamma, heating_exact,
                               heating_markov, heating_ode,
                               heating_short_time)
from qbrownian.kernels import delta_reduced, gamma_reduced
from qbrownian.spectral import (SpectrumParams, TemperatureRegime,
                                markovian_rates, thermal_occupation,
                                thermalization_time)

HIGH = TemperatureRegime.high_t(100.0)
ZERO = TemperatureRegime.zero()


def test_big_gamma_zero_and_slope():
    p = SpectrumParams(1.0, 0.1, 10.0)
    assert big_gamma(0.0, p) == 0.0
    _, gm = markovian_rates(p, HIGH)
    g50 = big_gamma(50.0, p, 1e-9)
    assert abs(g50 / 50.0 - 2 * gm) <= 0.02 * 2 * gm


def test_big_gamma_derivative():
    p = SpectrumParams(1.0, 0.1, 10.0)
    h = 1e-3
    deriv = (big_gamma(5.0 + h, p, 1e-10) - big_gamma(5.0 - h, p, 1e-10)) / (2 * h)
    assert abs(deriv - 2 * gamma_reduced(5.0, p, 1e-11)) < 1e-6


def test_free_evolution_keeps_initial_occupation():
    p = SpectrumParams(1.0, 0.0, 1.0)  # decoupled
    grid = np.linspace(0.0, 5.0, 11)
    tr = heating_exact(1.7, p, HIGH, grid)
    assert np.allclose(tr.n_exact, 1.7, atol=1e-14)


def test_exact_matches_ode_route():
    p = SpectrumParams(1.0, 0.01, 10.0)
    grid = np.linspace(0.0, 20.0, 41)
    tr = heating_exact(0.0, p, HIGH, grid, tol=1e-9)
    ode = heating_ode(0.0, p, HIGH, grid, tol=1e-10)
    assert np.max(np.abs(tr.n_exact - ode)) <= 1e-7


def test_markov_values():
    p = SpectrumParams(1.0, 0.1, 10.0)
    grid = np.array([0.0, thermalization_time(p)])
    vals = heating_markov(0.0, p, HIGH, grid)
    assert vals[0] == 0.0
    n_stat = thermal_occupation(1.0, HIGH)
    assert math.isclose(vals[1], n_stat * (1 - math.exp(-1.0)), rel_tol=1e-12)
    assert np.all(heating_markov(0.0, p, ZERO, grid) == 0.0)


def test_short_time_modes_close_at_high_t():
    p = SpectrumParams(1.0, 0.01, 1.0)
    grid = np.linspace(0.0, 10.0, 21)
    full = heating_short_time(p, HIGH, grid, "full", 1e-9)
    hi = heating_short_time(p, HIGH, grid, "highT", 1e-9)
    gap = np.abs(full[1:] - hi[1:]) / np.abs(hi[1:])
    assert gap.max() < 0.01
    assert full[0] == hi[0] == 0.0


def test_short_time_oscillates_off_resonance():
    p = SpectrumParams(0.5, 0.01, 0.1)
    grid = np.linspace(0.0, 20.0, 81)
    vals = heating_short_time(p, HIGH, grid, "highT", 1e-9)
    assert np.any(np.diff(vals) < 0.0)


def test_short_time_warns_past_window():
    p = SpectrumParams(1.0, 0.1, 1.0)  # t_th ~ 86.5
    with pytest.warns(UserWarning, match="short-time"):
        heating_short_time(p, HIGH, np.linspace(0.0, 20.0, 5), "full", 1e-9)


def test_short_time_agreement_with_exact():
    # identical leading integral while Gamma << 1
    p = SpectrumParams(1.0, 0.1, 1.0)
    t_th = thermalization_time(p)
    grid = np.linspace(0.0, 0.01 * t_th, 9)
    tr = heating_exact(0.0, p, HIGH, grid, tol=1e-9)
    short = heating_short_time(p, HIGH, grid, "full", 1e-9)
    rel = np.abs(tr.n_exact[1:] - short[1:]) / np.abs(tr.n_exact[1:])
    assert rel.max() <= p.alpha**2


def test_negative_slope_of_short_time_means_negative_delta():
    p = SpectrumParams(0.5, 0.01, 0.1)
    grid = np.linspace(0.0, 20.0, 101)
    vals = heating_short_time(p, HIGH, grid, "highT", 1e-9)
    drops = np.nonzero(np.diff(vals) < -1e-12)[0]
    assert drops.size > 0
    for k in drops[:: max(1, drops.size // 5)]:
        mid = 0.5 * (grid[k] + grid[k + 1])
        assert delta_reduced(float(mid), p, HIGH, 1e-9) < 0.0


def test_nonnegative_occupation_weak_coupling():
    p = SpectrumParams(0.5, 0.01, 0.1)
    grid = np.linspace(0.0, 20.0, 51)
    tr = heating_exact(0.0, p, HIGH, grid, tol=1e-9)
    assert np.all(tr.n_exact >= -1e-6)


def test_trace_invariants_enforced():
    bad_times = np.array([0.5, 1.0])
    with pytest.raises(ValueError):
        heating_exact(0.0, SpectrumParams(1.0, 0.1, 1.0), HIGH, bad_times)
    with pytest.raises(ValueError):
        HeatingTrace(times=np.array([0.0, 1.0]),
                     n_exact=np.array([0.5, 0.6]),
                     n_markov=np.array([0.1, 0.2]),
                     n_short=np.zeros(2), big_gamma=np.zeros(2), n0=0.5)


def test_single_point_grid():
    p = SpectrumParams(1.0, 0.1, 1.0)
    tr = heating_exact(0.25, p, HIGH, np.array([0.0]))
    assert tr.n_exact.tolist() == [0.25]
    assert tr.big_gamma.tolist() == [0.0]
