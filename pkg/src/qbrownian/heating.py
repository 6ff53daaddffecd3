"""Heating dynamics: mean excitation number of the damped oscillator.

The mean occupation obeys

    <n(t)> = e^-Gamma(t) <n(0)> + (e^-Gamma(t) - 1)/2 + Delta_Gamma(t)

with Gamma(t) = 2 int_0^t gamma and
Delta_Gamma(t) = e^-Gamma(t) int_0^t e^Gamma(t1) Delta(t1) dt1,
equivalent to the rate equation d<n>/dt = (Delta - gamma) - 2 gamma <n>.

Both routes are implemented (``heating_exact`` assembles the quadrature
form, ``heating_ode`` integrates the rate equation) together with the
constant-rate Markovian limit and the short-time approximations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.integrate import solve_ivp

from .kernels import _envelope_integral, delta_reduced, gamma_reduced
from .quadrature import adaptive_quad
from .spectral import (SpectrumParams, TemperatureMode, TemperatureRegime,
                       markovian_rates, thermal_occupation,
                       thermalization_time)

__all__ = [
    "HeatingTrace",
    "big_gamma",
    "heating_exact",
    "heating_markov",
    "heating_short_time",
    "heating_ode",
]

# K15 nodes reused for the cumulative panels
from .quadrature import _WK, _XK


@dataclass(frozen=True)
class HeatingTrace:
    """Heating history with its companion curves.

    ``n_exact`` is the full non-Markovian mean occupation, ``n_markov``
    the constant-rate limit, ``n_short`` the short-time approximation
    int_0^t (Delta - gamma), ``big_gamma`` the damping integral Gamma(t).
    """

    times: np.ndarray
    n_exact: np.ndarray
    n_markov: np.ndarray
    n_short: np.ndarray
    big_gamma: np.ndarray
    n0: float

    def __post_init__(self):
        t = self.times
        if t.ndim != 1 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing from 0")
        if abs(self.n_exact[0] - self.n0) > 1e-12:
            raise ValueError("n_exact must start at the initial occupation")
        if self.n_markov[0] != 0.0 or self.big_gamma[0] != 0.0:
            raise ValueError("n_markov and big_gamma must start at 0")
        if np.any(np.diff(self.n_markov) < -1e-12):
            raise ValueError("the Markovian curve must be nondecreasing")


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be a strictly increasing 1D grid "
                         "starting at 0")
    return t


def _sub_panels(t_grid: np.ndarray, r: float):
    """Split output intervals into panels short enough for K15.

    Early times carry frequency content up to the cutoff scale, so the
    panel width shrinks like 1/r inside the transient window.
    """
    h_fast = min(0.25, 0.5 / max(1.0, r))
    t_fast = max(5.0, 30.0 / max(r, 0.2))
    edges = [np.asarray([t_grid[0]])]
    for a, b in zip(t_grid[:-1], t_grid[1:]):
        h = h_fast if a < t_fast else 0.4
        n = max(1, int(math.ceil((b - a) / h)))
        edges.append(np.linspace(a, b, n + 1)[1:])
    return np.concatenate(edges)


def big_gamma(t: float, p: SpectrumParams, tol: float = 1e-9) -> float:
    """Damping integral Gamma(t) = 2 int_0^t gamma(t1) dt1."""
    if t < 0:
        raise ValueError("big_gamma: t must be >= 0")
    if t == 0.0:
        return 0.0
    scale = 2.0 * _envelope_integral(p, None) * min(t, math.pi) * max(t, 1.0)

    def f(ts):
        return np.array([2.0 * gamma_reduced(float(x), p, tol / 10) for x in ts])

    val, _ = adaptive_quad(f, 0.0, t, rtol=tol, atol=tol * max(scale, 1e-300))
    return float(val)


def _panel_rates(panels: np.ndarray, p, temp, tol):
    """gamma and Delta on the K15 nodes of every panel."""
    lo, hi = panels[:-1], panels[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * _XK[None, :]
    flat = nodes.ravel()
    gam = np.array([gamma_reduced(float(x), p, tol) for x in flat])
    dlt = np.array([delta_reduced(float(x), p, temp, tol) for x in flat])
    return nodes, half, gam.reshape(nodes.shape), dlt.reshape(nodes.shape)


def _partial_integrals(half, values):
    """Panel integrals and within-panel running integrals at the K15 nodes,
    via a Chebyshev fit of the node values (degree 12 on 15 nodes)."""
    n_panel = values.shape[0]
    full = (values * _WK).sum(axis=1) * half
    running = np.empty_like(values)
    for i in range(n_panel):
        c = cheb.chebfit(_XK, values[i], 12)
        ci = cheb.chebint(c, lbnd=-1.0)
        running[i] = cheb.chebval(_XK, ci) * half[i]
    return full, running


def heating_exact(n0: float, p: SpectrumParams, temp: TemperatureRegime,
                  t_grid, tol: float = 1e-9) -> HeatingTrace:
    """Assemble the heating function on ``t_grid`` by stable cumulative
    quadrature.

    Delta_Gamma is accumulated with the overflow-free recurrence
    Delta_Gamma(t_k+1) = e^-dGamma Delta_Gamma(t_k) + local panel
    integral, so only nonpositive exponents e^(Gamma(t1) - Gamma(panel
    end)) are ever formed.  The companion Markovian and short-time
    columns are filled from their own closed forms.
    """
    if n0 < 0:
        raise ValueError("heating_exact: n0 must be >= 0")
    t_grid = _check_grid(t_grid)
    panels = _sub_panels(t_grid, p.r)
    nodes, half, gam, dlt = _panel_rates(panels, p, temp, tol)

    dg_panel, gam_running = _partial_integrals(half, 2.0 * gam)
    gamma_at = np.concatenate([[0.0], np.cumsum(dg_panel)])  # Gamma at panel edges
    # Gamma at interior nodes, then the nonpositive exponent to the panel end
    gamma_nodes = gamma_at[:-1, None] + gam_running
    expo = gamma_nodes - gamma_at[1:, None]
    local = ((dlt * np.exp(expo)) * _WK).sum(axis=1) * half

    d_gamma = 0.0
    idx = {t: i for i, t in enumerate(t_grid)}
    n_exact = np.empty_like(t_grid)
    big_g = np.empty_like(t_grid)
    n_exact[0] = n0
    big_g[0] = 0.0
    k_out = 1
    for i in range(len(half)):
        d_gamma = math.exp(-dg_panel[i]) * d_gamma + local[i]
        t_end = panels[i + 1]
        if k_out < len(t_grid) and t_end >= t_grid[k_out] - 1e-15:
            g = gamma_at[i + 1]
            n_exact[k_out] = math.exp(-g) * n0 + 0.5 * math.expm1(-g) + d_gamma
            big_g[k_out] = g
            k_out += 1
    if k_out != len(t_grid):
        raise RuntimeError("internal panel bookkeeping failed")

    n_markov = heating_markov(n0, p, temp, t_grid)
    n_short = _cumulative(dlt - gam, half, panels, t_grid)
    return HeatingTrace(times=t_grid, n_exact=n_exact, n_markov=n_markov,
                        n_short=n_short, big_gamma=big_g, n0=float(n0))


def _cumulative(values, half, panels, t_grid):
    per_panel = (values * _WK).sum(axis=1) * half
    acc = np.concatenate([[0.0], np.cumsum(per_panel)])
    out = np.empty_like(t_grid)
    out[0] = 0.0
    k_out = 1
    for i, t_end in enumerate(panels[1:]):
        if k_out < len(t_grid) and t_end >= t_grid[k_out] - 1e-15:
            out[k_out] = acc[i + 1]
            k_out += 1
    return out


def heating_markov(n0: float, p: SpectrumParams, temp: TemperatureRegime,
                   t_grid) -> np.ndarray:
    """Markovian heating N(1)(1 - e^-Gamma_M t) with Gamma_M = pi J(1).

    The initial occupation does not enter (the limit is stated for a
    ground-state start); identically zero for a zero-T reservoir.
    """
    t_grid = _check_grid(t_grid)
    if temp.mode is TemperatureMode.ZERO:
        return np.zeros_like(t_grid)
    n_stat = thermal_occupation(1.0, temp)
    _, gm = markovian_rates(p, temp)
    return n_stat * -np.expm1(-2.0 * gm * t_grid)


def heating_short_time(p: SpectrumParams, temp: TemperatureRegime, t_grid,
                       mode: str = "full", tol: float = 1e-9) -> np.ndarray:
    """Short-time heating: the cumulative integral of (Delta - gamma)
    (``mode="full"``) or of Delta alone (``mode="highT"``).

    Only meaningful well below the thermalization time; a warning is
    emitted when the grid extends past a tenth of it.
    """
    if mode not in ("full", "highT"):
        raise ValueError(f"heating_short_time: unknown mode {mode!r}")
    t_grid = _check_grid(t_grid)
    t_th = thermalization_time(p)
    if t_grid[-1] > 0.1 * t_th:
        warnings.warn(
            f"short-time approximation requested out to t={t_grid[-1]:g}, "
            f"beyond 0.1 t_th = {0.1 * t_th:g}", stacklevel=2)
    panels = _sub_panels(t_grid, p.r)
    _, half, gam, dlt = _panel_rates(panels, p, temp, tol)
    integrand = dlt if mode == "highT" else dlt - gam
    return _cumulative(integrand, half, panels, t_grid)


def heating_ode(n0: float, p: SpectrumParams, temp: TemperatureRegime,
                t_grid, tol: float = 1e-9) -> np.ndarray:
    """Independent route: integrate d<n>/dt = (Delta - gamma) - 2 gamma <n>
    with adaptive embedded Runge-Kutta, rates evaluated by direct
    quadrature at each step."""
    t_grid = _check_grid(t_grid)
    rate_tol = min(1e-10, tol / 10)

    def rhs(t, y):
        d = delta_reduced(float(t), p, temp, rate_tol)
        g = gamma_reduced(float(t), p, rate_tol)
        return [(d - g) - 2.0 * g * y[0]]

    if t_grid[-1] == 0.0:
        return np.full_like(t_grid, float(n0))
    sol = solve_ivp(rhs, (0.0, float(t_grid[-1])), [float(n0)], method="DOP853",
                    t_eval=t_grid, rtol=tol, atol=tol * 1e-3, max_step=1.0)
    if not sol.success:
        raise RuntimeError(f"heating ODE integration failed: {sol.message}")
    return sol.y[0]
