"""Time-dependent master-equation coefficients Delta(t) and gamma(t).

Three routes are provided and cross-validated:

* the production path ``delta_reduced`` / ``gamma_reduced`` performs the
  time integral analytically and evaluates the remaining frequency
  integral by oscillation-aware adaptive quadrature,

      Delta(t) = int_0^inf I(w) [ sin((w-1)t)/(w-1) + sin((w+1)t)/(w+1) ] dw
      gamma(t) = int_0^inf J(w)/2 [ sin((w-1)t)/(w-1) - sin((w+1)t)/(w+1) ] dw

* ``rates_oracle_2d`` evaluates the defining nested double integrals
  literally and serves as the independent oracle,

* ``delta_closed_high_t`` evaluates audited closed forms for the
  high-temperature diffusion rate of the three preset reservoirs
  (see NOTES.md for the audit trail; the shipped formulas match the
  quadrature oracle, not any particular typography).

The dissipation rate gamma is temperature independent; Delta carries the
full reservoir occupation through I(w) = J(w)[N(w) + 1/2].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaincc, gamma as gamma_fn

from .quadrature import QuadratureError, adaptive_quad
from .special import _exp_e1, cosint, erf_complex, sinint
from .spectral import (SpectrumParams, TemperatureMode, TemperatureRegime,
                       markovian_rates, spectral_density,
                       spectral_distribution)

__all__ = [
    "ClosedFormError",
    "RateTrace",
    "RateModel",
    "delta_reduced",
    "gamma_reduced",
    "rates_oracle_2d",
    "delta_closed_high_t",
    "rate_trace",
]

_TOL_RANGE = (1e-12, 1e-4)
_ORACLE_T_MAX = 50.0


class ClosedFormError(RuntimeError):
    """A closed-form evaluation failed its reality check.

    A large imaginary residue signals a branch-cut mistake in the special
    function evaluation, not a physical result.
    """


def _check_tol(tol: float, lo: float = _TOL_RANGE[0], hi: float = _TOL_RANGE[1]):
    if not (lo <= tol <= hi):
        raise ValueError(f"tolerance must lie in [{lo}, {hi}], got {tol}")


def omega_cutoff(p: SpectrumParams) -> float:
    """Truncation frequency: the exponential envelope is below exp(-50)
    of its scale beyond this point."""
    return max(50.0 * p.r, 50.0)


def _envelope_integral(p: SpectrumParams, temp: TemperatureRegime | None,
                       lo: float = 0.0) -> float:
    """Upper bound on int_lo^inf of the relevant envelope.

    ``temp=None`` selects the gamma envelope J/2.
    """
    x = lo / p.r
    j_tail = 0.5 * p.alpha**2 * p.r**2 * gamma_fn(p.s + 1) * gammaincc(p.s + 1, x)
    if temp is None or temp.mode is TemperatureMode.ZERO:
        return j_tail
    if temp.mode is TemperatureMode.HIGH_T:
        return p.alpha**2 * temp.theta * p.r * gamma_fn(p.s) * gammaincc(p.s, x)
    # exact Bose-Einstein: N(w) <= theta/w, so I <= J theta/w + J/2
    n_tail = p.alpha**2 * temp.theta * p.r * gamma_fn(p.s) * gammaincc(p.s, x)
    return n_tail + j_tail


def _oscillation_edges(a: float, b: float, t: float, cap: int = 3000):
    """Panel seeds at the kernel zeros w = +-1 + k pi / t inside (a, b)."""
    if t <= 0 or (b - a) * t < 8.0:
        return []
    step = math.pi / t
    edges = []
    for center in (1.0, -1.0):
        k_lo = math.ceil((a - center) / step)
        k_hi = math.floor((b - center) / step)
        if k_hi >= k_lo:
            edges.append(center + step * np.arange(k_lo, k_hi + 1))
    if not edges:
        return []
    merged = np.unique(np.concatenate(edges))
    if merged.size > cap:
        merged = merged[:: int(np.ceil(merged.size / cap))]
    return merged.tolist()


def _envelope_knots(p: SpectrumParams, b: float):
    knots = [p.r * x for x in (0.25, 0.5, 1, 2, 4, 8, 16, 32)]
    knots += [1.0, p.s * p.r]
    return [k for k in knots if 0 < k < b]


def _rate_integral(t: float, p: SpectrumParams,
                   temp: TemperatureRegime | None, tol: float) -> float:
    """Shared reduced-form integrator.

    ``temp`` selects the Delta integrand (spectral distribution envelope,
    plus-combination kernel); ``temp=None`` selects gamma (J/2 envelope,
    minus-combination kernel).
    """
    if t == 0.0:
        return 0.0
    big_omega = omega_cutoff(p)
    total_env = _envelope_integral(p, temp)
    if total_env == 0.0:
        return 0.0
    atol = tol * total_env * min(t, math.pi)
    sign = 1.0 if temp is not None else -1.0

    if temp is None:
        def env(w):
            return 0.5 * spectral_density(w, p)
    else:
        def env(w):
            return spectral_distribution(w, p, temp)

    def integrand(w):
        k = np.sinc((w - 1.0) * t / math.pi) + sign * np.sinc((w + 1.0) * t / math.pi)
        return env(w) * (t * k)

    value = 0.0
    err = 0.0
    lo = 0.0
    if p.s != int(p.s):
        # sqrt substitution removes the w^(s-1) endpoint singularity of
        # the finite-temperature sub-Ohmic envelope (and the derivative
        # kink at zero temperature)
        b = min(1.0, p.r)
        ub = math.sqrt(b)
        seeds_u = [math.sqrt(e) for e in _oscillation_edges(0.0, b, t)]
        v, e = adaptive_quad(lambda u: integrand(u * u) * 2.0 * u, 0.0, ub,
                             rtol=tol, atol=0.5 * atol, points=seeds_u)
        value += v
        err += e
        lo = b
    seeds = _oscillation_edges(lo, big_omega, t) + _envelope_knots(p, big_omega)
    v, e = adaptive_quad(integrand, lo, big_omega, rtol=tol, atol=0.5 * atol,
                         points=seeds)
    value += v
    err += e

    # discarded exponential tail: kernel magnitude <= 2/(Omega - 1) out there
    tail = _envelope_integral(p, temp, big_omega) * 2.0 / (big_omega - 1.0)
    if err + tail > max(atol, tol * abs(value)) * 10.0 + tail:
        raise QuadratureError(
            f"rate integral at t={t} missed its tolerance "
            f"(err={err + tail:.3e})", estimate=value, error=err + tail, t=t)
    return float(value)


def delta_reduced(t: float, p: SpectrumParams, temp: TemperatureRegime,
                  tol: float = 1e-10) -> float:
    """Diffusion coefficient Delta(t) via the reduced frequency integral."""
    if t < 0:
        raise ValueError("delta_reduced: t must be >= 0")
    _check_tol(tol)
    return _rate_integral(t, p, temp, tol)


def gamma_reduced(t: float, p: SpectrumParams, tol: float = 1e-10) -> float:
    """Dissipation coefficient gamma(t); temperature never enters."""
    if t < 0:
        raise ValueError("gamma_reduced: t must be >= 0")
    _check_tol(tol)
    return _rate_integral(t, p, None, tol)


# ----------------------------------------------------------------------
# Literal nested double integral (validation oracle)
# ----------------------------------------------------------------------

def rates_oracle_2d(t: float, p: SpectrumParams, temp: TemperatureRegime,
                    tol: float = 1e-9):
    """(Delta(t), gamma(t)) by literal nested quadrature of the defining
    double integrals; the slow, independent cross-check for the reduced
    path and the closed forms.
    """
    if not (0 <= t <= _ORACLE_T_MAX):
        raise ValueError(f"rates_oracle_2d: t must lie in [0, {_ORACLE_T_MAX}]")
    if tol < 1e-9:
        raise ValueError("rates_oracle_2d: tol below 1e-9 is not supported")
    if t == 0.0:
        return 0.0, 0.0
    big_omega = omega_cutoff(p)
    i_total = _envelope_integral(p, temp)
    j_total = _envelope_integral(p, None)
    tail_i = _envelope_integral(p, temp, big_omega)
    tail_j = _envelope_integral(p, None, big_omega)
    inner_tol = tol / 50.0

    def env_i(w):
        return spectral_distribution(w, p, temp)

    def env_j(w):
        return 0.5 * spectral_density(w, p)

    def make_outer(env, trig_inner, trig_outer, scale, s_singular):
        def outer(tps):
            out = np.empty_like(tps)
            for i, tp in enumerate(tps.ravel()):
                def f(w, tp=tp):
                    return env(w) * trig_inner(w * tp)
                seeds = []
                if tp > 0:
                    half = math.pi / (2.0 * tp)
                    n = int(big_omega / half)
                    if 8 < n:
                        pts = half * np.arange(1, n + 1)
                        if pts.size > 3000:
                            pts = pts[:: int(np.ceil(pts.size / 3000))]
                        seeds = pts.tolist()
                seeds += _envelope_knots(p, big_omega)
                lo = 0.0
                val = 0.0
                if s_singular:
                    b = min(1.0, p.r)
                    v, _ = adaptive_quad(
                        lambda u: f(u * u) * 2.0 * u, 0.0, math.sqrt(b),
                        rtol=inner_tol, atol=0.5 * inner_tol * scale,
                        points=[math.sqrt(x) for x in seeds if x < b])
                    val += v
                    lo = b
                v, _ = adaptive_quad(f, lo, big_omega, rtol=inner_tol,
                                     atol=0.5 * inner_tol * scale,
                                     points=[x for x in seeds if x > lo])
                val += v
                out.flat[i] = val * trig_outer(tp)
            return out
        return outer

    s_singular = p.s != int(p.s)
    delta_outer = make_outer(env_i, np.cos, math.cos, i_total, s_singular)
    gamma_outer = make_outer(env_j, np.sin, math.sin, j_total, s_singular)

    outer_seeds = (0.5 * math.pi * np.arange(1, int(t / (0.5 * math.pi)) + 1)).tolist()
    d_val, d_err = adaptive_quad(delta_outer, 0.0, t, rtol=tol,
                                 atol=tol * i_total * min(t, math.pi),
                                 points=outer_seeds)
    g_val, g_err = adaptive_quad(gamma_outer, 0.0, t, rtol=tol,
                                 atol=tol * j_total * min(t, math.pi),
                                 points=outer_seeds)
    delta = 2.0 * d_val
    gamma = 2.0 * g_val

    # fold the truncated-tail bound into the reported error budget
    d_tail = 2.0 * tail_i * t
    g_tail = 2.0 * tail_j * t
    for name, val, err, tail, scale in (("Delta", delta, 2 * d_err, d_tail, i_total),
                                        ("gamma", gamma, 2 * g_err, g_tail, j_total)):
        budget = max(tol * abs(val), tol * scale * min(t, math.pi)) * 10.0
        if tail > budget:
            raise QuadratureError(
                f"oracle tail bound for {name} exceeds tolerance at t={t}: "
                f"{tail:.3e} > {budget:.3e}", estimate=val, error=err + tail, t=t)
    return float(delta), float(gamma)


# ----------------------------------------------------------------------
# Audited high-temperature closed forms
# ----------------------------------------------------------------------

def _cisi_block(tau: float, r: float) -> complex:
    # printed structure: -i cosh(1/r)[ci(z/r) - ci((z+2 tau)/r)]
    #                     + sinh(1/r)[si(z/r) - si((z+2 tau)/r)],  z = i - tau
    z = 1j - tau
    dci = cosint(z / r) - cosint((z + 2 * tau) / r)
    dsi = sinint(z / r) - sinint((z + 2 * tau) / r)
    return -1j * math.cosh(1 / r) * dci + math.sinh(1 / r) * dsi


def _stable_block(tau: float, r: float) -> complex:
    # cancellation-free rearrangement of the same block,
    #   e^a Im E1(a - it) + e^-a [pi + Im E1(-a + it)],  a = 1/r,
    # exact up to roundoff (see NOTES.md for the derivation)
    t = tau / r
    a = 1.0 / r
    return complex(math.exp(a) * _exp_e1(complex(a, -t)).imag
                   + math.exp(-a) * (math.pi + _exp_e1(complex(-a, t)).imag))


def _trig_block(tau: float, r: float) -> complex:
    # the ci/si form loses ~exp(2/r) digits to cancellation, so switch to
    # the rearranged form once the cutoff sits well below resonance
    return _cisi_block(tau, r) if r >= 0.5 else _stable_block(tau, r)


def _closed_ohmic(tau: float, r: float) -> complex:
    return _trig_block(tau, r)


def _closed_super_ohmic(tau: float, r: float) -> complex:
    # audited: the hyperbolic factors inside the trig-integral block are
    # constant in time (cosh(1/r), sinh(1/r)); time-dependent factors
    # fail the quadrature oracle
    elementary = (4 * tau * math.cos(tau / r) / (1 + tau * tau) ** 2
                  - 2 * math.sin(tau / r) / (r * (1 + tau * tau)))
    return elementary + _trig_block(tau, r) / r**2


def _closed_sub_ohmic(tau: float, r: float) -> complex:
    z = 1j - tau
    zp = (1 + 1j) * cmath.sqrt(1j + tau) / math.sqrt(2 * r)
    zm = (1 + 1j) * cmath.sqrt(1j - tau) / math.sqrt(2 * r)
    e2r = math.exp(2 / r)
    pref = (-2 * math.pi * math.exp(-1 / r)
            / (cmath.sqrt(2j - 2 * tau) * (1 + tau * tau) ** 0.25)
            * (0.25 + 0.25j)
            * cmath.sqrt(r * (1 + 1j * tau) / math.sqrt(1 + tau * tau)))
    brace = (math.sqrt(1 + tau * tau)
             * (erf_complex(zm) - 1j * e2r * erf_complex(1j * zm))
             + 1j * cmath.sqrt(z) * cmath.sqrt(z + 2 * tau)
             * (erf_complex(zp) - 1j * e2r * erf_complex(1j * zp)))
    return pref * brace

_CLOSED_FORMS = {0.5: _closed_sub_ohmic, 1.0: _closed_ohmic,
                 3.0: _closed_super_ohmic}


def delta_closed_high_t(t: float, p: SpectrumParams, theta: float) -> float:
    """High-temperature Delta(t) from the audited closed forms.

    Supports the preset exponents s in {1/2, 1, 3} only.  Internally the
    formulas run on the cutoff-scaled time tau = omega_c t = r t; the
    dimensionless result is scaled by alpha^2 theta to the absolute rate.
    Raises :class:`ClosedFormError` if the evaluation acquires a
    significant imaginary part (branch-cut trouble).
    """
    if t < 0:
        raise ValueError("delta_closed_high_t: t must be >= 0")
    form = _CLOSED_FORMS.get(float(p.s))
    if form is None:
        raise ValueError(
            f"delta_closed_high_t: no closed form for s={p.s}; "
            "supported exponents are 1/2, 1 and 3")
    if t == 0.0:
        return 0.0
    val = form(p.r * t, p.r)
    if abs(val.imag) > 1e-9 * abs(val.real) + 1e-12:
        raise ClosedFormError(
            f"closed form for s={p.s} returned imaginary residue "
            f"{val.imag:.3e} at t={t} (re={val.real:.3e})")
    return p.alpha**2 * theta * val.real


# ----------------------------------------------------------------------
# Traces and memoized evaluation
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RateTrace:
    """Sampled rate history with the two decay-channel combinations.

    ``lambda_up = Delta - gamma`` drives upward |n> -> |n+1> transitions,
    ``lambda_down = Delta + gamma`` the emission channel.
    """

    times: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    lambda_up: np.ndarray
    lambda_down: np.ndarray

    def __post_init__(self):
        t = self.times
        if t.ndim != 1 or t.size < 1 or t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must be a strictly increasing grid "
                             "starting at 0")
        if self.delta[0] != 0.0 or self.gamma[0] != 0.0:
            raise ValueError("rates must vanish at t = 0")


def rate_trace(p: SpectrumParams, temp: TemperatureRegime, t_max: float,
               n_points: int, tol: float = 1e-10) -> RateTrace:
    """Uniform-grid sweep of the reduced rates, t = 0 included."""
    if t_max < 0:
        raise ValueError("rate_trace: t_max must be >= 0")
    if n_points < 2:
        raise ValueError("rate_trace: n_points must be >= 2")
    times = (np.array([0.0]) if t_max == 0.0
             else np.linspace(0.0, t_max, n_points))
    delta = np.zeros_like(times)
    gamma = np.zeros_like(times)
    for i, t in enumerate(times[1:], start=1):
        try:
            delta[i] = delta_reduced(float(t), p, temp, tol)
            gamma[i] = gamma_reduced(float(t), p, tol)
        except QuadratureError as exc:
            exc.t = float(t)
            raise
    return RateTrace(times=times, delta=delta, gamma=gamma,
                     lambda_up=delta - gamma, lambda_down=delta + gamma)


class RateModel:
    """Dense-mesh memoization of (Delta, gamma) with cubic interpolation.

    The Fock-space integrator queries the rates thousands of times; this
    model samples them once on a mesh fine enough to keep the cubic
    interpolation error below ~1e-8 and answers from the spline.  Past
    ``plateau_from`` (if given) the rates are frozen at their Markovian
    values, which is only appropriate once the transient has died out.
    """

    def __init__(self, p: SpectrumParams, temp: TemperatureRegime,
                 t_max: float, tol: float = 1e-9, mesh_dt: float | None = None,
                 plateau_from: float | None = None):
        self.params = p
        self.temp = temp
        h = mesh_dt if mesh_dt is not None else min(0.01, 0.01 / p.r)
        end = t_max if plateau_from is None else min(t_max, plateau_from)
        # rates vary fastest while the sinc window still spans the cutoff;
        # beyond ~30/r the envelope has settled and a coarser mesh suffices
        t_fast = min(end, max(5.0, 30.0 / p.r))
        mesh = [np.arange(0.0, t_fast + h, h)]
        if t_fast < end:
            mesh.append(np.arange(t_fast + 5 * h, end + 5 * h, 5 * h))
        ts = np.unique(np.clip(np.concatenate(mesh), 0.0, end))
        if ts[-1] < end:
            ts = np.append(ts, end)
        dvals = np.array([delta_reduced(float(t), p, temp, tol) for t in ts])
        gvals = np.array([gamma_reduced(float(t), p, tol) for t in ts])
        self._mesh_end = float(ts[-1])
        self._dspline = CubicSpline(ts, dvals)
        self._gspline = CubicSpline(ts, gvals)
        self._dm, self._gm = markovian_rates(p, temp)
        self._plateau = plateau_from is not None

    def delta(self, t):
        t = np.asarray(t, dtype=float)
        if self._plateau:
            out = np.where(t <= self._mesh_end,
                           self._dspline(np.minimum(t, self._mesh_end)),
                           self._dm)
        else:
            out = self._dspline(t)
        return out if out.ndim else float(out)

    def gamma(self, t):
        t = np.asarray(t, dtype=float)
        if self._plateau:
            out = np.where(t <= self._mesh_end,
                           self._gspline(np.minimum(t, self._mesh_end)),
                           self._gm)
        else:
            out = self._gspline(t)
        return out if out.ndim else float(out)

    def lambda_up(self, t):
        return self.delta(t) - self.gamma(t)

    def lambda_down(self, t):
        return self.delta(t) + self.gamma(t)
