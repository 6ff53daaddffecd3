"""Reservoir description: spectral densities, thermal occupation and
Markovian rates.

Everything is expressed in dimensionless oscillator units: hbar = k_B = 1,
frequencies in units of the oscillator frequency omega_0, time in units of
1/omega_0 and temperature as theta = k_B T / omega_0.  The cutoff frequency
then equals the resonance parameter r = omega_c / omega_0.

The reservoir family is

    J(omega) = alpha^2 r^(1-s) omega^s exp(-omega / r)

with s = 1/2, 1, 3 the sub-Ohmic, Ohmic and super-Ohmic presets.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CutoffKind",
    "TemperatureMode",
    "SpectrumParams",
    "TemperatureRegime",
    "spectral_density",
    "thermal_occupation",
    "spectral_distribution",
    "markovian_rates",
    "thermalization_time",
    "thermalization_time_normalized",
]

SUB_OHMIC_S = 0.5
OHMIC_S = 1.0
SUPER_OHMIC_S = 3.0

# Threshold below which the high-temperature approximation N ~ theta/omega
# becomes visibly inaccurate near resonance.
HIGH_T_THETA_MIN = 10.0


class CutoffKind(enum.Enum):
    """Cutoff shape of the spectral density.

    Only the exponential cutoff is implemented; the enum is the seam for
    other shapes should they ever be needed.
    """

    EXPONENTIAL = "exponential"


class TemperatureMode(enum.Enum):
    ZERO = "zero"
    HIGH_T = "high_t"
    EXACT = "exact"


@dataclass(frozen=True)
class SpectrumParams:
    """Reservoir parameters: exponent ``s``, coupling ``alpha`` and
    resonance parameter ``r`` = cutoff / oscillator frequency."""

    s: float
    alpha: float
    r: float
    cutoff: CutoffKind = CutoffKind.EXPONENTIAL

    def __post_init__(self):
        if not (self.s > 0):
            raise ValueError(f"spectral exponent s must be > 0, got {self.s}")
        if not (self.alpha >= 0):
            raise ValueError(f"coupling alpha must be >= 0, got {self.alpha}")
        if not (self.r > 0):
            raise ValueError(f"resonance parameter r must be > 0, got {self.r}")

    @classmethod
    def sub_ohmic(cls, alpha: float, r: float) -> "SpectrumParams":
        return cls(SUB_OHMIC_S, alpha, r)

    @classmethod
    def ohmic(cls, alpha: float, r: float) -> "SpectrumParams":
        return cls(OHMIC_S, alpha, r)

    @classmethod
    def super_ohmic(cls, alpha: float, r: float) -> "SpectrumParams":
        return cls(SUPER_OHMIC_S, alpha, r)


@dataclass(frozen=True)
class TemperatureRegime:
    """Reservoir temperature handling.

    ``ZERO`` ignores ``theta``; ``HIGH_T`` uses N(omega) = theta/omega and
    warns when theta < 10 where that approximation degrades; ``EXACT``
    uses the Bose-Einstein occupation and requires theta > 0.
    """

    mode: TemperatureMode
    theta: float = 0.0

    def __post_init__(self):
        if self.mode is TemperatureMode.HIGH_T:
            if self.theta < 0:
                raise ValueError("high-T regime needs theta >= 0")
            if self.theta < HIGH_T_THETA_MIN:
                warnings.warn(
                    f"high-T approximation requested at theta={self.theta}; "
                    f"it is only reliable for theta >= {HIGH_T_THETA_MIN}",
                    stacklevel=3)
        elif self.mode is TemperatureMode.EXACT:
            if not (self.theta > 0):
                raise ValueError("exact Bose-Einstein regime needs theta > 0")

    @classmethod
    def zero(cls) -> "TemperatureRegime":
        return cls(TemperatureMode.ZERO)

    @classmethod
    def high_t(cls, theta: float) -> "TemperatureRegime":
        return cls(TemperatureMode.HIGH_T, theta)

    @classmethod
    def exact(cls, theta: float) -> "TemperatureRegime":
        return cls(TemperatureMode.EXACT, theta)


def spectral_density(omega, p: SpectrumParams):
    """J(omega) = alpha^2 r^(1-s) omega^s exp(-omega/r), omega >= 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("spectral_density: omega must be >= 0")
    out = p.alpha**2 * p.r**(1.0 - p.s) * omega**p.s * np.exp(-omega / p.r)
    return out if out.ndim else float(out)


def thermal_occupation(omega, t: TemperatureRegime):
    """Mean number of reservoir excitations N(omega) at frequency omega > 0.

    Zero -> 0, high-T -> theta/omega, exact -> 1/(exp(omega/theta) - 1).
    """
    omega = np.asarray(omega, dtype=float)
    if t.mode is TemperatureMode.ZERO:
        if np.any(omega < 0):
            raise ValueError("thermal_occupation: omega must be >= 0")
        out = np.zeros_like(omega)
    else:
        if np.any(omega <= 0):
            raise ValueError(
                "thermal_occupation: omega must be > 0 (N diverges at 0)")
        if t.mode is TemperatureMode.HIGH_T:
            out = t.theta / omega
        else:
            out = 1.0 / np.expm1(omega / t.theta)
    return out if out.ndim else float(out)


def spectral_distribution(omega, p: SpectrumParams, t: TemperatureRegime):
    """Temperature-weighted spectrum I(omega) = J(omega) [N(omega) + 1/2].

    The high-T branch is the closed form alpha^2 theta (omega/r)^(s-1)
    exp(-omega/r) (the 1/2 is negligible against theta/omega there); the
    zero-T branch is J/2.
    """
    omega = np.asarray(omega, dtype=float)
    if t.mode is TemperatureMode.ZERO:
        out = 0.5 * spectral_density(omega, p)
        return out
    if np.any(omega <= 0):
        raise ValueError("spectral_distribution: omega must be > 0 for "
                         "finite-temperature regimes")
    if t.mode is TemperatureMode.HIGH_T:
        out = p.alpha**2 * t.theta * (omega / p.r)**(p.s - 1.0) \
            * np.exp(-omega / p.r)
    else:
        out = np.asarray(spectral_density(omega, p)
                         * (thermal_occupation(omega, t) + 0.5))
    return out if out.ndim else float(out)


def markovian_rates(p: SpectrumParams, t: TemperatureRegime):
    """Long-time constant rates (Delta_M, gamma_M) = (pi I(1), pi J(1) / 2).

    gamma_M is temperature independent.
    """
    delta_m = math.pi * spectral_distribution(1.0, p, t)
    gamma_m = 0.5 * math.pi * spectral_density(1.0, p)
    return delta_m, gamma_m


def thermalization_time_normalized(p: SpectrumParams) -> float:
    """Coupling-independent thermalization time r^(s-1) exp(1/r)."""
    return p.r**(p.s - 1.0) * math.exp(1.0 / p.r)


def thermalization_time(p: SpectrumParams) -> float:
    """Reservoir thermalization time 1/(pi J(1)) in units of 1/omega_0.

    Infinite for a decoupled reservoir (alpha = 0).
    """
    norm = thermalization_time_normalized(p)
    if p.alpha == 0:
        return math.inf
    return norm / (math.pi * p.alpha**2)
