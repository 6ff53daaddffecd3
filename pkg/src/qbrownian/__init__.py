"""Non-Markovian dissipation of a damped quantum harmonic oscillator.

Dimensionless units throughout: hbar = k_B = 1, omega_0 = 1, time in
1/omega_0, temperature theta = k_B T / omega_0, cutoff omega_c = r.
"""

from .spectral import (CutoffKind, SpectrumParams, TemperatureMode,
                       TemperatureRegime, markovian_rates, spectral_density,
                       spectral_distribution, thermal_occupation,
                       thermalization_time, thermalization_time_normalized)
from .kernels import (ClosedFormError, RateModel, RateTrace,
                      delta_closed_high_t, delta_reduced, gamma_reduced,
                      rate_trace, rates_oracle_2d)
from .heating import (HeatingTrace, big_gamma, heating_exact, heating_markov,
                      heating_ode, heating_short_time)
from .fock import (EvolutionDiagnostics, FockState, TruncationError, evolve,
                   fock_state, lindblad_rhs, lowering_operator, mean_n,
                   thermal_state)
from .quadrature import QuadratureError, adaptive_quad
from .special import (BranchCutError, EvaluationOverflowError, cosint,
                      erf_complex, faddeeva, sinint)

__version__ = "0.1.0"

__all__ = [
    "CutoffKind", "SpectrumParams", "TemperatureMode", "TemperatureRegime",
    "markovian_rates", "spectral_density", "spectral_distribution",
    "thermal_occupation", "thermalization_time",
    "thermalization_time_normalized",
    "ClosedFormError", "RateModel", "RateTrace", "delta_closed_high_t",
    "delta_reduced", "gamma_reduced", "rate_trace", "rates_oracle_2d",
    "HeatingTrace", "big_gamma", "heating_exact", "heating_markov",
    "heating_ode", "heating_short_time",
    "EvolutionDiagnostics", "FockState", "TruncationError", "evolve",
    "fock_state", "lindblad_rhs", "lowering_operator", "mean_n",
    "thermal_state",
    "QuadratureError", "adaptive_quad",
    "BranchCutError", "EvaluationOverflowError", "cosint", "erf_complex",
    "faddeeva", "sinint",
]
