"""Direct integration of the secular master equation on a truncated
Fock space.

    d rho/dt = (Delta-gamma)/2 (2 a+ rho a - a a+ rho - rho a a+)
             + (Delta+gamma)/2 (2 a rho a+ - a+ a rho - rho a+ a)

There is no Hamiltonian commutator: the equation lives in the
interaction picture after the secular approximation.  Evolution with
temporarily negative channel rates is allowed (that is the point); the
diagnostics record the minimum eigenvalue so complete-positivity
violations can be observed rather than hidden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .kernels import RateModel
from .spectral import SpectrumParams, TemperatureRegime

__all__ = [
    "FockState",
    "EvolutionDiagnostics",
    "TruncationError",
    "lowering_operator",
    "fock_state",
    "thermal_state",
    "lindblad_rhs",
    "mean_n",
    "evolve",
]

TAIL_WARN = 1e-6    # top-two-level population that raises the flag
TAIL_ERROR = 1e-3   # top-level population that aborts the run


class TruncationError(RuntimeError):
    """Population reached the top of the truncated Fock space."""


def lowering_operator(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return a


@dataclass
class FockState:
    """Truncated density matrix of the oscillator at time ``t``.

    ``dim`` = N_max + 1 retained levels.  Construction enforces
    Hermiticity (1e-12) and unit trace (1e-8); the tail-mass bookkeeping
    happens during evolution.
    """

    dim: int
    matrix: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {m.shape} != ({self.dim}, {self.dim})")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian to 1e-12")
        if abs(np.trace(m).real - 1.0) > 1e-8 or abs(np.trace(m).imag) > 1e-12:
            raise ValueError("density matrix trace differs from 1 by > 1e-8")
        self.matrix = m

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))

    @property
    def tail_mass(self) -> float:
        return float(self.populations[-2:].sum())


@dataclass
class EvolutionDiagnostics:
    """Per-snapshot health record of a master-equation run."""

    min_eigenvalue: np.ndarray
    trace_drift: float
    truncation_flag: bool


def fock_state(n: int, dim: int, t: float = 0.0) -> FockState:
    """Pure number state |n><n| in a dim-dimensional space."""
    if not (0 <= n < dim):
        raise ValueError(f"level {n} outside 0..{dim - 1}")
    m = np.zeros((dim, dim), dtype=complex)
    m[n, n] = 1.0
    return FockState(dim=dim, matrix=m, t=t)


def thermal_state(theta: float, dim: int, t: float = 0.0) -> FockState:
    """Truncated thermal state at dimensionless temperature theta."""
    if theta <= 0:
        return fock_state(0, dim, t)
    q = np.exp(-np.arange(dim) / theta)
    m = np.diag(q / q.sum()).astype(complex)
    return FockState(dim=dim, matrix=m, t=t)


def lindblad_rhs(state: FockState | np.ndarray, lambda_up: float,
                 lambda_down: float) -> np.ndarray:
    """Right-hand side of the secular master equation (matrix products).

    Traceless by construction in the truncated algebra; leakage shows up
    as population pile-up at the top level instead.
    """
    rho = state.matrix if isinstance(state, FockState) else np.asarray(state)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    a = lowering_operator(rho.shape[0])
    ad = a.conj().T
    aad = a @ ad
    n_op = ad @ a
    up = 2.0 * ad @ rho @ a - aad @ rho - rho @ aad
    down = 2.0 * a @ rho @ ad - n_op @ rho - rho @ n_op
    return 0.5 * lambda_up * up + 0.5 * lambda_down * down


class _FastDissipator:
    """Elementwise form of :func:`lindblad_rhs`, O(dim^2) per call.

    Identical to the matrix-product definition including the truncated
    edge behaviour (verified in the test suite).
    """

    def __init__(self, dim: int):
        sq = np.sqrt(np.arange(1.0, dim))
        self.cross = np.outer(sq, sq)
        n_diag = np.arange(float(dim))
        d_diag = np.r_[np.arange(1.0, dim), 0.0]  # diag of truncated a a+
        self.up_diag = 0.5 * (d_diag[:, None] + d_diag[None, :])
        self.down_diag = 0.5 * (n_diag[:, None] + n_diag[None, :])

    def __call__(self, rho: np.ndarray, lam_up: float, lam_down: float):
        out = np.zeros_like(rho)
        out[1:, 1:] += lam_up * self.cross * rho[:-1, :-1]
        out[:-1, :-1] += lam_down * self.cross * rho[1:, 1:]
        out -= (lam_up * self.up_diag + lam_down * self.down_diag) * rho
        return out


def mean_n(state: FockState) -> float:
    """Expectation of the number operator, Tr[rho a+ a]."""
    diag = np.diag(state.matrix)
    if np.max(np.abs(diag.imag)) > 1e-12:
        raise ValueError("density matrix diagonal is not real to 1e-12")
    out = float(np.sum(diag.real * np.arange(state.dim)))
    if out < -1e-10:
        raise ValueError(f"mean occupation {out} below -1e-10")
    return out


def _coerce_rates(rates, p, temp, t_end, tol):
    if rates is None:
        rates = RateModel(p, temp, t_end, tol=min(tol, 1e-9))
    if hasattr(rates, "lambda_up") and hasattr(rates, "lambda_down"):
        return rates.lambda_up, rates.lambda_down
    up, down = rates
    if np.isscalar(up):
        return (lambda t, u=float(up): u), (lambda t, d=float(down): d)
    return up, down


def evolve(initial: FockState, p: SpectrumParams, temp: TemperatureRegime,
           t_grid, tol: float = 1e-9, rates=None):
    """Integrate the master equation over ``t_grid``.

    Rates default to a :class:`~qbrownian.kernels.RateModel` memoized on
    a dense mesh; pass ``rates=(lam_up, lam_down)`` (constants or
    callables) to inject other coefficients, e.g. the constant Markovian
    values.  Returns ``(snapshots, diagnostics)``; raises
    :class:`TruncationError` once the top-level population exceeds 1e-3.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    lam_up, lam_down = _coerce_rates(rates, p, temp, float(t_grid[-1]), tol)
    dim = initial.dim
    fast = _FastDissipator(dim)

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        return fast(rho, float(lam_up(t)), float(lam_down(t))).ravel()

    rho = initial.matrix.astype(complex).copy()
    snapshots = [FockState(dim=dim, matrix=rho.copy(), t=float(t_grid[0]))]
    min_eigs = [float(np.linalg.eigvalsh(rho)[0])]
    drift = abs(float(np.trace(rho).real) - 1.0)
    flag = initial.tail_mass > TAIL_WARN

    for t0, t1 in zip(t_grid[:-1], t_grid[1:]):
        sol = solve_ivp(rhs, (float(t0), float(t1)), rho.ravel(),
                        method="DOP853", rtol=tol, atol=tol * 1e-3,
                        dense_output=False)
        if not sol.success:
            raise RuntimeError(f"master equation step failed at t={t1}: "
                               f"{sol.message}")
        rho = sol.y[:, -1].reshape(dim, dim)
        rho = 0.5 * (rho + rho.conj().T)
        pops = np.real(np.diag(rho))
        if pops[-1] > TAIL_ERROR:
            raise TruncationError(
                f"top Fock level holds population {pops[-1]:.3e} > "
                f"{TAIL_ERROR} at t={t1}; enlarge the truncation")
        if pops[-2:].sum() > TAIL_WARN:
            flag = True
        drift = max(drift, abs(float(np.trace(rho).real) - 1.0))
        snapshots.append(FockState(dim=dim, matrix=rho.copy(), t=float(t1)))
        min_eigs.append(float(np.linalg.eigvalsh(rho)[0]))

    diags = EvolutionDiagnostics(min_eigenvalue=np.asarray(min_eigs),
                                 trace_drift=drift, truncation_flag=flag)
    return snapshots, diags
