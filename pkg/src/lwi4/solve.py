"""Steady states and time evolution for the four-level master equation.

The steady state comes from a dense linear solve: one population row of the
(rank-deficient) generator is traded for the trace constraint.  Dynamics use a
fixed-step classical Runge-Kutta integrator on the vectorized state, which
preserves the trace exactly (it is a linear invariant) and converges to the
same fixed point as the linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .liouville import DIM, build_liouvillian, unvec, vec
from .model import N_LEVELS, SystemParams

# vec indices of the diagonal entries rho_aa, rho_bb, rho_cc, rho_dd
_POPULATION_ROWS = (0, 5, 10, 15)


class SteadyStateError(RuntimeError):
    """Base class for steady-state solver failures."""


class DegenerateSteadyStateError(SteadyStateError):
    """The generator has no unique steady state (singular constrained system)."""


class NonConvergenceError(SteadyStateError):
    """The solved state does not satisfy the stationarity residual tolerance."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"steady-state residual {residual:.3e} exceeds {tol:.3e}")
        self.residual = residual
        self.tol = tol


class InstabilityError(RuntimeError):
    """The integrator produced an unphysical state (wrong trace/negativity/NaN)."""


@dataclass(frozen=True)
class SteadyStateResult:
    """Steady state plus solve diagnostics.

    ``residual`` is the max-norm of the generator applied to the returned
    state (how stationary it really is); ``condition`` is the condition number
    of the constrained linear system (how much to trust the digits).
    """

    rho: np.ndarray
    residual: float
    condition: float


def steady_state(params: SystemParams, *, tol: float = 1e-10) -> SteadyStateResult:
    """Solve L rho = 0 with unit trace by a dense constrained linear solve.

    The replaced row is the population row with the smallest diagonal entry of
    the generator (the least-damped population), which keeps the constrained
    matrix as well conditioned as possible.  The result is Hermitized before
    the residual check.  Raises :class:`DegenerateSteadyStateError` if the
    constrained system is singular (e.g. all rates zero) and
    :class:`NonConvergenceError` if the residual check fails.
    """
    liou = build_liouvillian(params)
    constrained = liou.copy()
    row = min(_POPULATION_ROWS, key=lambda r: abs(liou[r, r]))
    constrained[row, :] = 0.0
    constrained[row, _POPULATION_ROWS] = 1.0
    rhs = np.zeros(DIM, dtype=complex)
    rhs[row] = 1.0

    try:
        v = np.linalg.solve(constrained, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSteadyStateError(
            f"constrained steady-state system is singular: {exc}") from exc
    condition = float(np.linalg.cond(constrained))

    rho = unvec(v)
    rho = 0.5 * (rho + rho.conj().T)
    residual = float(np.max(np.abs(liou @ vec(rho))))
    if not np.isfinite(residual) or residual > tol:
        if condition > 1e12:
            raise DegenerateSteadyStateError(
                f"no unique steady state (condition {condition:.3e}, "
                f"residual {residual:.3e})")
        raise NonConvergenceError(residual, tol)
    return SteadyStateResult(rho=rho, residual=residual, condition=condition)


@dataclass(frozen=True)
class Trajectory:
    """Sampled density-matrix trajectory: ``states[k]`` at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def time_evolve(params: SystemParams, rho0: np.ndarray, t_final: float,
                dt: float, *, sample_stride: int = 1) -> Trajectory:
    """Integrate the master equation with fixed-step classical Runge-Kutta.

    Samples every ``sample_stride`` steps (the initial and final states are
    always included).  Each sampled state is checked for finiteness, trace
    drift beyond 1e-9, and eigenvalues below -1e-6; any violation raises
    :class:`InstabilityError` (the usual cause is a step size too large for
    the fastest rate in ``params``).
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if sample_stride < 1:
        raise ValueError(f"sample_stride must be >= 1, got {sample_stride}")
    rho0 = np.asarray(rho0, dtype=complex)
    liou = build_liouvillian(params)
    n_steps = max(int(round(t_final / dt)), 0)

    v = vec(rho0).copy()
    times = [0.0]
    samples = [unvec(v).copy()]

    def _check(state: np.ndarray, t: float) -> None:
        if not np.all(np.isfinite(state.view(float))):
            raise InstabilityError(f"non-finite state at t = {t:g}")
        drift = abs(state.trace() - rho0.trace())
        if drift > 1e-9:
            raise InstabilityError(f"trace drifted by {drift:.3e} at t = {t:g}")
        lo = np.linalg.eigvalsh(0.5 * (state + state.conj().T)).min()
        if lo < -1e-6:
            raise InstabilityError(f"eigenvalue {lo:.3e} at t = {t:g}")

    _check(samples[0], 0.0)
    for step in range(1, n_steps + 1):
        k1 = liou @ v
        k2 = liou @ (v + 0.5 * dt * k1)
        k3 = liou @ (v + 0.5 * dt * k2)
        k4 = liou @ (v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % sample_stride == 0 or step == n_steps:
            state = unvec(v).copy()
            _check(state, step * dt)
            times.append(step * dt)
            samples.append(state)
    return Trajectory(times=np.array(times), states=np.array(samples))


def unitary_evolve(hamiltonian: np.ndarray, psi0: np.ndarray,
                   t: float) -> np.ndarray:
    """Evolve a pure state under a Hermitian Hamiltonian: exp(-iHt) psi0."""
    h = np.asarray(hamiltonian, dtype=complex)
    if h.shape != (N_LEVELS, N_LEVELS):
        raise ValueError(f"expected a 4x4 Hamiltonian, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > 1e-12:
        raise ValueError("Hamiltonian is not Hermitian")
    w, basis = np.linalg.eigh(h)
    return basis @ (np.exp(-1j * w * t) * (basis.conj().T @ np.asarray(psi0)))


def decompose_initial_state(psi0: np.ndarray,
                            eig) -> tuple[complex, complex, complex]:
    """Coefficients of a pure state on the two-field eigenbasis.

    Returns (<E+|psi0>, <E-|psi0>, <E0|psi0>) for a state supported on the
    three coupled levels; the squared magnitudes sum to the squared norm of
    ``psi0``.  ``eig`` is a :class:`lwi4.analysis.TripodEigenSystem`.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (N_LEVELS,):
        raise ValueError(f"expected a 4-vector, got shape {psi0.shape}")
    if abs(psi0[3]) > 1e-12:
        raise ValueError("initial state must have no reservoir-level support")
    return (complex(np.vdot(eig.state_plus, psi0)),
            complex(np.vdot(eig.state_minus, psi0)),
            complex(np.vdot(eig.state_zero, psi0)))
