import math

import numpy as np
import pytest

from lwi4 import (DegenerateSteadyStateError, InstabilityError, Level,
                  SystemParams, assert_physical, build_hamiltonian,
                  decompose_initial_state, ket, maximally_mixed, preset,
                  projector, resolve_point, steady_state, time_evolve,
                  tripod_eigensystem, tripod_frame_hamiltonian,
                  unitary_evolve)
from conftest import random_params, random_state

A, B, C, D = Level.A, Level.B, Level.C, Level.D


def test_decay_chain_empties_into_reservoir():
    p = SystemParams(gamma_ab=1.0, gamma_ac=0.3, gamma_bd=2.0, gamma_cd=0.7)
    result = steady_state(p)
    np.testing.assert_allclose(result.rho, projector(D), atol=1e-12)
    assert result.residual <= 1e-10


def test_fully_decoupled_system_is_degenerate():
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(SystemParams())


def test_steady_state_physicality_random():
    rng = np.random.default_rng(43)
    for _ in range(20):
        result = steady_state(random_params(rng))
        assert result.residual <= 1e-10
        assert result.condition >= 1.0
        assert_physical(result.rho)


def test_paper_population_point():
    p = resolve_point(preset("fig3"), 12.0)
    rho = steady_state(p).rho
    pops = np.real(np.diag(rho))
    np.testing.assert_allclose(pops, [0.0573, 0.3344, 0.1643, 0.4440],
                               atol=5e-4)


def test_time_evolution_reaches_steady_state():
    p = resolve_point(preset("fig5"), -10.0)
    target = steady_state(p).rho
    final = time_evolve(p, maximally_mixed(), 50.0, 0.005).final
    assert np.max(np.abs(final - target)) < 1e-6


def test_uniqueness_probe():
    p = resolve_point(preset("fig3"), 12.0)
    finals = [time_evolve(p, projector(lv), 100.0, 0.005).final
              for lv in (A, D)]
    assert np.max(np.abs(finals[0] - finals[1])) < 1e-6


def test_null_generator_keeps_state_constant():
    rho0 = maximally_mixed()
    traj = time_evolve(SystemParams(), rho0, 5.0, 0.1)
    assert np.max(np.abs(traj.states - rho0)) == 0.0


def test_pure_exponential_decay():
    p = SystemParams(gamma_ab=1.0)
    traj = time_evolve(p, projector(A), 1.0, 0.01)
    assert traj.final[A, A].real == pytest.approx(math.exp(-1.0), abs=1e-8)
    assert traj.final[B, B].real == pytest.approx(1.0 - math.exp(-1.0),
                                                  abs=1e-8)


def test_trace_is_exactly_conserved():
    p = random_params(np.random.default_rng(47))
    traj = time_evolve(p, random_state(np.random.default_rng(48)), 3.0, 0.002)
    drifts = [abs(s.trace() - 1.0) for s in traj.states]
    assert max(drifts) < 1e-13


def test_oversized_step_raises_instability():
    p = SystemParams(omega=10.0, gamma_ab=1.0)
    with pytest.raises(InstabilityError):
        time_evolve(p, projector(A), 50.0, 10.0)


def test_trajectory_sampling_grid():
    p = SystemParams(gamma_ab=1.0)
    traj = time_evolve(p, projector(A), 1.0, 0.01, sample_stride=10)
    np.testing.assert_allclose(traj.times, np.arange(11) * 0.1, atol=1e-12)
    assert traj.states.shape == (11, 4, 4)


def test_time_evolve_argument_validation():
    with pytest.raises(ValueError):
        time_evolve(SystemParams(), maximally_mixed(), 1.0, 0.0)
    with pytest.raises(ValueError):
        time_evolve(SystemParams(), maximally_mixed(), 1.0, 0.1,
                    sample_stride=0)


def test_unitary_evolve_trivial_cases():
    psi0 = (ket(A) + 1j * ket(C)) / math.sqrt(2)
    h = build_hamiltonian(SystemParams(omega=2.0, delta1=1.0))
    np.testing.assert_allclose(unitary_evolve(h, psi0, 0.0), psi0, atol=1e-14)
    np.testing.assert_allclose(unitary_evolve(np.zeros((4, 4)), psi0, 7.3),
                               psi0, atol=1e-14)


def test_unitary_evolve_preserves_norm():
    rng = np.random.default_rng(53)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = m + m.conj().T
    psi0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi0 /= np.linalg.norm(psi0)
    psi_t = unitary_evolve(h, psi0, 2.7)
    assert abs(np.linalg.norm(psi_t) - 1.0) < 1e-12


def test_unitary_evolve_rejects_non_hermitian():
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = 1.0
    with pytest.raises(ValueError, match="Hermitian"):
        unitary_evolve(h, ket(A), 1.0)


def test_eigenbasis_projections_are_stationary():
    # starting from |c>, the magnitudes of the three eigenbasis projections
    # never move under coherent evolution
    p = SystemParams(omega=3.0, g=0.7, delta1=-2.0, delta2=-2.0)
    eig = tripod_eigensystem(p)
    h = tripod_frame_hamiltonian(p)
    expected = (abs(math.cos(eig.theta) * math.sin(eig.phi)),
                abs(math.cos(eig.theta) * math.cos(eig.phi)),
                abs(math.sin(eig.theta)))
    for t in (0.0, 0.4, 1.9, 6.2):
        psi_t = unitary_evolve(h, ket(C), t)
        projections = (abs(np.vdot(eig.state_plus, psi_t)),
                       abs(np.vdot(eig.state_minus, psi_t)),
                       abs(np.vdot(eig.state_zero, psi_t)))
        np.testing.assert_allclose(projections, expected, atol=1e-12)


def test_decompose_probe_free_level():
    p = SystemParams(omega=1.2, g=0.5, delta1=0.8, delta2=0.8)
    eig = tripod_eigensystem(p)
    cp, cm, c0 = decompose_initial_state(ket(C), eig)
    assert cp == pytest.approx(math.cos(eig.theta) * math.sin(eig.phi),
                               abs=1e-12)
    assert cm == pytest.approx(math.cos(eig.theta) * math.cos(eig.phi),
                               abs=1e-12)
    assert c0 == pytest.approx(-math.sin(eig.theta), abs=1e-12)


def test_decompose_dark_state_itself():
    eig = tripod_eigensystem(SystemParams(omega=2.0, g=1.0))
    coeffs = decompose_initial_state(eig.state_zero, eig)
    np.testing.assert_allclose(coeffs, (0.0, 0.0, 1.0), atol=1e-14)


def test_decompose_completeness():
    rng = np.random.default_rng(59)
    eig = tripod_eigensystem(SystemParams(omega=1.0, g=2.0, delta1=-1.0,
                                          delta2=-1.0))
    for _ in range(10):
        psi = np.zeros(4, dtype=complex)
        psi[:3] = rng.normal(size=3) + 1j * rng.normal(size=3)
        psi /= np.linalg.norm(psi)
        coeffs = decompose_initial_state(psi, eig)
        assert sum(abs(c) ** 2 for c in coeffs) == pytest.approx(1.0,
                                                                 abs=1e-12)


def test_decompose_rejects_reservoir_support():
    eig = tripod_eigensystem(SystemParams(omega=1.0, g=1.0))
    with pytest.raises(ValueError, match="reservoir"):
        decompose_initial_state(ket(D), eig)


def test_dark_population_constant_without_dissipation():
    p = SystemParams(omega=2.0, g=1.0, delta1=1.3, delta2=1.3)
    eig = tripod_eigensystem(p)
    rho0 = random_state(np.random.default_rng(61))
    traj = time_evolve(p, rho0, 5.0, 0.001, sample_stride=100)
    e0 = eig.state_zero
    pops = [np.vdot(e0, s @ e0).real for s in traj.states]
    assert max(pops) - min(pops) < 1e-10
