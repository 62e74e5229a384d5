import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lwi4 import (Level, SystemParams, bloch_rhs, build_dissipator,
                  build_hamiltonian, build_liouvillian,
                  build_reduced_generator, ket, lindblad_channels, projector,
                  sigma, time_evolve, unvec, vec)
from conftest import random_params, random_state

A, B, C, D = Level.A, Level.B, Level.C, Level.D


def test_hamiltonian_couplings_and_detunings():
    p = SystemParams(omega=2.0, g=0.6, delta1=-4.0, delta2=1.5)
    h = build_hamiltonian(p)
    assert h[A, C] == -1.0 and h[C, A] == -1.0
    assert h[A, B] == -0.3 and h[B, A] == -0.3
    assert h[B, B] == 1.5 and h[C, C] == -4.0
    assert h[A, A] == 0.0 and h[D, D] == 0.0
    assert np.all(h[:, D] == 0.0) and np.all(h[D, :] == 0.0)


def test_hamiltonian_is_hermitian():
    rng = np.random.default_rng(11)
    for _ in range(10):
        h = build_hamiltonian(random_params(rng))
        np.testing.assert_allclose(h, h.conj().T, atol=0.0)


def test_channel_inventory():
    p = SystemParams(gamma_ab=0.1, gamma_ac=0.2, gamma_bd=0.3, gamma_cd=0.4,
                     r_bd=0.5, r_cd=0.6)
    channels = lindblad_channels(p)
    assert len(channels) == 6
    expected = [((B, A), 0.1), ((C, A), 0.2), ((D, B), 0.8), ((D, C), 1.0),
                ((B, D), 0.5), ((C, D), 0.6)]
    for ch, ((out, inp), rate) in zip(channels, expected):
        np.testing.assert_array_equal(ch.operator, sigma(out, inp))
        assert ch.rate == pytest.approx(rate)


def test_dissipator_pure_upper_decay():
    p = SystemParams(gamma_ab=1.0)
    drho = unvec(build_dissipator(p) @ vec(projector(A)))
    np.testing.assert_allclose(np.diag(drho), [-1.0, 1.0, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(drho - np.diag(np.diag(drho)), 0.0, atol=1e-15)


def test_dissipator_matches_rate_terms_without_fields():
    # fields and detunings off: the full generator is the rate terms alone
    rng = np.random.default_rng(23)
    p = SystemParams(gamma_ab=1.0, gamma_ac=12.0, gamma_bd=0.5, gamma_cd=0.5,
                     r_bd=1.0, r_cd=0.5)
    dis = build_dissipator(p)
    np.testing.assert_allclose(build_liouvillian(p), dis, atol=1e-15)
    for _ in range(100):
        rho = random_state(rng)
        np.testing.assert_allclose(unvec(dis @ vec(rho)), bloch_rhs(p, rho),
                                   atol=1e-12)


def test_bloch_rhs_equals_superoperator():
    # the keystone: two independently written generators must agree
    rng = np.random.default_rng(101)
    for _ in range(100):
        p = random_params(rng)
        rho = random_state(rng)
        lhs = bloch_rhs(p, rho)
        rhs = unvec(build_liouvillian(p) @ vec(rho))
        assert np.max(np.abs(lhs - rhs)) < 1e-12
        assert abs(lhs.trace()) < 1e-12
        assert np.max(np.abs(lhs - lhs.conj().T)) < 1e-12


def test_generator_annihilates_trace():
    rng = np.random.default_rng(29)
    for _ in range(10):
        liou = build_liouvillian(random_params(rng))
        trace_row = liou[0] + liou[5] + liou[10] + liou[15]
        assert np.max(np.abs(trace_row)) < 1e-12


def test_generator_preserves_hermiticity():
    rng = np.random.default_rng(31)
    for _ in range(10):
        p = random_params(rng)
        rho = random_state(rng)
        drho = unvec(build_liouvillian(p) @ vec(rho))
        assert np.max(np.abs(drho - drho.conj().T)) < 1e-12


def test_vec_unvec_round_trip_and_layout():
    rng = np.random.default_rng(37)
    rho = random_state(rng)
    v = vec(rho)
    np.testing.assert_array_equal(unvec(v), rho)
    # populations sit at stride-5 positions of the vectorized state
    np.testing.assert_array_equal(v[[0, 5, 10, 15]], np.diag(rho))
    assert v[1] == rho[1, 0]  # column-major stacking


def test_vec_unvec_shape_errors():
    with pytest.raises(ValueError):
        vec(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        unvec(np.zeros(15))


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_vec_is_linear(a, b):
    x = np.arange(16, dtype=complex).reshape(4, 4)
    y = (np.arange(16, dtype=complex)[::-1] * 1j).reshape(4, 4)
    np.testing.assert_allclose(vec(a * x + b * y), a * vec(x) + b * vec(y),
                               atol=1e-9)


def test_probe_coherence_decay_rate_and_phase():
    # with both fields off the probe coherence decays at half the total
    # width of its two levels and precesses at the probe detuning
    p = SystemParams(delta2=2.0, gamma_ab=0.4, gamma_ac=0.6, gamma_bd=0.5,
                     r_bd=0.3, gamma_cd=0.9, r_cd=0.7)
    psi = (ket(A) + ket(B)) / math.sqrt(2)
    rho0 = np.outer(psi, psi.conj())
    t = 2.0
    rho_t = time_evolve(p, rho0, t, 1e-3).final
    width = p.r_bd + p.gamma_bd + p.gamma_ab + p.gamma_ac
    expected = 0.5 * np.exp(-(0.5 * width + 1j * p.delta2) * t)
    assert abs(rho_t[B, A] - expected) < 1e-9


def test_reduced_generator_has_no_repopulation():
    # upper-level decay acts as pure loss: nothing arrives in b, c, or d
    p = SystemParams(omega=2.0, g=1.0, gamma_ab=0.7, gamma_ac=0.4,
                     gamma_bd=0.6, gamma_cd=0.8, r_bd=0.5, r_cd=0.9)
    drho = unvec(build_reduced_generator(p) @ vec(projector(A)))
    assert drho[A, A].real == pytest.approx(-p.gamma_a, abs=1e-14)
    for lv in (B, C, D):
        assert abs(drho[lv, lv]) < 1e-14
    # and the pumps are dropped entirely: from |d><d| nothing moves
    drho_d = unvec(build_reduced_generator(p) @ vec(projector(D)))
    assert np.max(np.abs(drho_d)) < 1e-14


def test_reduced_generator_keeps_lower_decay():
    p = SystemParams(gamma_bd=0.6, gamma_cd=0.8, r_bd=0.5, r_cd=0.9)
    drho = unvec(build_reduced_generator(p) @ vec(projector(B)))
    assert drho[B, B].real == pytest.approx(-p.gamma_bd, abs=1e-14)
    assert drho[D, D].real == pytest.approx(p.gamma_bd, abs=1e-14)
