"""Master-equation generators for the driven four-level atom.

Two deliberately independent constructions of the same generator live here:

* :func:`build_liouvillian` assembles the 16x16 superoperator from the
  rotating-frame Hamiltonian and the six jump channels via Kronecker products
  (column-stacking convention).
* :func:`bloch_rhs` hand-codes the coupled component equations for the density
  matrix entries, term by term.

They must agree to machine precision on arbitrary states and parameters; the
test suite enforces that equivalence, so a typo in one route is caught by the
other.  Use the superoperator for solvers; use the component form as the
independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Level, N_LEVELS, SystemParams, projector

DIM = N_LEVELS * N_LEVELS  # dimension of the vectorized state space

_IDENT = np.eye(N_LEVELS, dtype=complex)


def sigma(upper: Level | int, lower: Level | int) -> np.ndarray:
    """Transition operator |upper><lower| as a dense complex matrix."""
    op = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    op[int(upper), int(lower)] = 1.0
    return op


@dataclass(frozen=True)
class LindbladChannel:
    """One jump channel: ``rate`` multiplies the dissipator of ``operator``."""

    operator: np.ndarray
    rate: float


def lindblad_channels(params: SystemParams) -> tuple[LindbladChannel, ...]:
    """The six jump channels of the model, in a fixed documented order.

    Spontaneous decay a->b, a->c, b->d, c->d (the last two augmented by the
    pump rates, since a thermal pump stimulates both directions), then the
    upward pump channels d->b and d->c.
    """
    a, b, c, d = Level.A, Level.B, Level.C, Level.D
    return (
        LindbladChannel(sigma(b, a), params.gamma_ab),
        LindbladChannel(sigma(c, a), params.gamma_ac),
        LindbladChannel(sigma(d, b), params.gamma_bd + params.r_bd),
        LindbladChannel(sigma(d, c), params.gamma_cd + params.r_cd),
        LindbladChannel(sigma(b, d), params.r_bd),
        LindbladChannel(sigma(c, d), params.r_cd),
    )


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian (hbar = 1).

    Diagonal carries the detunings of ``b`` and ``c``; the off-diagonal block
    couples ``a`` to ``c`` (drive) and ``a`` to ``b`` (probe) with the usual
    -1/2 convention for Rabi frequencies.
    """
    h = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    h[Level.B, Level.B] = params.delta2
    h[Level.C, Level.C] = params.delta1
    h[Level.A, Level.C] = -0.5 * params.omega
    h[Level.C, Level.A] = -0.5 * params.omega
    h[Level.A, Level.B] = -0.5 * params.g
    h[Level.B, Level.A] = -0.5 * params.g
    return h


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a 4x4 matrix into a length-16 vector."""
    rho = np.asarray(rho)
    if rho.shape != (N_LEVELS, N_LEVELS):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return rho.reshape(DIM, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if v.shape != (DIM,):
        raise ValueError(f"expected a length-{DIM} vector, got shape {v.shape}")
    return v.reshape((N_LEVELS, N_LEVELS), order="F")


def _left(op: np.ndarray) -> np.ndarray:
    # vec(op @ rho) = (I (x) op) vec(rho)
    return np.kron(_IDENT, op)


def _right(op: np.ndarray) -> np.ndarray:
    # vec(rho @ op) = (op.T (x) I) vec(rho)
    return np.kron(op.T, _IDENT)


def _dissipator(op: np.ndarray) -> np.ndarray:
    # D[op] rho = op rho op+ - {op+ op, rho}/2, vectorized
    opd_op = op.conj().T @ op
    return (np.kron(op.conj(), op)
            - 0.5 * _left(opd_op) - 0.5 * _right(opd_op))


def build_dissipator(params: SystemParams) -> np.ndarray:
    """Sum of the rate-weighted jump dissipators as a 16x16 superoperator."""
    d = np.zeros((DIM, DIM), dtype=complex)
    for ch in lindblad_channels(params):
        if ch.rate != 0.0:
            d += ch.rate * _dissipator(ch.operator)
    return d


def build_liouvillian(params: SystemParams) -> np.ndarray:
    """Full generator: commutator part plus dissipator, acting on vec(rho)."""
    h = build_hamiltonian(params)
    return -1j * (_left(h) - _right(h)) + build_dissipator(params)


def build_reduced_generator(params: SystemParams) -> np.ndarray:
    """Loss-only generator used for the dressed-basis loss budget.

    Keeps the coherent part and the decay of ``b`` and ``c`` into the
    reservoir, treats decay out of ``a`` as pure loss (anticommutator only, no
    refeeding of ``b``/``c``), and drops both incoherent pumps.  It is not
    trace-preserving; its point is that the instantaneous rate it assigns to a
    dressed population isolates gain/loss of that state without reshuffling
    terms.
    """
    h = build_hamiltonian(params)
    gen = -1j * (_left(h) - _right(h))
    gen += params.gamma_bd * _dissipator(sigma(Level.D, Level.B))
    gen += params.gamma_cd * _dissipator(sigma(Level.D, Level.C))
    p_a = projector(Level.A)
    gen -= 0.5 * params.gamma_a * (_left(p_a) + _right(p_a))
    return gen


def bloch_rhs(params: SystemParams, rho: np.ndarray) -> np.ndarray:
    """Time derivative of the density matrix, written out entry by entry.

    Independent of :func:`build_liouvillian` by construction: every line below
    is a coupled equation for one matrix element.  The returned matrix is
    filled from the upper triangle plus Hermiticity, and its trace vanishes
    identically because the population lines pair gains with losses.
    """
    p = params
    a, b, c, d = Level.A, Level.B, Level.C, Level.D
    r_aa, r_bb, r_cc, r_dd = rho[a, a], rho[b, b], rho[c, c], rho[d, d]
    r_ab, r_ac, r_bc = rho[a, b], rho[a, c], rho[b, c]
    r_ad, r_bd, r_cd = rho[a, d], rho[b, d], rho[c, d]

    half_om = 0.5 * p.omega
    half_g = 0.5 * p.g
    gamma_a = p.gamma_ab + p.gamma_ac

    out = np.zeros_like(rho, dtype=complex)

    # populations
    out[a, a] = (1j * half_om * (r_ac.conjugate() - r_ac)
                 + 1j * half_g * (r_ab.conjugate() - r_ab)
                 - gamma_a * r_aa)
    out[b, b] = (1j * half_g * (r_ab - r_ab.conjugate())
                 + p.gamma_ab * r_aa - (p.gamma_bd + p.r_bd) * r_bb
                 + p.r_bd * r_dd)
    out[c, c] = (1j * half_om * (r_ac - r_ac.conjugate())
                 + p.gamma_ac * r_aa - (p.gamma_cd + p.r_cd) * r_cc
                 + p.r_cd * r_dd)
    out[d, d] = ((p.gamma_bd + p.r_bd) * r_bb + (p.gamma_cd + p.r_cd) * r_cc
                 - (p.r_bd + p.r_cd) * r_dd)

    # optical coherences with the upper level
    out[a, b] = (-(0.5 * (gamma_a + p.gamma_bd + p.r_bd)
                   - 1j * p.delta2) * r_ab
                 + 1j * half_om * r_bc.conjugate()
                 + 1j * half_g * (r_bb - r_aa))
    out[a, c] = (-(0.5 * (gamma_a + p.gamma_cd + p.r_cd)
                   - 1j * p.delta1) * r_ac
                 + 1j * half_om * (r_cc - r_aa)
                 + 1j * half_g * r_bc)
    # low-frequency coherence between the two lower levels
    out[b, c] = (-(0.5 * (p.gamma_bd + p.gamma_cd + p.r_bd + p.r_cd)
                   - 1j * (p.delta1 - p.delta2)) * r_bc
                 - 1j * half_om * r_ab.conjugate()
                 + 1j * half_g * r_ac)
    # coherences with the reservoir level (decoupled from the block above)
    out[a, d] = (-0.5 * (gamma_a + p.r_bd + p.r_cd) * r_ad
                 + 1j * half_g * r_bd + 1j * half_om * r_cd)
    out[b, d] = (-(0.5 * (p.gamma_bd + 2.0 * p.r_bd + p.r_cd) + 1j * p.delta2)
                 * r_bd + 1j * half_g * r_ad)
    out[c, d] = (-(0.5 * (p.gamma_cd + 2.0 * p.r_cd + p.r_bd) + 1j * p.delta1)
                 * r_cd + 1j * half_om * r_ad)

    for i, j in ((a, b), (a, c), (b, c), (a, d), (b, d), (c, d)):
        out[j, i] = out[i, j].conjugate()
    return out
