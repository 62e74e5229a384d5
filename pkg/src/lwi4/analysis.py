"""Derived observables: probe response, analytic limits, dressed bases.

Everything in here is a pure function of a parameter set and/or a density
matrix.  The closed-form eigensystems carry fixed phase and branch
conventions (documented on each constructor) so that the dressed-state
populations and the initial-state decompositions are reproducible; the test
suite checks all closed forms against a generic Hermitian eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .liouville import build_reduced_generator, unvec, vec
from .model import Level, SystemParams


class DegenerateBasisError(ValueError):
    """The requested dressed basis is not defined (vanishing coupling)."""


class DegenerateParametersError(ValueError):
    """A closed form is requested at parameters where it is 0/0."""


@dataclass(frozen=True)
class ProbeResponse:
    """Probe-field response read off a state: gain is proportional to im_rho_ba."""

    im_rho_ba: float
    re_rho_ba: float
    re_rho_bc: float


def probe_response(rho: np.ndarray) -> ProbeResponse:
    """Extract the probe observables, with the convention rho_ba = <b|rho|a>."""
    r_ba = rho[Level.B, Level.A]
    r_bc = rho[Level.B, Level.C]
    return ProbeResponse(im_rho_ba=float(r_ba.imag),
                         re_rho_ba=float(r_ba.real),
                         re_rho_bc=float(r_bc.real))


def _require_resonant_unpumped_b(p: SystemParams, what: str) -> None:
    if p.delta1 != 0.0 or p.delta2 != 0.0:
        raise ValueError(f"{what} requires delta1 = delta2 = 0")
    if p.r_bd != 0.0:
        raise ValueError(f"{what} requires r_bd = 0")


def _strong_drive_denominator(p: SystemParams) -> float:
    # shared bracket of the strong-drive closed forms
    return ((2.0 * p.r_cd + p.gamma_cd) * p.gamma_bd
            + p.r_cd * (p.gamma_bd + p.gamma_ab)
            + p.gamma_bd * p.gamma_ab)


def analytic_resonant_gain(p: SystemParams) -> float:
    """Closed-form Im rho_ba in the strong-drive limit, on resonance.

    Valid for delta1 = delta2 = 0, r_bd = 0, and omega much larger than every
    other rate; the numeric steady state converges to this value as 1/omega^2.
    """
    _require_resonant_unpumped_b(p, "analytic_resonant_gain")
    denom = p.omega ** 2 * _strong_drive_denominator(p)
    if denom == 0.0:
        raise DegenerateParametersError(
            "analytic_resonant_gain denominator vanishes")
    numer = p.g * p.r_cd * ((p.gamma_cd + p.gamma_bd + p.r_cd)
                            * (p.gamma_bd - p.gamma_ab)
                            + p.gamma_bd * (p.gamma_ac + p.gamma_ab))
    return numer / denom


def gain_condition_resonant(p: SystemParams) -> bool:
    """Inequality on the decay rates deciding the sign of the resonant gain.

    True iff gamma_bd > gamma_ab, or the deficit gamma_ab - gamma_bd stays
    below gamma_bd (gamma_ac + gamma_ab) / (gamma_cd + gamma_bd + r_cd).  This
    is exactly the sign of the rate bracket in :func:`analytic_resonant_gain`,
    so for g, r_cd > 0 it is equivalent to positive gain.
    """
    _require_resonant_unpumped_b(p, "gain_condition_resonant")
    if p.gamma_bd > p.gamma_ab:
        return True
    bound_denom = p.gamma_cd + p.gamma_bd + p.r_cd
    if bound_denom == 0.0:
        raise DegenerateParametersError(
            "gain_condition_resonant bound is 0/0 for "
            "gamma_cd = gamma_bd = r_cd = 0")
    bound = p.gamma_bd * (p.gamma_ac + p.gamma_ab) / bound_denom
    return p.gamma_ab - p.gamma_bd < bound


def analytic_resonant_populations(p: SystemParams) -> np.ndarray:
    """Strong-drive limit of the four populations, in basis order (a, b, c, d).

    Solved from the population ratios of the resonant limit plus unit trace;
    the four closed forms share one denominator and sum to one identically.
    """
    _require_resonant_unpumped_b(p, "analytic_resonant_populations")
    denom = _strong_drive_denominator(p)
    if denom == 0.0:
        raise DegenerateParametersError(
            "analytic_resonant_populations denominator vanishes")
    rho_aa = p.gamma_bd * p.r_cd / denom
    rho_bb = p.gamma_ab * p.r_cd / denom
    rho_dd = p.gamma_bd * (p.r_cd + p.gamma_cd + p.gamma_ab) / denom
    return np.array([rho_aa, rho_bb, rho_aa, rho_dd])


def _split_pair(shift: float, coupling: float) -> tuple[float, float]:
    """Roots (shift -+ hypot(shift, coupling)) / 2 without cancellation.

    Returns (lo, hi) with lo <= 0 <= hi; their product is -coupling^2/4, which
    is used to recover the smaller-magnitude root stably.
    """
    h = math.hypot(shift, coupling)
    if shift >= 0.0:
        hi = 0.5 * (shift + h)
        lo = -0.25 * coupling * coupling / hi if hi > 0.0 else 0.0
    else:
        lo = 0.5 * (shift - h)
        hi = -0.25 * coupling * coupling / lo
    return lo, hi


def autler_townes_eigenvalues(delta1: float, omega: float) -> tuple[float, float]:
    """(lambda_plus, lambda_minus) of the drive-dressed {a, c} block."""
    lo, hi = _split_pair(delta1, omega)
    return lo, hi


@dataclass(frozen=True)
class AutlerTownesBasis:
    """Drive-only dressed pair in the {a, c} subspace.

    ``state_plus``/``state_minus`` are full 4-vectors sin(theta)|a> +
    cos(theta)|c> with the |a> component chosen real non-negative;
    ``lambda_plus <= 0 <= lambda_minus`` and tan(theta_pm) = -omega /
    (2 lambda_pm).
    """

    lambda_plus: float
    lambda_minus: float
    theta_plus: float
    theta_minus: float
    state_plus: np.ndarray
    state_minus: np.ndarray


def autler_townes(p: SystemParams) -> AutlerTownesBasis:
    """Dressed basis of the strong drive alone (probe ignored).

    Requires omega > 0; theta_plus lies in (0, pi/2) and theta_minus =
    theta_plus + pi/2, which fixes both eigenvectors' phases.
    """
    if p.omega <= 0.0:
        raise DegenerateBasisError("autler_townes requires omega > 0")
    lam_p, lam_m = autler_townes_eigenvalues(p.delta1, p.omega)
    theta_p = math.atan2(p.omega, -2.0 * lam_p)
    theta_m = theta_p + 0.5 * math.pi

    def _state(theta: float) -> np.ndarray:
        v = np.zeros(4, dtype=complex)
        v[Level.A] = math.sin(theta)
        v[Level.C] = math.cos(theta)
        return v

    return AutlerTownesBasis(lambda_plus=lam_p, lambda_minus=lam_m,
                             theta_plus=theta_p, theta_minus=theta_m,
                             state_plus=_state(theta_p),
                             state_minus=_state(theta_m))


def dressed_populations(rho: np.ndarray,
                        basis: AutlerTownesBasis) -> tuple[float, float]:
    """(rho_pp, rho_mm): populations of the drive-dressed pair."""
    rho_pp = np.vdot(basis.state_plus, rho @ basis.state_plus).real
    rho_mm = np.vdot(basis.state_minus, rho @ basis.state_minus).real
    return float(rho_pp), float(rho_mm)


@dataclass(frozen=True)
class TripodEigenSystem:
    """Eigensystem of both fields together at degenerate detuning.

    Angle branches: theta = atan2(g, omega) in [0, pi/2]; phi in (-pi/2, 0]
    with tan(phi) = 2 e_minus / g_total.  Eigenvector phases make the |a>
    component of |E+->, and the |b> component of |E0>, real non-negative.
    """

    g_total: float
    theta: float
    phi: float
    e_plus: float
    e_minus: float
    e_zero: float
    state_plus: np.ndarray
    state_minus: np.ndarray
    state_zero: np.ndarray


def tripod_eigensystem(p: SystemParams) -> TripodEigenSystem:
    """Closed-form eigensystem of the two-field Hamiltonian at delta1 = delta2.

    The energies are e_pm = (-delta +- sqrt(delta^2 + g_total^2)) / 2 and
    e_zero = 0 (in the frame where the common detuning sits on |a> and |d>);
    |E0> is the dark state, annihilated by the coherent coupling.
    """
    if p.delta1 != p.delta2:
        raise ValueError("tripod_eigensystem requires delta1 = delta2")
    g_total = math.hypot(p.g, p.omega)
    if g_total == 0.0:
        raise DegenerateBasisError("tripod_eigensystem requires g or omega > 0")
    delta = p.delta1
    e_minus, e_plus = _split_pair(-delta, g_total)
    theta = math.atan2(p.g, p.omega)
    phi = math.atan(2.0 * e_minus / g_total)

    sin_t, cos_t = math.sin(theta), math.cos(theta)
    sin_f, cos_f = math.sin(phi), math.cos(phi)
    state_plus = np.array([cos_f, sin_f * sin_t, sin_f * cos_t, 0.0],
                          dtype=complex)
    state_minus = np.array([-sin_f, cos_f * sin_t, cos_f * cos_t, 0.0],
                           dtype=complex)
    state_zero = np.array([0.0, cos_t, -sin_t, 0.0], dtype=complex)
    return TripodEigenSystem(g_total=g_total, theta=theta, phi=phi,
                             e_plus=e_plus, e_minus=e_minus, e_zero=0.0,
                             state_plus=state_plus, state_minus=state_minus,
                             state_zero=state_zero)


def tripod_frame_hamiltonian(p: SystemParams) -> np.ndarray:
    """The degenerate-detuning Hamiltonian with the common detuning on |a>, |d>.

    Differs from the lab rotating frame by a multiple of the identity, so it
    generates the same commutators; |E0> is an exact zero mode of this form.
    """
    if p.delta1 != p.delta2:
        raise ValueError("tripod frame requires delta1 = delta2")
    h = np.zeros((4, 4), dtype=complex)
    h[Level.A, Level.A] = -p.delta1
    h[Level.D, Level.D] = -p.delta1
    h[Level.A, Level.C] = -0.5 * p.omega
    h[Level.C, Level.A] = -0.5 * p.omega
    h[Level.A, Level.B] = -0.5 * p.g
    h[Level.B, Level.A] = -0.5 * p.g
    return h


def _bc_pair_populations(rho: np.ndarray, theta: float) -> tuple[float, float]:
    # populations of cos|b> - sin|c> (dark) and sin|b> + cos|c> (bright)
    sin_t, cos_t = math.sin(theta), math.cos(theta)
    rho_bb = rho[Level.B, Level.B].real
    rho_cc = rho[Level.C, Level.C].real
    cross = 2.0 * sin_t * cos_t * rho[Level.B, Level.C].real
    dark = cos_t ** 2 * rho_bb + sin_t ** 2 * rho_cc - cross
    bright = sin_t ** 2 * rho_bb + cos_t ** 2 * rho_cc + cross
    return float(dark), float(bright)


def dark_state_population(rho: np.ndarray, eig: TripodEigenSystem) -> float:
    """rho_00 = <E0|rho|E0>, written out through the mixing angle."""
    return _bc_pair_populations(rho, eig.theta)[0]


def bright_state_population(rho: np.ndarray, eig: TripodEigenSystem) -> float:
    """Population of the bright combination sin|b> + cos|c>."""
    return _bc_pair_populations(rho, eig.theta)[1]


def dark_state_rate(p: SystemParams, rho: np.ndarray,
                    eig: TripodEigenSystem) -> float:
    """Instantaneous loss budget of the dark-state population.

    The closed form keeps only the decay of |b> and |c> (repopulation from
    |a> and from the pumps restarts the clock and is excluded); it equals
    <E0| G rho |E0> for the loss-only generator of
    :func:`lwi4.liouville.build_reduced_generator`, which the tests enforce.
    Detunings drop out entirely.
    """
    sin_t, cos_t = math.sin(eig.theta), math.cos(eig.theta)
    rho_bb = rho[Level.B, Level.B].real
    rho_cc = rho[Level.C, Level.C].real
    re_bc = rho[Level.B, Level.C].real
    return float((p.gamma_cd + p.gamma_bd) * sin_t * cos_t * re_bc
                 - cos_t ** 2 * p.gamma_bd * rho_bb
                 - sin_t ** 2 * p.gamma_cd * rho_cc)


def reduced_rate_projection(p: SystemParams, rho: np.ndarray,
                            eig: TripodEigenSystem) -> float:
    """<E0| G rho |E0> for the loss-only generator (cross-check route)."""
    gen = build_reduced_generator(p)
    drho = unvec(gen @ vec(np.asarray(rho, dtype=complex)))
    return float(np.vdot(eig.state_zero, drho @ eig.state_zero).real)


def lower_submatrix_eigs(
        rho: np.ndarray) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Eigen-decomposition of the {b, c} block of rho.

    Returns (lam1, lam2, psi1, psi2) with lam1 >= lam2; the two-vectors are
    expressed in the (b, c) coordinates with the first nonzero component made
    real non-negative.  A basis with no low-level coherence: comparing rho_aa
    against lam1, lam2 is the sharpest bare-pair inversion test.
    """
    rho_bb = rho[Level.B, Level.B].real
    rho_cc = rho[Level.C, Level.C].real
    r_bc = rho[Level.B, Level.C]
    mean = 0.5 * (rho_bb + rho_cc)
    radius = math.hypot(0.5 * (rho_bb - rho_cc), abs(r_bc))
    lam1, lam2 = mean + radius, mean - radius

    block = np.array([[rho_bb, r_bc], [r_bc.conjugate(), rho_cc]],
                     dtype=complex)
    _, vecs = np.linalg.eigh(block)  # ascending order
    psi2, psi1 = vecs[:, 0].copy(), vecs[:, 1].copy()
    for psi in (psi1, psi2):
        anchor = psi[0] if abs(psi[0]) > 1e-14 else psi[1]
        psi *= anchor.conjugate() / abs(anchor)
    return float(lam1), float(lam2), psi1, psi2


@dataclass(frozen=True)
class RamanDiagnostics:
    """Dimensionless two-photon transfer magnitudes and the resonance flag.

    ``rate_from_c`` and ``rate_from_b`` are the Lorentzian-weighted magnitudes
    |g*omega|^2 / (delta^2 + gamma_a^2) for transfer starting from |c> (drive
    detuning) and from |b> (probe detuning); ``two_photon_resonant`` marks the
    degenerate-detuning point where the two-photon process peaks.
    """

    rate_from_c: float
    rate_from_b: float
    two_photon_resonant: bool


def raman_rate_diagnostics(p: SystemParams) -> RamanDiagnostics:
    """Second-order transfer magnitudes through the upper level."""
    coupling_sq = (p.g * p.omega) ** 2

    def _mag(detuning: float) -> float:
        denom = detuning ** 2 + p.gamma_a ** 2
        if denom == 0.0:
            raise DegenerateParametersError(
                "raman magnitudes need a detuning or a nonzero gamma_a")
        return coupling_sq / denom

    return RamanDiagnostics(rate_from_c=_mag(p.delta1),
                            rate_from_b=_mag(p.delta2),
                            two_photon_resonant=(p.delta1 == p.delta2))


def resonance_gain_identity(p: SystemParams, rho_ss: np.ndarray) -> float:
    """Residual of the probe-resonance identity on a converged steady state.

    At delta2 = 0 the stationary probe coherence obeys
    Im rho_ba = [g (rho_aa - rho_bb) - omega Re rho_bc] / (r_bd + gamma_bd +
    gamma_ab + gamma_ac); returns |LHS - RHS|, which must vanish to solver
    precision for any true steady state.
    """
    if p.delta2 != 0.0:
        raise ValueError("resonance_gain_identity requires delta2 = 0")
    lhs = rho_ss[Level.B, Level.A].imag
    numer = (p.g * (rho_ss[Level.A, Level.A].real
                    - rho_ss[Level.B, Level.B].real)
             - p.omega * rho_ss[Level.B, Level.C].real)
    denom = p.r_bd + p.gamma_bd + p.gamma_ab + p.gamma_ac
    if denom == 0.0:
        if numer == 0.0:
            return abs(float(lhs))
        raise DegenerateParametersError(
            "resonance identity is 0/0 with all b-coherence rates zero")
    return abs(float(lhs - numer / denom))


@dataclass(frozen=True)
class InversionDiagnostics:
    """Every inversion test the sweeps report, bundled.

    lambda1/lambda2 are the coherence-free {b, c} pair populations; rho_upup /
    rho_00 the bright/dark split of the same pair; rho_pp / rho_mm the
    drive-dressed pair.  Identities: lambda1 + lambda2 = rho_upup + rho_00 =
    rho_bb + rho_cc and rho_pp + rho_mm = rho_aa + rho_cc.
    """

    lambda1: float
    lambda2: float
    rho_upup: float
    rho_00: float
    rho_pp: float
    rho_mm: float


def inversion_diagnostics(p: SystemParams,
                          rho: np.ndarray) -> InversionDiagnostics:
    """Evaluate all dressed-basis population diagnostics for one state.

    The dark/bright split uses the field mixing angle atan2(g, omega), which
    is detuning-independent, so it is well defined even when the two
    detunings differ.
    """
    lam1, lam2, _, _ = lower_submatrix_eigs(rho)
    theta = math.atan2(p.g, p.omega)
    rho_00, rho_upup = _bc_pair_populations(rho, theta)
    basis = autler_townes(p)
    rho_pp, rho_mm = dressed_populations(rho, basis)
    return InversionDiagnostics(lambda1=lam1, lambda2=lam2,
                                rho_upup=rho_upup, rho_00=rho_00,
                                rho_pp=rho_pp, rho_mm=rho_mm)
