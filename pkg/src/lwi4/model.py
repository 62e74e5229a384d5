"""Parameters and state helpers for the driven four-level atom.

The atom has an upper level ``a`` coupled by a strong drive to ``c`` and by a
weak probe to ``b``; both lower levels decay to a reservoir level ``d``, which
is pumped back up incoherently.  Everything downstream (generators, solvers,
diagnostics) works in the fixed bare basis ``a=0, b=1, c=2, d=3`` and in units
where hbar = 1, so every parameter is an angular frequency in the same
arbitrary rate unit.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

N_LEVELS = 4


class Level(enum.IntEnum):
    """Bare levels; the integer value is the basis index used everywhere."""

    A = 0
    B = 1
    C = 2
    D = 3


class ParameterError(ValueError):
    """A parameter record is malformed (negative rate, unknown field, ...)."""


class PumpConflictError(ParameterError):
    """Both a pump rate and its photon-number alias were given."""


class IllDefinedPumpError(ParameterError):
    """A pump photon number was given for a channel with zero decay rate."""


class PhysicalityError(ValueError):
    """A matrix fails the density-matrix checks (Hermiticity/trace/positivity)."""


# Fields that must be non-negative (angular-frequency magnitudes).
_RATE_FIELDS = ("omega", "g", "gamma_ab", "gamma_ac", "gamma_bd", "gamma_cd",
                "r_bd", "r_cd")
# Detunings may have either sign.
_SIGNED_FIELDS = ("delta1", "delta2")


@dataclass(frozen=True)
class SystemParams:
    """Model parameters, all in the same arbitrary angular-frequency unit.

    Attributes
    ----------
    omega : float
        Rabi frequency of the strong drive on a <-> c.
    g : float
        Rabi frequency of the weak probe on a <-> b.
    delta1, delta2 : float
        Drive and probe detunings from the respective transitions.
    gamma_ab, gamma_ac : float
        Spontaneous decay rates out of ``a`` into ``b`` and ``c``.
    gamma_bd, gamma_cd : float
        Spontaneous decay rates of ``b`` and ``c`` into the reservoir ``d``.
    r_bd, r_cd : float
        Incoherent pump rates d -> b and d -> c.  Each pump also adds to the
        downward rate of its channel (a thermal-reservoir pump, not a one-way
        one).
    unit_label : str
        Purely cosmetic name of the rate unit for reports (e.g. ``"gamma_bd"``).
    """

    omega: float = 0.0
    g: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    gamma_ab: float = 0.0
    gamma_ac: float = 0.0
    gamma_bd: float = 0.0
    gamma_cd: float = 0.0
    r_bd: float = 0.0
    r_cd: float = 0.0
    unit_label: str = "rate unit"

    def __post_init__(self) -> None:
        for name in _RATE_FIELDS + _SIGNED_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not np.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        for name in _RATE_FIELDS:
            if getattr(self, name) < 0.0:
                raise ParameterError(
                    f"{name} must be non-negative, got {getattr(self, name)}")

    @property
    def gamma_a(self) -> float:
        """Total spontaneous decay rate out of the upper level."""
        return self.gamma_ab + self.gamma_ac

    @property
    def n_bd(self) -> float:
        """Pump photon number on b <-> d, i.e. ``r_bd / gamma_bd``."""
        if self.gamma_bd == 0.0:
            raise IllDefinedPumpError("n_bd is undefined for gamma_bd = 0")
        return self.r_bd / self.gamma_bd

    @property
    def n_cd(self) -> float:
        """Pump photon number on c <-> d, i.e. ``r_cd / gamma_cd``."""
        if self.gamma_cd == 0.0:
            raise IllDefinedPumpError("n_cd is undefined for gamma_cd = 0")
        return self.r_cd / self.gamma_cd

    def replace(self, **changes: Any) -> "SystemParams":
        """Return a copy with the given fields replaced (validation re-runs)."""
        return dataclasses.replace(self, **changes)


def validate_params(raw: Mapping[str, Any]) -> SystemParams:
    """Build :class:`SystemParams` from a plain mapping, checking every field.

    Accepts the dataclass field names plus the photon-number aliases ``n_bd``
    and ``n_cd`` (converted as ``r = n * gamma``).  Missing numeric fields
    default to zero.  Rejects unknown keys, negative rates/photon numbers, a
    pump given both ways, and a photon number on a channel whose decay rate
    vanishes.
    """
    known = {f.name for f in dataclasses.fields(SystemParams)}
    aliases = {"n_bd": ("r_bd", "gamma_bd"), "n_cd": ("r_cd", "gamma_cd")}
    unknown = set(raw) - known - set(aliases)
    if unknown:
        raise ParameterError(f"unknown parameter(s): {sorted(unknown)}")

    fields: dict[str, Any] = {k: raw[k] for k in raw if k in known}
    for alias, (rate_field, gamma_field) in aliases.items():
        if alias not in raw:
            continue
        if rate_field in raw:
            raise PumpConflictError(
                f"give either {rate_field} or {alias}, not both")
        n = raw[alias]
        if not isinstance(n, (int, float)) or isinstance(n, bool) or not np.isfinite(n):
            raise ParameterError(f"{alias} must be a finite number, got {n!r}")
        if n < 0:
            raise ParameterError(f"{alias} must be non-negative, got {n}")
        gamma = float(raw.get(gamma_field, 0.0))
        if n > 0 and gamma == 0.0:
            raise IllDefinedPumpError(
                f"{alias} > 0 needs {gamma_field} > 0 to define a pump rate")
        fields[rate_field] = float(n) * gamma
    return SystemParams(**fields)


def ket(level: Level | int) -> np.ndarray:
    """Basis column vector for a bare level."""
    v = np.zeros(N_LEVELS, dtype=complex)
    v[int(level)] = 1.0
    return v


def projector(level: Level | int) -> np.ndarray:
    """Projector |level><level| as a dense 4x4 complex array."""
    p = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    p[int(level), int(level)] = 1.0
    return p


def maximally_mixed() -> np.ndarray:
    """The maximally mixed state I/4."""
    return np.eye(N_LEVELS, dtype=complex) / N_LEVELS


def assert_physical(rho: np.ndarray, *, herm_tol: float = 1e-12,
                    trace_tol: float = 1e-10, eig_tol: float = 1e-9) -> None:
    """Raise :class:`PhysicalityError` unless ``rho`` is a valid state.

    Checks shape, Hermiticity (max elementwise deviation), unit trace, and
    positive semidefiniteness up to ``-eig_tol``.
    """
    rho = np.asarray(rho)
    if rho.shape != (N_LEVELS, N_LEVELS):
        raise PhysicalityError(f"expected a 4x4 matrix, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise PhysicalityError(f"not Hermitian: max deviation {herm:.3e}")
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise PhysicalityError(f"trace is {tr:.12g}, not 1")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lo < -eig_tol:
        raise PhysicalityError(f"negative eigenvalue {lo:.3e}")
