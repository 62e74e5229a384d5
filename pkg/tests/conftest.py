"""Shared test helpers and the acceptance-criteria terminal summary."""

from __future__ import annotations

import numpy as np

from lwi4 import SystemParams


def random_state(rng: np.random.Generator) -> np.ndarray:
    """A random full-rank physical density matrix (Wishart, normalized)."""
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    return rho / rho.trace()


def random_params(rng: np.random.Generator, *, resonant: bool = False,
                  equal_detunings: bool = False) -> SystemParams:
    """Random strictly positive rates; detunings optionally pinned."""
    rates = rng.uniform(0.05, 3.0, size=8)
    if resonant:
        d1 = d2 = 0.0
    elif equal_detunings:
        d1 = d2 = rng.uniform(-3.0, 3.0)
    else:
        d1, d2 = rng.uniform(-3.0, 3.0, size=2)
    return SystemParams(omega=rates[0], g=rates[1], delta1=d1, delta2=d2,
                        gamma_ab=rates[2], gamma_ac=rates[3],
                        gamma_bd=rates[4], gamma_cd=rates[5],
                        r_bd=0.0 if resonant else rates[6], r_cd=rates[7])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    outcomes: dict[str, str] = {}
    notes: dict[str, str] = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid or "::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if status != "passed" or name not in outcomes:
                outcomes[name] = status
            props = getattr(report, "user_properties", None)
            if props:
                notes[name] = ", ".join(f"{k} = {v}" for k, v in props)
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(outcomes):
        verdict = "PASS" if outcomes[name] == "passed" else "FAIL"
        note = f"  ({notes[name]})" if name in notes else ""
        terminalreporter.write_line(f"{verdict}  {name}{note}")
