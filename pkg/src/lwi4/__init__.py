"""Gain-without-inversion simulator for a driven four-level atom.

A compact toolkit around one model: an upper level coupled by a strong drive
and a weak probe to two decaying lower levels, with an incoherently pumped
reservoir level closing the cycle.  The package builds the master-equation
generator two independent ways, solves steady states and dynamics, evaluates
the closed-form strong-drive limits and dressed-state diagnostics, and drives
reproducible parameter sweeps from the command line.
"""

from .model import (Level, N_LEVELS, ParameterError, PumpConflictError,
                    IllDefinedPumpError, PhysicalityError, SystemParams,
                    assert_physical, ket, maximally_mixed, projector,
                    validate_params)
from .liouville import (LindbladChannel, bloch_rhs, build_dissipator,
                        build_hamiltonian, build_liouvillian,
                        build_reduced_generator, lindblad_channels, sigma,
                        unvec, vec)
from .solve import (DegenerateSteadyStateError, InstabilityError,
                    NonConvergenceError, SteadyStateError, SteadyStateResult,
                    Trajectory, decompose_initial_state, steady_state,
                    time_evolve, unitary_evolve)
from .analysis import (AutlerTownesBasis, DegenerateBasisError,
                       DegenerateParametersError, InversionDiagnostics,
                       ProbeResponse, RamanDiagnostics, TripodEigenSystem,
                       analytic_resonant_gain, analytic_resonant_populations,
                       autler_townes, autler_townes_eigenvalues,
                       bright_state_population, dark_state_population,
                       dark_state_rate, dressed_populations,
                       gain_condition_resonant, inversion_diagnostics,
                       lower_submatrix_eigs, probe_response,
                       raman_rate_diagnostics, reduced_rate_projection,
                       resonance_gain_identity, tripod_eigensystem,
                       tripod_frame_hamiltonian)
from .cli import (ConfigError, SweepError, SweepRow, SweepSpec, load_config,
                  preset, read_rows_json, resolve_point, run_sweep,
                  write_output)

__version__ = "0.1.0"

__all__ = [
    "Level", "N_LEVELS", "SystemParams", "validate_params",
    "ParameterError", "PumpConflictError", "IllDefinedPumpError",
    "PhysicalityError", "assert_physical", "ket", "projector",
    "maximally_mixed",
    "LindbladChannel", "lindblad_channels", "sigma", "build_hamiltonian",
    "build_dissipator", "build_liouvillian", "build_reduced_generator",
    "bloch_rhs", "vec", "unvec",
    "SteadyStateResult", "SteadyStateError", "DegenerateSteadyStateError",
    "NonConvergenceError", "InstabilityError", "Trajectory", "steady_state",
    "time_evolve", "unitary_evolve", "decompose_initial_state",
    "ProbeResponse", "probe_response", "analytic_resonant_gain",
    "gain_condition_resonant", "analytic_resonant_populations",
    "AutlerTownesBasis", "autler_townes", "autler_townes_eigenvalues",
    "dressed_populations", "TripodEigenSystem", "tripod_eigensystem",
    "tripod_frame_hamiltonian", "dark_state_population",
    "bright_state_population", "dark_state_rate", "reduced_rate_projection",
    "lower_submatrix_eigs", "RamanDiagnostics", "raman_rate_diagnostics",
    "resonance_gain_identity", "InversionDiagnostics",
    "inversion_diagnostics", "DegenerateBasisError",
    "DegenerateParametersError",
    "SweepSpec", "SweepRow", "ConfigError", "SweepError", "load_config",
    "preset", "resolve_point", "run_sweep", "write_output", "read_rows_json",
]
