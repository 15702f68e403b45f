"""pevsim: projection-evolution density-matrix simulation of the Deutsch circuit.

Quantum evolution here proceeds in discrete labelled steps, each realised
by an operator acting on the density matrix with renormalisation, rather
than by a time-parameterised flow.  The package covers the ideal two-qubit
Deutsch algorithm, its second-quantised (truncated oscillator) form, and
error propagation for noisy Hadamard gates under unitary and projection
gate semantics, plus a FastAPI service and a CLI client on top.
"""

__version__ = "0.1.0"

from .deutsch import DeutschRun, ab_coefficients, classify, initial_state, rho_tau3_from_ab, run
from .gates import (
    GateMatrix,
    OracleFunction,
    gate_to_pev,
    hadamard_on_first,
    hadamard_pev,
    measure_first_qubit,
    measure_qubit,
    oracle_pev,
)
from .pev import (
    DensityMatrix,
    EvolutionTrace,
    FamilyError,
    MeasurementFamily,
    NullBranchError,
    PevOperator,
    apply_family,
    check_resolution,
    evolve,
    outcome_distribution,
    purity,
)

__all__ = [
    "__version__",
    "DeutschRun",
    "DensityMatrix",
    "EvolutionTrace",
    "FamilyError",
    "GateMatrix",
    "MeasurementFamily",
    "NullBranchError",
    "OracleFunction",
    "PevOperator",
    "ab_coefficients",
    "apply_family",
    "check_resolution",
    "classify",
    "evolve",
    "gate_to_pev",
    "hadamard_on_first",
    "hadamard_pev",
    "initial_state",
    "measure_first_qubit",
    "measure_qubit",
    "oracle_pev",
    "outcome_distribution",
    "purity",
    "rho_tau3_from_ab",
    "run",
]
