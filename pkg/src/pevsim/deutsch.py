"""The Deutsch algorithm as a labelled evolution tau0..tau4.

Pipeline: prepare |0>|1>, apply Hadamards to both registers, query the
oracle once, apply a Hadamard to the first register, measure the first
register.  The outcome is 0 exactly when the oracle function is constant.
Step labels are ordinals only; they carry no temporal meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gates import (
    HADAMARD,
    OracleFunction,
    hadamard_on_first,
    measure_first_qubit,
    oracle_pev,
)
from .linalg import kron
from .pev import (
    DensityMatrix,
    EvolutionTrace,
    PevOperator,
    TraceStep,
    evolve,
    outcome_distribution,
)

#: The ideal circuit is deterministic; the winning branch must carry at
#: least this much weight or the run is rejected as inconsistent.
_DETERMINISM_TOL = 1e-9


@dataclass(frozen=True)
class DeutschRun:
    """One complete run: oracle, per-step states, output coefficients, verdict."""

    oracle: OracleFunction
    trace: EvolutionTrace
    ab: tuple[float, float]
    outcome: int
    classification: str

    def __post_init__(self) -> None:
        if (self.outcome == 0) != (self.classification == "constant"):
            raise ValueError("outcome bit and classification disagree")


def ab_coefficients(f: OracleFunction) -> tuple[float, float]:
    """Output-register coefficients (A, B) from the four Kronecker deltas.

    Exactly one of the two is +-2 and the other 0: A is nonzero for
    constant functions, B for balanced ones.
    """

    def delta(i: int, j: int) -> int:
        return 1 if i == j else 0

    a = delta(0, f.value(0)) - delta(1, f.value(0)) + delta(0, f.value(1)) - delta(1, f.value(1))
    b = delta(0, f.value(0)) - delta(1, f.value(0)) - delta(0, f.value(1)) + delta(1, f.value(1))
    return float(a), float(b)


def initial_state() -> DensityMatrix:
    """|01><01| in the package basis ordering (first register high bit)."""
    m = np.zeros((4, 4), dtype=np.complex128)
    m[1, 1] = 1.0
    return DensityMatrix(m)


def rho_tau3_from_ab(a: float, b: float) -> DensityMatrix:
    """Closed-form state before the final measurement, from (A, B).

    The output register (A|0> + B|1>)(|0> - |1>) / (2 sqrt 2) yields a
    density matrix with |A|^2, |B|^2 and A B* blocks over a 1/8 prefactor.
    """
    if a == 0 and b == 0:
        raise ValueError("coefficients (0, 0) do not describe a state")
    aa = abs(a) ** 2
    bb = abs(b) ** 2
    ab = a * np.conj(b)
    ba = b * np.conj(a)
    m = np.array(
        [
            [aa, -aa, ab, -ab],
            [-aa, aa, -ab, ab],
            [ba, -ba, bb, -bb],
            [-ba, ba, -bb, bb],
        ],
        dtype=np.complex128,
    ) / 8.0
    return DensityMatrix(m)


def run(
    f: OracleFunction,
    *,
    h_both: Optional[PevOperator] = None,
    h_first: Optional[PevOperator] = None,
) -> DeutschRun:
    """Run the full pipeline for one oracle function.

    ``h_both`` and ``h_first`` replace the tau1 and tau3 Hadamard operators
    when supplied (e.g. with operators reduced from their second-quantised
    forms); defaults are the scalar builders.
    """
    if h_both is None:
        h_both = PevOperator(kron(HADAMARD, HADAMARD), kind="unitary-derived")
    if h_first is None:
        h_first = hadamard_on_first()

    rho0 = initial_state()
    rho1 = evolve(rho0, h_both)
    rho2 = evolve(rho1, oracle_pev(f))
    rho3 = evolve(rho2, h_first)

    family = measure_first_qubit()
    dist = outcome_distribution(rho3, family)
    outcome, top = max(dist, key=lambda item: item[1])
    if top < 1.0 - _DETERMINISM_TOL:
        raise AssertionError(f"ideal run is not deterministic: distribution {dist}")
    rho4 = evolve(rho3, family.operators[family.labels.index(outcome)])

    trace = EvolutionTrace(
        steps=(
            TraceStep(0, None, rho0, 1.0),
            TraceStep(1, None, rho1, 1.0),
            TraceStep(2, None, rho2, 1.0),
            TraceStep(3, None, rho3, 1.0),
            TraceStep(4, outcome, rho4, top),
        )
    )
    return DeutschRun(
        oracle=f,
        trace=trace,
        ab=ab_coefficients(f),
        outcome=outcome,
        classification="constant" if outcome == 0 else "balanced",
    )


def classify(completed: DeutschRun) -> str:
    """Constant iff the measured first register reads 0."""
    return "constant" if completed.outcome == 0 else "balanced"
