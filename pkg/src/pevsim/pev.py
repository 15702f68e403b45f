"""Projection-evolution engine.

States are density matrices and every evolution step conjugates the state
with an evolution operator, renormalising by the trace:

    rho' = E rho E~dag / Tr(E rho E~dag)

Operators come in two kinds: phase-scaled unitaries (gates) and Hermitian
idempotents (measurement branches).  A measurement step is described by an
orthogonal resolution of unity; the branch taken is either enumerated
exactly via its Born weight Tr(E rho E~dag) or sampled from a seeded
stream.  A branch whose weight is numerically zero has no post-state (the
update above is undefined), so the engine fails loudly instead of
renormalising noise.

Everything here is pure and immutable; callers may share values freely
across threads.  Parallel samplers must use disjoint RNG streams.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    ComplexMatrix,
    ShapeError,
    as_matrix,
    identity,
    is_hermitian,
    is_unitary,
    max_abs_diff,
)
from .rng import sample_index

#: Below this trace the branch is treated as impossible (the normalised
#: update is undefined at zero denominator).
NULL_BRANCH_EPS = 1e-14

#: Seed for the fixed pseudorandom probe vectors used in the operational
#: positive-semidefiniteness check.
_PROBE_SEED = 20260811


class NullBranchError(ArithmeticError):
    """The selected outcome has (numerically) zero probability."""


class FamilyError(ValueError):
    """A measurement family violates the resolution-of-unity conditions."""


@lru_cache(maxsize=None)
def _probe_vectors(dim: int) -> tuple[np.ndarray, ...]:
    """Basis vectors, the uniform superposition, and 16 fixed pseudorandom
    unit vectors.  Cheap stand-in for an eigensolve at these dimensions."""
    probes = [np.eye(dim, dtype=np.complex128)[i] for i in range(dim)]
    probes.append(np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))
    gen = np.random.Generator(np.random.Philox(key=np.array([_PROBE_SEED, dim], dtype=np.uint64)))
    raw = gen.standard_normal((16, dim)) + 1j * gen.standard_normal((16, dim))
    for row in raw:
        probes.append(row / np.linalg.norm(row))
    return tuple(probes)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state.

    Positivity is verified operationally: <v|rho|v> >= -1e-12 over the
    fixed probe set, which is sufficient for the dimensions used here.
    """

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got {m.shape}")
        if not is_hermitian(m, DEFAULT_TOL):
            raise ValueError("density matrix must be Hermitian within 1e-12")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > DEFAULT_TOL:
            raise ValueError(f"density matrix must have unit trace, got {tr}")
        for v in _probe_vectors(m.shape[0]):
            q = float(np.real(np.vdot(v, m @ v)))
            if q < -DEFAULT_TOL:
                raise ValueError(f"density matrix fails positivity probe ({q})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def from_state_vector(vector) -> "DensityMatrix":
        """Pure state |psi><psi| from a (normalised or not) state vector."""
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm <= NULL_BRANCH_EPS:
            raise NullBranchError("cannot build a state from a null vector")
        v = v / norm
        return DensityMatrix(np.outer(v, v.conj()))


OperatorKind = Literal["unitary-derived", "projector"]


@dataclass(frozen=True)
class PevOperator:
    """One evolution operator, optionally tagged with its step and outcome.

    ``unitary-derived`` operators are phase-scaled unitary gates;
    ``projector`` operators are Hermitian idempotents (measurement
    branches).  The constructor enforces the matching invariant.
    """

    matrix: ComplexMatrix
    kind: OperatorKind = "unitary-derived"
    tau_label: Optional[int] = None
    nu_label: Optional[int] = None

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"evolution operator must be square, got {m.shape}")
        if self.kind == "unitary-derived":
            if not is_unitary(m, DEFAULT_TOL):
                raise ValueError("unitary-derived operator is not unitary within 1e-12")
        elif self.kind == "projector":
            if not is_hermitian(m, DEFAULT_TOL) or max_abs_diff(m @ m, m) > DEFAULT_TOL:
                raise ValueError("projector operator must be Hermitian and idempotent")
        else:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class MeasurementFamily:
    """Ordered projector family intended as an orthogonal resolution of unity.

    Construction checks only shapes, kinds and label uniqueness; the
    algebraic conditions are reported by :func:`check_resolution`, so
    deliberately broken families can be inspected.
    """

    operators: tuple[PevOperator, ...]

    def __post_init__(self) -> None:
        ops = tuple(self.operators)
        if not ops:
            raise FamilyError("measurement family must not be empty")
        dim = ops[0].dim
        for op in ops:
            if op.kind != "projector":
                raise FamilyError("family members must be projector-kind operators")
            if op.dim != dim:
                raise FamilyError("family members must share one dimension")
            if op.nu_label is None:
                raise FamilyError("family members must carry outcome labels")
        labels = [op.nu_label for op in ops]
        if len(set(labels)) != len(labels):
            raise FamilyError(f"outcome labels must be unique, got {labels}")
        object.__setattr__(self, "operators", ops)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(op.nu_label for op in self.operators)  # type: ignore[misc]

    @property
    def dim(self) -> int:
        return self.operators[0].dim


@dataclass(frozen=True)
class ConditionReport:
    name: str
    passed: bool
    max_violation: float


@dataclass(frozen=True)
class ResolutionReport:
    """Per-condition verdicts for the resolution-of-unity checks."""

    hermiticity: ConditionReport
    orthogonality: ConditionReport
    completeness: ConditionReport

    @property
    def all_passed(self) -> bool:
        return self.hermiticity.passed and self.orthogonality.passed and self.completeness.passed

    def conditions(self) -> tuple[ConditionReport, ...]:
        return (self.hermiticity, self.orthogonality, self.completeness)


@dataclass(frozen=True)
class TraceStep:
    """One step record: label, outcome taken (if any), state, branch weight."""

    tau: int
    nu: Optional[int]
    state: DensityMatrix
    probability: float

    def __post_init__(self) -> None:
        if not -1e-12 <= self.probability <= 1.0 + 1e-12:
            raise ValueError(f"branch probability out of range: {self.probability}")


@dataclass(frozen=True)
class EvolutionTrace:
    steps: tuple[TraceStep, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        steps = tuple(self.steps)
        taus = [s.tau for s in steps]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ValueError(f"step labels must be strictly increasing, got {taus}")
        object.__setattr__(self, "steps", steps)

    def state_at(self, tau: int) -> DensityMatrix:
        for step in self.steps:
            if step.tau == tau:
                return step.state
        raise KeyError(f"no step labelled tau={tau}")

    def __len__(self) -> int:
        return len(self.steps)


def conjugate_update(rho: DensityMatrix, matrix: ComplexMatrix) -> DensityMatrix:
    """Normalised conjugation rho -> M rho M~dag / Tr(...).

    This is the raw update behind :func:`evolve`; it also serves operators
    that are neither unitary nor projectors (e.g. noisy gates).
    """
    m = as_matrix(matrix)
    if m.shape[0] != rho.dim or m.shape[1] != rho.dim:
        raise ShapeError(f"operator shape {m.shape} does not match state dim {rho.dim}")
    num = m @ rho.matrix @ m.conj().T
    tr = float(np.real(np.trace(num)))
    if tr <= NULL_BRANCH_EPS:
        raise NullBranchError(f"null branch: Tr(E rho E~dag) = {tr:.3e}")
    return DensityMatrix(num / tr)


def evolve(rho: DensityMatrix, e: PevOperator) -> DensityMatrix:
    """Apply one evolution operator with renormalisation."""
    return conjugate_update(rho, e.matrix)


def branch_probability(rho: DensityMatrix, e: PevOperator) -> float:
    """Born weight Tr(E rho E~dag) of one branch."""
    m = e.matrix
    return float(np.real(np.trace(m @ rho.matrix @ m.conj().T)))


def check_resolution(family: MeasurementFamily, tol: float = DEFAULT_TOL) -> ResolutionReport:
    """Report hermiticity, idempotence/orthogonality and completeness."""
    ops = [op.matrix for op in family.operators]
    herm = max(max_abs_diff(m, m.conj().T) for m in ops)
    ortho = 0.0
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            expected = a if i == j else np.zeros_like(a)
            ortho = max(ortho, max_abs_diff(a @ b, expected))
    total = sum(ops)
    comp = max_abs_diff(total, identity(family.dim))
    return ResolutionReport(
        hermiticity=ConditionReport("hermiticity", herm <= tol, herm),
        orthogonality=ConditionReport("idempotence+orthogonality", ortho <= tol, ortho),
        completeness=ConditionReport("completeness", comp <= tol, comp),
    )


def outcome_distribution(
    rho: DensityMatrix, family: MeasurementFamily
) -> list[tuple[int, float]]:
    """Born weights per outcome, in family order.  Sums to 1 for valid families."""
    if family.dim != rho.dim:
        raise ShapeError(f"family dim {family.dim} does not match state dim {rho.dim}")
    report = check_resolution(family)
    if not report.all_passed:
        failing = [c.name for c in report.conditions() if not c.passed]
        raise FamilyError(f"family fails resolution-of-unity checks: {failing}")
    return [(op.nu_label, branch_probability(rho, op)) for op in family.operators]  # type: ignore[misc]


def apply_family(
    rho: DensityMatrix, family: MeasurementFamily, rng: np.random.Generator
) -> tuple[int, DensityMatrix]:
    """Sample one outcome by inverse CDF over the ordered family and collapse."""
    dist = outcome_distribution(rho, family)
    probs = [p for _, p in dist]
    total = sum(probs)
    if total <= NULL_BRANCH_EPS:
        raise FamilyError("all outcomes have zero probability")
    idx = sample_index([p / total for p in probs], rng)
    label = dist[idx][0]
    return label, evolve(rho, family.operators[idx])


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state."""
    m = rho.matrix
    return float(np.real(np.trace(m @ m)))
