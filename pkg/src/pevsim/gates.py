"""Evolution operators for the Deutsch circuit gates.

Basis convention, used everywhere in this package: two-qubit basis states
are ordered |00>, |01>, |10>, |11> with the first register as the high
bit, i.e. index = 2*x + y for |x>|y>.  The README records this as the
single source of truth.

A unitary gate G becomes an evolution operator e^{i*alpha} G; the phase is
physically inert under the normalised conjugation update and defaults to
zero.  Each gate's phase is treated as independent of the others.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, ComplexMatrix, as_matrix, identity, is_unitary, kron
from .pev import MeasurementFamily, PevOperator

SQRT2 = float(np.sqrt(2.0))

#: Scalar Hadamard matrix.
HADAMARD: ComplexMatrix = np.array([[1, 1], [1, -1]], dtype=np.complex128) / SQRT2

#: Bit flip on one register.  The oracle definition |x>|y> -> |x>|y xor f(x)>
#: fixes this as the unique action on the second register.
PAULI_X: ComplexMatrix = np.array([[0, 1], [1, 0]], dtype=np.complex128)

_ORACLE_NAMES = {(0, 0): "f1", (0, 1): "f2", (1, 0): "f3", (1, 1): "f4"}


class GateError(ValueError):
    """Input does not describe a valid quantum gate."""


@dataclass(frozen=True)
class GateMatrix:
    """Unitary gate on ``qubit_count`` qubits."""

    matrix: ComplexMatrix
    qubit_count: int

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        dim = 2**self.qubit_count
        if m.shape != (dim, dim):
            raise GateError(f"{self.qubit_count}-qubit gate must be {dim}x{dim}, got {m.shape}")
        if not is_unitary(m, DEFAULT_TOL):
            raise GateError("gate matrix is not unitary within 1e-12")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class OracleFunction:
    """A Boolean function f: {0,1} -> {0,1} given by its two values."""

    f0: int
    f1: int

    def __post_init__(self) -> None:
        if self.f0 not in (0, 1) or self.f1 not in (0, 1):
            raise ValueError(f"oracle values must be bits, got ({self.f0}, {self.f1})")

    def value(self, x: int) -> int:
        if x not in (0, 1):
            raise ValueError(f"oracle argument must be a bit, got {x}")
        return self.f0 if x == 0 else self.f1

    @property
    def is_constant(self) -> bool:
        return self.f0 == self.f1

    @property
    def classification(self) -> str:
        return "constant" if self.is_constant else "balanced"

    @property
    def name(self) -> str:
        return _ORACLE_NAMES[(self.f0, self.f1)]

    @classmethod
    def from_name(cls, name: str) -> "OracleFunction":
        for bits, known in _ORACLE_NAMES.items():
            if known == name:
                return cls(*bits)
        raise ValueError(f"unknown oracle {name!r} (expected f1..f4)")


ALL_ORACLES = tuple(OracleFunction(*bits) for bits in _ORACLE_NAMES)


def gate_to_pev(g: GateMatrix, alpha: float = 0.0) -> PevOperator:
    """Evolution operator e^{i*alpha} G for a unitary gate G."""
    return PevOperator(np.exp(1j * alpha) * g.matrix, kind="unitary-derived")


def hadamard_pev(alpha: float = 0.0) -> PevOperator:
    """Single-qubit Hadamard as an evolution operator."""
    return gate_to_pev(GateMatrix(HADAMARD, 1), alpha)


def oracle_pev(f: OracleFunction, alpha: float = 0.0) -> PevOperator:
    """Two-qubit oracle built from its Kronecker-delta form.

    U_f = sum_x |x><x| (x) [delta_{0,f(x)} I + delta_{1,f(x)} X], acting as
    |x>|y> -> |x>|y xor f(x)>.
    """
    u = np.zeros((4, 4), dtype=np.complex128)
    for x in (0, 1):
        proj = np.zeros((2, 2), dtype=np.complex128)
        proj[x, x] = 1.0
        action = PAULI_X if f.value(x) == 1 else identity(2)
        u += kron(proj, action)
    return gate_to_pev(GateMatrix(u, 2), alpha)


def hadamard_on_first(alpha: float = 0.0) -> PevOperator:
    """Hadamard on the first register of two: e^{i*alpha} (H (x) I)."""
    return gate_to_pev(GateMatrix(kron(HADAMARD, identity(2)), 2), alpha)


def measure_qubit(index: int, qubit_count: int) -> MeasurementFamily:
    """Computational-basis measurement of one register, lifted to the full space.

    Outcome label nu equals the measured bit.
    """
    if not 0 <= index < qubit_count:
        raise ValueError(f"qubit index {index} out of range for {qubit_count} qubits")
    members = []
    for bit in (0, 1):
        proj = np.zeros((2, 2), dtype=np.complex128)
        proj[bit, bit] = 1.0
        full = proj
        for _ in range(index):
            full = kron(identity(2), full)
        for _ in range(qubit_count - index - 1):
            full = kron(full, identity(2))
        members.append(PevOperator(full, kind="projector", nu_label=bit))
    return MeasurementFamily(tuple(members))


def measure_first_qubit() -> MeasurementFamily:
    """The final Deutsch measurement: {|0><0| (x) I, |1><1| (x) I}."""
    return measure_qubit(0, 2)
