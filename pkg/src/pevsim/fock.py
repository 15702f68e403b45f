"""Second-quantisation layer: truncated oscillator spaces and block gates.

The qubit lives on the two lowest levels of a harmonic oscillator that is
truncated to ``dim`` levels.  Gates in this representation are block
matrices whose entries are ladder operators instead of scalars; each
nonzero block carries exactly one computational-subspace matrix element,
and collapsing every block to that element recovers the ordinary scalar
gate (see :func:`reduce_to_qubit`).

Block layout convention: the upper half of the block rows carries creation
operators and the lower half annihilation operators, mirroring which
oscillator transition realises each amplitude.  Signs are placed so that
the computational-subspace reduction reproduces the scalar gate exactly;
the reduction is independent of the truncation level because the ladder
elements between levels 0 and 1 are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ComplexMatrix, ComplexVector, as_matrix, max_abs_diff

_ELEMENT_TOL = 1e-12


class ReductionError(ValueError):
    """A block has no usable computational-subspace matrix element."""


@dataclass(frozen=True)
class FockSpace:
    """Truncated oscillator: ``dim`` levels, natural units by default."""

    dim: int = 2
    mass: float = 1.0
    frequency: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"truncation must keep at least 2 levels, got {self.dim}")
        if self.mass <= 0 or self.frequency <= 0 or self.hbar <= 0:
            raise ValueError("mass, frequency and hbar must be positive")


@dataclass(frozen=True)
class LadderOps:
    """Annihilation/creation pair on a truncated space.

    a|n> = sqrt(n) |n-1> and a~dag|n> = sqrt(n+1) |n+1>, with the raising
    chain cut at the truncation edge.
    """

    a: ComplexMatrix
    a_dag: ComplexMatrix


def ladder_ops(space: FockSpace) -> LadderOps:
    d = space.dim
    a = np.zeros((d, d), dtype=np.complex128)
    for n in range(1, d):
        a[n - 1, n] = math.sqrt(n)
    a.setflags(write=False)
    a_dag = a.conj().T
    a_dag.setflags(write=False)
    return LadderOps(a=a, a_dag=a_dag)


def fock_state(n: int, space: FockSpace) -> ComplexVector:
    """|n> built by n applications of the creation operator on |0>.

    The construction divides by sqrt(n!) and is verified against the unit
    basis vector before returning.
    """
    if not 0 <= n < space.dim:
        raise ValueError(f"level {n} out of range for dim {space.dim}")
    ops = ladder_ops(space)
    state = np.zeros(space.dim, dtype=np.complex128)
    state[0] = 1.0
    for _ in range(n):
        state = ops.a_dag @ state
    state = state / math.sqrt(math.factorial(n))
    expected = np.zeros(space.dim, dtype=np.complex128)
    expected[n] = 1.0
    if float(np.max(np.abs(state - expected))) > _ELEMENT_TOL:
        raise AssertionError(f"ladder construction of |{n}> deviates from basis vector")
    return state


def wavefunction(n: int, x: float, space: FockSpace) -> float:
    """Position wavefunction of level 0 or 1 (unit normalised).

    psi_0(x) = (m w / pi hbar)^(1/4) exp(-m w x^2 / 2 hbar); psi_1 adds the
    first Hermite polynomial in the scaled coordinate and the 1/sqrt(2)
    factor that keeps it unit normalised.
    """
    if n not in (0, 1):
        raise ValueError(f"only levels 0 and 1 have defined wavefunctions, got {n}")
    scale = space.mass * space.frequency / space.hbar
    prefactor = (scale / math.pi) ** 0.25
    xi = math.sqrt(scale) * x
    gauss = math.exp(-0.5 * xi * xi)
    if n == 0:
        return prefactor * gauss
    # H_1(xi) = 2 xi, with the 1/sqrt(2^n n!) = 1/sqrt(2) factor at n = 1.
    return prefactor * (2.0 * xi / math.sqrt(2.0)) * gauss


@dataclass(frozen=True)
class SecondQuantizedGate:
    """Gate whose entries are operators on one truncated oscillator."""

    blocks: tuple[tuple[ComplexMatrix, ...], ...]
    prefactor: complex

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_matrix(b) for b in row) for row in self.blocks)
        if not rows or not rows[0]:
            raise ValueError("block grid must be non-empty")
        dim = rows[0][0].shape[0]
        for row in rows:
            if len(row) != len(rows[0]):
                raise ValueError("block grid must be rectangular")
            for b in row:
                if b.shape != (dim, dim):
                    raise ValueError("all blocks must share the oscillator dimension")
        for row in rows:
            for b in row:
                b.setflags(write=False)
        object.__setattr__(self, "blocks", rows)

    @property
    def block_rows(self) -> int:
        return len(self.blocks)

    @property
    def block_cols(self) -> int:
        return len(self.blocks[0])

    @property
    def oscillator_dim(self) -> int:
        return self.blocks[0][0].shape[0]

    def block(self, i: int, j: int) -> ComplexMatrix:
        return self.blocks[i][j]

    def dagger(self) -> "SecondQuantizedGate":
        """Adjoint: each block daggered, then the grid transposed."""
        rows = tuple(
            tuple(self.blocks[j][i].conj().T for j in range(self.block_rows))
            for i in range(self.block_cols)
        )
        return SecondQuantizedGate(blocks=rows, prefactor=complex(np.conj(self.prefactor)))


def sq_hadamard(space: FockSpace) -> SecondQuantizedGate:
    """Second-quantised Hadamard: creation blocks on top, annihilation below."""
    ops = ladder_ops(space)
    blocks = (
        (ops.a_dag, ops.a_dag),
        (ops.a, -ops.a),
    )
    return SecondQuantizedGate(blocks=blocks, prefactor=1.0 / math.sqrt(2.0))


def sq_hadamard_on_first(space: FockSpace) -> SecondQuantizedGate:
    """Second-quantised Hadamard on the first register of two.

    The 4x4 block grid interleaves an untouched second register; zero
    blocks mark the entries with no amplitude.
    """
    ops = ladder_ops(space)
    zero = np.zeros((space.dim, space.dim), dtype=np.complex128)
    blocks = (
        (ops.a_dag, zero, ops.a_dag, zero),
        (zero, ops.a_dag, zero, ops.a_dag),
        (ops.a, zero, -ops.a, zero),
        (zero, ops.a, zero, -ops.a),
    )
    return SecondQuantizedGate(blocks=blocks, prefactor=1.0 / math.sqrt(2.0))


def _block_element(block: ComplexMatrix) -> complex:
    """Collapse one operator block to its computational-subspace element.

    Rules: an all-zero block contributes 0; a block whose 2x2 restriction
    is a multiple of the identity contributes that multiple; a block with
    exactly one nonzero restricted entry contributes that entry.  Anything
    else is ambiguous and rejected.
    """
    restricted = block[:2, :2]
    if float(np.max(np.abs(block))) <= _ELEMENT_TOL:
        return 0.0
    nonzero = np.argwhere(np.abs(restricted) > _ELEMENT_TOL)
    if len(nonzero) == 0:
        raise ReductionError("block is zero on the computational subspace but not elsewhere")
    if len(nonzero) == 1:
        i, j = nonzero[0]
        return complex(restricted[i, j])
    if max_abs_diff(restricted, restricted[0, 0] * np.eye(2)) <= _ELEMENT_TOL:
        return complex(restricted[0, 0])
    raise ReductionError("block has no unique computational-subspace element")


def reduce_to_qubit(gate: SecondQuantizedGate) -> ComplexMatrix:
    """Collapse a block gate to its scalar form on the computational subspace.

    Each block is replaced by its single matrix element between levels 0
    and 1 (see :func:`_block_element`), times the prefactor.  The ladder
    elements involved are truncation independent, so the result does not
    depend on the oscillator dimension.
    """
    out = np.zeros((gate.block_rows, gate.block_cols), dtype=np.complex128)
    for i in range(gate.block_rows):
        for j in range(gate.block_cols):
            out[i, j] = gate.prefactor * _block_element(gate.block(i, j))
    return out


def leakage_norm(state: ComplexVector, space: FockSpace) -> float:
    """Population of levels >= 2, outside the computational subspace."""
    v = np.asarray(state, dtype=np.complex128).reshape(-1)
    if v.shape[0] != space.dim:
        raise ValueError(f"state dim {v.shape[0]} does not match space dim {space.dim}")
    return float(np.sum(np.abs(v[2:]) ** 2))
