"""Dense complex linear algebra for small operator matrices.

Everything in this package works on plain ``numpy`` arrays of complex128.
The helpers here add the shape validation and tolerance conventions the
rest of the package relies on.  Problem sizes are tiny (at most a few
Fock blocks of a 4x4 gate), so clarity wins over speed throughout.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]

#: Absolute entry-wise tolerance used by default everywhere.  All the
#: reference values in this domain are exact rationals or surds, so double
#: precision leaves ample headroom below 1e-12.
DEFAULT_TOL = 1e-12


class ShapeError(ValueError):
    """Operand dimensions do not match the operation's contract."""


def as_matrix(values) -> ComplexMatrix:
    """Coerce to a 2-D complex128 array and validate it is finite and non-empty."""
    m = np.array(values, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"matrix must be at least 1x1, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(values) -> ComplexVector:
    """Coerce to a 1-D complex128 array and validate it is finite and non-empty."""
    v = np.array(values, dtype=np.complex128)
    if v.ndim != 1:
        raise ShapeError(f"expected a 1-D vector, got ndim={v.ndim}")
    if v.shape[0] < 1:
        raise ShapeError("vector must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; kron(a, b)[i*B + k, j*B + l] = a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(a: ComplexMatrix) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"trace needs a square matrix, got {a.shape}")
    return complex(np.trace(a))


def max_abs_diff(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Largest entry-wise modulus difference between two same-shape matrices."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def approx_eq(a: ComplexMatrix, b: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    """True iff the largest entry-wise modulus difference is at most ``tol``."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return max_abs_diff(a, b) <= tol


def is_hermitian(a: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"hermiticity needs a square matrix, got {a.shape}")
    return approx_eq(a, a.conj().T, tol)


def is_unitary(a: ComplexMatrix, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"unitarity needs a square matrix, got {a.shape}")
    eye = identity(a.shape[0])
    return approx_eq(a @ a.conj().T, eye, tol) and approx_eq(a.conj().T @ a, eye, tol)
