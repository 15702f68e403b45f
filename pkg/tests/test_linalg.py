import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pevsim import linalg

from conftest import H_REF


def _random_int_matrix(gen, rows, cols):
    return (
        gen.integers(-3, 4, size=(rows, cols)) + 1j * gen.integers(-3, 4, size=(rows, cols))
    ).astype(np.complex128)


small_dims = st.integers(min_value=1, max_value=3)


@st.composite
def int_matrices(draw, rows=None, cols=None):
    rows = rows if rows is not None else draw(small_dims)
    cols = cols if cols is not None else draw(small_dims)
    entries = st.integers(min_value=-3, max_value=3)
    data = draw(
        st.lists(st.tuples(entries, entries), min_size=rows * cols, max_size=rows * cols)
    )
    return np.array([complex(re, im) for re, im in data]).reshape(rows, cols)


class TestKron:
    def test_identity_case(self):
        assert linalg.approx_eq(linalg.kron(np.eye(2), np.eye(2)), np.eye(4), 0.0)

    def test_hadamard_with_identity_hand_expansion(self):
        expected = np.array(
            [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, -1, 0], [0, 1, 0, -1]]
        ) / np.sqrt(2.0)
        assert linalg.approx_eq(linalg.kron(H_REF, np.eye(2)), expected)

    def test_one_by_one_factor_scales(self):
        got = linalg.kron(np.array([[0, 1], [1, 0]]), np.array([[2]]))
        assert linalg.approx_eq(got, np.array([[0, 2], [2, 0]]), 0.0)

    def test_matches_definition_elementwise(self):
        # Independent oracle: the index formula written out as loops.
        gen = np.random.default_rng(11)
        a = _random_int_matrix(gen, 2, 3)
        b = _random_int_matrix(gen, 3, 2)
        got = linalg.kron(a, b)
        for i in range(2):
            for j in range(3):
                for k in range(3):
                    for l in range(2):
                        assert got[i * 3 + k, j * 2 + l] == a[i, j] * b[k, l]

    def test_associativity(self):
        gen = np.random.default_rng(5)
        for _ in range(10):
            a, b, c = (_random_int_matrix(gen, 2, 2) for _ in range(3))
            left = linalg.kron(linalg.kron(a, b), c)
            right = linalg.kron(a, linalg.kron(b, c))
            assert np.array_equal(left, right)

    @given(a=int_matrices(2, 2), b=int_matrices(2, 2), c=int_matrices(2, 2), d=int_matrices(2, 2))
    @settings(max_examples=25, deadline=None)
    def test_mixed_product(self, a, b, c, d):
        left = linalg.matmul(linalg.kron(a, b), linalg.kron(c, d))
        right = linalg.kron(linalg.matmul(a, c), linalg.matmul(b, d))
        assert linalg.approx_eq(left, right, 1e-12)


class TestDagger:
    def test_conjugates_entries(self):
        got = linalg.dagger(np.array([[1j, 0], [0, 1]]))
        assert linalg.approx_eq(got, np.array([[-1j, 0], [0, 1]]), 0.0)

    def test_hadamard_self_adjoint(self):
        assert linalg.approx_eq(linalg.dagger(H_REF), H_REF, 0.0)

    def test_transposes_nilpotent(self):
        got = linalg.dagger(np.array([[0, 1], [0, 0]]))
        assert linalg.approx_eq(got, np.array([[0, 0], [1, 0]]), 0.0)

    @given(a=int_matrices())
    @settings(max_examples=25, deadline=None)
    def test_involution(self, a):
        assert np.array_equal(linalg.dagger(linalg.dagger(a)), a)

    @given(a=int_matrices(2, 3), b=int_matrices(3, 2))
    @settings(max_examples=25, deadline=None)
    def test_anti_homomorphism(self, a, b):
        left = linalg.dagger(linalg.matmul(a, b))
        right = linalg.matmul(linalg.dagger(b), linalg.dagger(a))
        assert linalg.approx_eq(left, right, 1e-12)


class TestMatmul:
    def test_identity_neutral(self):
        m = np.array([[1, 2j], [3, 4]])
        assert linalg.approx_eq(linalg.matmul(np.eye(2), m), m, 0.0)

    def test_hadamard_involutive(self):
        assert linalg.approx_eq(linalg.matmul(H_REF, H_REF), np.eye(2))

    def test_bit_flip_on_basis_vector(self):
        got = linalg.matmul(np.array([[0, 1], [1, 0]]), np.array([[1], [0]]))
        assert linalg.approx_eq(got, np.array([[0], [1]]), 0.0)

    def test_shape_mismatch_raises(self):
        with pytest.raises(linalg.ShapeError):
            linalg.matmul(np.eye(2), np.eye(3))


class TestTrace:
    def test_identity(self):
        assert linalg.trace(np.eye(4)) == 4

    def test_unit_trace_state(self):
        assert linalg.trace(0.5 * np.ones((2, 2))) == pytest.approx(1.0)

    def test_hollow_matrix(self):
        assert linalg.trace(np.array([[0, 5], [7, 0]])) == 0

    def test_non_square_raises(self):
        with pytest.raises(linalg.ShapeError):
            linalg.trace(np.ones((2, 3)))

    @given(a=int_matrices(3, 3), b=int_matrices(3, 3))
    @settings(max_examples=25, deadline=None)
    def test_cyclicity(self, a, b):
        assert abs(linalg.trace(a @ b) - linalg.trace(b @ a)) <= 1e-12


class TestApproxEq:
    def test_exact_match_at_zero_tolerance(self):
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert linalg.approx_eq(m, m, 0.0)

    def test_within_tolerance(self):
        bump = np.eye(2) + 1e-9 * np.array([[1, 0], [0, 0]])
        assert linalg.approx_eq(np.eye(2), bump, 1e-8)

    def test_outside_tolerance(self):
        assert not linalg.approx_eq(np.array([[1.0]]), np.array([[1.1]]), 1e-3)

    def test_shape_mismatch_raises(self):
        with pytest.raises(linalg.ShapeError):
            linalg.approx_eq(np.eye(2), np.eye(3))


class TestIsUnitary:
    def test_hadamard(self):
        assert linalg.is_unitary(H_REF, 1e-12)

    def test_projector_is_not(self):
        assert not linalg.is_unitary(np.array([[1.0, 0.0], [0.0, 0.0]]), 1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 0.3, 1.7, np.pi])
    def test_phase_times_identity(self, alpha):
        assert linalg.is_unitary(np.exp(1j * alpha) * np.eye(2), 1e-12)


class TestValidation:
    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            linalg.as_matrix(np.array([[np.nan, 0], [0, 1]]))

    def test_rejects_empty(self):
        with pytest.raises(linalg.ShapeError):
            linalg.as_matrix(np.zeros((0, 2)))

    def test_vector_shape(self):
        with pytest.raises(linalg.ShapeError):
            linalg.as_vector(np.eye(2))
