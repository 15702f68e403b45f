"""Shared fixtures: reference matrices frozen by hand.

These are deliberately entered independently of the package's own
reference copies (``pevsim.checks``) so one transcription slip cannot
satisfy both the library and its tests.
"""

import numpy as np
import pytest

SQRT2 = np.sqrt(2.0)

H_REF = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2


@pytest.fixture(scope="session")
def table1():
    """Oracle evolution operators at alpha = 0 (exact integer entries)."""
    return {
        "f1": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float),
        "f2": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float),
        "f3": np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float),
        "f4": np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float),
    }


@pytest.fixture(scope="session")
def table2():
    """Density matrices right after the oracle, per function."""
    constant = 0.25 * np.array(
        [[1, -1, 1, -1], [-1, 1, -1, 1], [1, -1, 1, -1], [-1, 1, -1, 1]], dtype=float
    )
    balanced = 0.25 * np.array(
        [[1, -1, -1, 1], [-1, 1, 1, -1], [-1, 1, 1, -1], [1, -1, -1, 1]], dtype=float
    )
    return {"f1": constant, "f2": balanced, "f3": balanced, "f4": constant}


@pytest.fixture(scope="session")
def table3():
    """Density matrices right before the measurement, per function."""
    constant = 0.5 * np.array(
        [[1, -1, 0, 0], [-1, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=float
    )
    balanced = 0.5 * np.array(
        [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, -1], [0, 0, -1, 1]], dtype=float
    )
    return {"f1": constant, "f2": balanced, "f3": balanced, "f4": constant}


@pytest.fixture(scope="session")
def expected_outcome():
    return {"f1": 0, "f2": 1, "f3": 1, "f4": 0}
