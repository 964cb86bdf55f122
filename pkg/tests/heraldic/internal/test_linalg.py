import numpy as np
import pytest

from heraldic.exceptions import DimensionError, NotUnitaryError
from heraldic.internal import as_square, ensure_unitary, unitarity_deviation


def test_as_square():
    assert as_square([[1, 2], [3, 4]]).dtype == np.complex128
    with pytest.raises(DimensionError, match="`thing`"):
        as_square(np.ones(3), field="thing")


def test_unitarity_deviation():
    assert unitarity_deviation(np.eye(3)) == 0
    assert unitarity_deviation(np.diag([1, 1, 2])) == pytest.approx(3)


def test_ensure_unitary():
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.allclose(ensure_unitary(hadamard, 1e-12), hadamard)
    with pytest.raises(NotUnitaryError, match="`u`"):
        ensure_unitary(np.ones((2, 2)), 1e-8, field="u")
