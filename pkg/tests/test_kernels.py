import itertools
from math import factorial

import numpy as np
import pytest

from qspace import _kernels
from qspace.labeled_oracle import literal_determinant, literal_permanent

PERMANENTS = [_kernels.permanent_numba, _kernels.permanent_numpy]
DETERMINANTS = [_kernels.determinant_numba, _kernels.determinant_numpy]


@pytest.mark.parametrize("perm", PERMANENTS, ids=["numba", "numpy"])
def test_permanent_known_values(perm):
    assert perm(np.zeros((0, 0))) == 1
    assert perm([[7]]) == 7
    assert perm([[1, 2], [3, 4]]) == 1 * 4 + 2 * 3
    for n in range(1, 8):
        assert perm(np.ones((n, n))) == factorial(n)
        assert perm(np.eye(n)) == 1


@pytest.mark.parametrize("det", DETERMINANTS, ids=["numba", "numpy"])
def test_determinant_known_values(det):
    assert det(np.zeros((0, 0))) == 1
    assert det([[1, 2], [3, 4]]) == -2
    assert det([[0, 1], [1, 0]]) == -1
    assert det([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1
    for n in range(2, 7):
        assert det(np.ones((n, n))) == 0
        assert det(np.eye(n)) == 1


@pytest.mark.parametrize("n", range(0, 5))
def test_kernels_match_literal_expansion_on_all_01_matrices(n):
    # every 0/1 matrix up to 3x3, a sample at 4x4
    if n <= 3:
        mats = (np.array(bits).reshape(n, n) for bits in itertools.product((0, 1), repeat=n * n))
    else:
        rng = np.random.default_rng(4)
        mats = (rng.integers(0, 2, size=(n, n)) for _ in range(300))
    for m in mats:
        p, d = literal_permanent(m), literal_determinant(m)
        for f in PERMANENTS:
            assert f(m) == p
        for f in DETERMINANTS:
            assert f(m) == d


def test_backends_agree_on_larger_integer_matrices():
    rng = np.random.default_rng(0)
    for n in range(5, 10):
        for _ in range(20):
            m = rng.integers(-3, 4, size=(n, n))
            assert _kernels.permanent_numba(m) == _kernels.permanent_numpy(m)
            assert _kernels.determinant_numba(m) == _kernels.determinant_numpy(m)
            assert _kernels.determinant_numpy(m) == round(np.linalg.det(m))


def test_delta_matrix():
    m = _kernels.delta_matrix((1, 1, 2), (1, 2, 2))
    assert m.tolist() == [[1, 0, 0], [1, 0, 0], [0, 1, 1]]
    assert m.dtype == np.int64


def test_non_square_rejected():
    with pytest.raises(ValueError):
        _kernels.permanent(np.ones((2, 3)))


def test_backend_flag_is_consistent():
    assert _kernels.BACKEND in ("numba", "numpy")
    expected = _kernels.permanent_numba if _kernels.USE_NUMBA else _kernels.permanent_numpy
    assert _kernels.permanent is expected
