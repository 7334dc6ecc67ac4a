"""Integer permanent and determinant kernels for small square matrices.

Two interchangeable backends are provided: numba-compiled loops and a
vectorised pure-numpy path.  Set ``QSPACE_DISABLE_NUMBA=1`` in the environment
(before import) to force the numpy path; it is also used when numba is not
importable.  Both backends are always importable under their own names so
they can be cross-checked and benchmarked side by side.

All arithmetic is exact ``int64``; entries of delta matrices are 0/1 and the
matrices handled here are at most ~12x12, far from overflow.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return wrap


_DISABLE = os.environ.get("QSPACE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not _DISABLE
BACKEND = "numba" if USE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------


@njit(cache=True)
def _permanent_nb(a):
    # Ryser's formula walked in Gray-code order: one column add/remove per step.
    n = a.shape[0]
    if n == 0:
        return 1
    rowsums = np.zeros(n, dtype=np.int64)
    total = 0
    size = 0
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        diff = gray ^ prev_gray
        j = 0
        while (diff >> j) & 1 == 0:
            j += 1
        if gray & diff:
            for i in range(n):
                rowsums[i] += a[i, j]
            size += 1
        else:
            for i in range(n):
                rowsums[i] -= a[i, j]
            size -= 1
        prev_gray = gray
        prod = 1
        for i in range(n):
            prod *= rowsums[i]
            if prod == 0:
                break
        if size & 1:
            total -= prod
        else:
            total += prod
    if n & 1:
        return -total
    return total


@njit(cache=True)
def _determinant_nb(a):
    # Fraction-free Bareiss elimination; every division is exact.
    n = a.shape[0]
    if n == 0:
        return 1
    m = a.copy()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k, k] == 0:
            pivot = -1
            for i in range(k + 1, n):
                if m[i, k] != 0:
                    pivot = i
                    break
            if pivot < 0:
                return 0
            for j in range(n):
                tmp = m[k, j]
                m[k, j] = m[pivot, j]
                m[pivot, j] = tmp
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i, j] = (m[i, j] * m[k, k] - m[i, k] * m[k, j]) // prev
        prev = m[k, k]
    return sign * m[n - 1, n - 1]


# --------------------------------------------------------------------------
# numpy kernels
# --------------------------------------------------------------------------


def _permanent_np(a):
    n = a.shape[0]
    if n == 0:
        return 1
    subsets = (np.arange(1 << n, dtype=np.int64)[:, None] >> np.arange(n)) & 1
    rowsums = subsets @ a.T
    signs = np.where(subsets.sum(axis=1) % 2 == 1, -1, 1)
    total = int((signs * rowsums.prod(axis=1)).sum())
    return -total if n % 2 else total


def _determinant_np(a):
    n = a.shape[0]
    if n == 0:
        return 1
    m = a.copy()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k, k] == 0:
            nz = np.nonzero(m[k + 1 :, k])[0]
            if nz.size == 0:
                return 0
            p = k + 1 + nz[0]
            m[[k, p]] = m[[p, k]]
            sign = -sign
        m[k + 1 :, k + 1 :] = (m[k + 1 :, k + 1 :] * m[k, k] - np.outer(m[k + 1 :, k], m[k, k + 1 :])) // prev
        prev = m[k, k]
    return sign * int(m[n - 1, n - 1])


# --------------------------------------------------------------------------
# public entry points
# --------------------------------------------------------------------------


def _as_int_matrix(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def permanent_numba(a):
    """Exact permanent of a square integer matrix (Ryser, compiled)."""
    return int(_permanent_nb(_as_int_matrix(a)))


def permanent_numpy(a):
    return int(_permanent_np(_as_int_matrix(a)))


def determinant_numba(a):
    """Exact determinant of a square integer matrix (Bareiss, compiled)."""
    return int(_determinant_nb(_as_int_matrix(a)))


def determinant_numpy(a):
    return int(_determinant_np(_as_int_matrix(a)))


if USE_NUMBA:
    permanent = permanent_numba
    determinant = determinant_numba
else:
    permanent = permanent_numpy
    determinant = determinant_numpy


def delta_matrix(word1, word2):
    """``M[j, k] = 1`` if ``word1[j] == word2[k]`` else 0, as an int64 matrix."""
    return np.equal.outer(np.asarray(word1, dtype=np.int64), np.asarray(word2, dtype=np.int64)).astype(np.int64)
