"""Labelled tensor-product states, symmetrisers and permutation operators.

This is the conventional route to identical particles: give each particle a
label, write product states ``|w_1 w_2 ... w_n>`` (particle ``k`` in level
``w_k``), then restrict to symmetric or antisymmetric combinations and to
observables that commute with label permutations.

It is kept deliberately separate from :mod:`qspace.fock` and serves as an
independent oracle for it: :func:`oracle_inner` evaluates the boson/fermion
basis inner products as literal sums over all ``n!`` permutations, sharing no
code with the kernels used by :func:`qspace.fock.inner`.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping, Sequence
from math import factorial

import numpy as np

from .fock import BOSON, OccupationMap, _fmt_complex, particle_kind

TOL = 1e-9


class DimensionMismatch(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


class NotPermutationCompatible(ValueError):
    """The observable does not commute with the permutation operator."""


def parity(perm: Sequence[int]) -> int:
    """+1 for an even permutation of ``0..n-1``, -1 for an odd one."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class LabeledVector:
    """Finite complex combination of labelled assignments (tuples of level indices)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, complex] = {}
        for a, c in pairs:
            a = tuple(a)
            acc[a] = acc.get(a, 0j) + complex(c)
        self._terms = {a: c for a, c in acc.items() if abs(c) > 1e-12}

    @property
    def terms(self) -> dict[tuple, complex]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def particle_numbers(self) -> set[int]:
        return {len(a) for a in self._terms}

    def __add__(self, other):
        return LabeledVector(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, lam):
        return LabeledVector((a, c * lam) for a, c in self._terms.items())

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LabeledVector):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({_fmt_complex(c)})|{' '.join(map(str, a))}>" for a, c in self.items())


def product_state(word: Iterable[int]) -> LabeledVector:
    return LabeledVector({tuple(word): 1})


def symmetrize(word: Sequence[int], sign: int = +1) -> LabeledVector:
    """Unnormalised ``sum_p (sgn p)^[sign<0] |p.word>`` over all ``n!`` permutations."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    word = tuple(word)
    n = len(word)
    terms = []
    for p in itertools.permutations(range(n)):
        c = parity(p) if sign < 0 else 1
        terms.append((tuple(word[p[k]] for k in range(n)), c))
    return LabeledVector(terms)


def labeled_inner(v: LabeledVector, w: LabeledVector, strict: bool = False) -> complex:
    """Inner product in the orthonormal product basis, conjugate-linear in ``v``.

    Assignments of different lengths are orthogonal; with ``strict=True`` they
    raise :class:`DimensionMismatch` instead.
    """
    if strict and v._terms and w._terms and v.particle_numbers != w.particle_numbers:
        raise DimensionMismatch(f"particle numbers {v.particle_numbers} vs {w.particle_numbers}")
    total = 0j
    for a, c in v._terms.items():
        d = w._terms.get(a)
        if d is not None:
            total += c.conjugate() * d
    return total


def _check_perm(p, n):
    if sorted(p) != list(range(n)):
        raise SizeMismatch(f"{p!r} is not a permutation of {n} labels")


def apply_permutation(p: Sequence[int], v: LabeledVector) -> LabeledVector:
    """Relabel: the particle carrying label ``k`` gets label ``p[k]``."""
    p = tuple(p)
    out = []
    for a, c in v._terms.items():
        _check_perm(p, len(a))
        new = [None] * len(a)
        for k, level in enumerate(a):
            new[p[k]] = level
        out.append((tuple(new), c))
    return LabeledVector(out)


# ---------------------------------------------------------------------------
# matrices on the assignment space
# ---------------------------------------------------------------------------


def assignment_basis(n: int, levels: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(levels, repeat=n))


def to_array(v: LabeledVector, n: int, levels: Sequence[int]) -> np.ndarray:
    basis = assignment_basis(n, levels)
    index = {a: i for i, a in enumerate(basis)}
    out = np.zeros(len(basis), dtype=complex)
    for a, c in v._terms.items():
        if a not in index:
            raise SizeMismatch(f"assignment {a} is outside the {n}-particle space over {list(levels)}")
        out[index[a]] = c
    return out


def permutation_matrix(p: Sequence[int], n: int, levels: Sequence[int]) -> np.ndarray:
    _check_perm(p, n)
    basis = assignment_basis(n, levels)
    index = {a: i for i, a in enumerate(basis)}
    P = np.zeros((len(basis), len(basis)))
    for j, a in enumerate(basis):
        (image,) = apply_permutation(p, product_state(a))._terms
        P[index[image], j] = 1.0
    return P


def group_average(A: np.ndarray, n: int, levels: Sequence[int]) -> np.ndarray:
    """``sum_p P_p^dagger A P_p``; commutes with every label permutation."""
    out = np.zeros_like(A, dtype=complex)
    for p in itertools.permutations(range(n)):
        P = permutation_matrix(p, n, levels)
        out += P.conj().T @ A @ P
    return out


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (X + X.conj().T) / 2


def is_permutation_compatible(O: np.ndarray, p, n: int, levels, tol: float = TOL) -> bool:
    P = permutation_matrix(p, n, levels)
    return float(np.max(np.abs(O @ P - P @ O), initial=0.0)) <= tol


def ip_expectation_check(O: np.ndarray, v: LabeledVector, p: Sequence[int], levels: Sequence[int],
                         tol: float = TOL) -> tuple[float, float]:
    """Expectation of ``O`` in ``v`` and in ``P v``.

    Refuses with :class:`NotPermutationCompatible` unless ``O P - P O = 0``;
    when it runs, the two numbers agree.
    """
    O = np.asarray(O)
    (n,) = v.particle_numbers or {len(p)}
    if O.shape != (len(levels) ** n,) * 2:
        raise SizeMismatch(f"observable shape {O.shape} does not fit {n} particles over {len(levels)} levels")
    if np.max(np.abs(O - O.conj().T), initial=0.0) > tol:
        raise ValueError("observable is not hermitian")
    if not is_permutation_compatible(O, p, n, levels, tol):
        raise NotPermutationCompatible(f"observable does not commute with the permutation {tuple(p)}")
    psi = to_array(v, n, levels)
    ppsi = to_array(apply_permutation(p, v), n, levels)
    lhs = np.vdot(psi, O @ psi).real
    rhs = np.vdot(ppsi, O @ ppsi).real
    return float(lhs), float(rhs)


# ---------------------------------------------------------------------------
# oracle for the occupation-number inner products
# ---------------------------------------------------------------------------


def literal_permanent(M) -> int:
    M = np.asarray(M)
    n = M.shape[0]
    return sum(int(np.prod([M[k, p[k]] for k in range(n)])) for p in itertools.permutations(range(n)))


def literal_determinant(M) -> int:
    M = np.asarray(M)
    n = M.shape[0]
    return sum(parity(p) * int(np.prod([M[k, p[k]] for k in range(n)])) for p in itertools.permutations(range(n)))


def oracle_inner(kind, occ1, occ2) -> int:
    """Basis inner product by literal permutation sum over the delta matrix."""
    w1 = OccupationMap(occ1).word() if not isinstance(occ1, OccupationMap) else occ1.word()
    w2 = OccupationMap(occ2).word() if not isinstance(occ2, OccupationMap) else occ2.word()
    if len(w1) != len(w2):
        return 0
    M = [[1 if a == b else 0 for b in w2] for a in w1]
    if particle_kind(kind) == BOSON:
        return literal_permanent(M)
    return literal_determinant(M)


def bridge_inner(kind, word1: Sequence[int], word2: Sequence[int]) -> int:
    """``<S w1 | S w2> / n!`` with ``S`` the (anti)symmetriser; an exact integer."""
    sign = 1 if particle_kind(kind) == BOSON else -1
    if len(word1) != len(word2):
        return 0
    ip = labeled_inner(symmetrize(word1, sign), symmetrize(word2, sign))
    value = round(ip.real)
    q, r = divmod(value, factorial(len(word1)))
    assert r == 0 and abs(ip.imag) < 1e-9, ip
    return q
