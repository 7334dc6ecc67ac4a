"""Microstate counting for Maxwell-Boltzmann, Bose-Einstein and Fermi-Dirac statistics.

Everything here is exact: counts are Python integers and probabilities are
:class:`fractions.Fraction`.

Microstates are plain tuples.  For MB a microstate is a labelled assignment,
``state[p]`` being the (0-based) state of particle ``p + 1``.  For BE and FD it
is an occupation vector of length ``C``; no particle labels appear.

Enumeration order is deterministic.  MB assignments come in lexicographic
order of the assignment tuple.  BE/FD occupation vectors come in
lexicographic order of their sorted state-index words, so ``(2, 0)`` (word
``00``) precedes ``(1, 1)`` (word ``01``) which precedes ``(0, 2)`` (``11``).
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from math import comb, factorial, prod

DEFAULT_CAP = 10**6


class StatisticsKind(str, enum.Enum):
    MB = "mb"
    BE = "be"
    FD = "fd"

    @classmethod
    def parse(cls, value) -> StatisticsKind:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown statistics kind {value!r}; expected mb, be or fd") from None


class CapExceeded(Exception):
    pass


def _check(N, C):
    if N < 0:
        raise ValueError(f"particle number must be >= 0, got {N}")
    if C < 1:
        raise ValueError(f"number of states must be >= 1, got {C}")


def planck_weight(N: int, C: int) -> int:
    """Ways to put ``N`` indistinguishable quanta into ``C`` states: (N+C-1)! / (N! (C-1)!)."""
    _check(N, C)
    return factorial(N + C - 1) // (factorial(N) * factorial(C - 1))


def count_microstates(kind, N: int, C: int) -> int:
    kind = StatisticsKind.parse(kind)
    _check(N, C)
    if kind is StatisticsKind.MB:
        return C**N
    if kind is StatisticsKind.BE:
        return planck_weight(N, C)
    return comb(C, N)  # zero when N > C


def _occupations(word, C):
    occ = [0] * C
    for s in word:
        occ[s] += 1
    return tuple(occ)


def enumerate_microstates(kind, N: int, C: int, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    kind = StatisticsKind.parse(kind)
    n = count_microstates(kind, N, C)
    if n > cap:
        raise CapExceeded(f"{kind.value.upper()} with N={N}, C={C} has {n} microstates, above the cap of {cap}")
    if kind is StatisticsKind.MB:
        return list(itertools.product(range(C), repeat=N))
    if kind is StatisticsKind.BE:
        words = itertools.combinations_with_replacement(range(C), N)
    else:
        words = itertools.combinations(range(C), N)
    return [_occupations(w, C) for w in words]


def equiprobability_table(kind, N: int, C: int, cap: int = DEFAULT_CAP) -> list[tuple[tuple[int, ...], Fraction]]:
    states = enumerate_microstates(kind, N, C, cap=cap)
    if not states:
        return []
    p = Fraction(1, len(states))
    return [(s, p) for s in states]


def multinomial(N: int, parts) -> int:
    """N! / prod(n_i!): labelled assignments realising one occupation vector."""
    return factorial(N) // prod(factorial(n) for n in parts)


def state_letter(i: int) -> str:
    """0 -> 'A', 1 -> 'B', ..., 26 -> 'S26'."""
    return chr(ord("A") + i) if i < 26 else f"S{i}"
