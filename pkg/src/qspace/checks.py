"""Exhaustive verification sweeps behind the ``check-*`` and ``demo-*`` commands."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .fock import BOSON, FERMION, FockVector, OccupationMap, particle_kind
from .labeled_oracle import oracle_inner
from .qset_kernel import QSet, indistinguishable, permutation_swap, qset


def occupation_maps(levels, max_total: int, max_per_level: int | None = None, min_total: int = 0):
    """All occupation maps over ``levels`` with ``min_total <= size <= max_total``."""
    levels = list(levels)
    cap = max_total if max_per_level is None else min(max_per_level, max_total)
    out = []
    for counts in itertools.product(range(cap + 1), repeat=len(levels)):
        total = sum(counts)
        if min_total <= total <= max_total:
            out.append(OccupationMap({i: n for i, n in zip(levels, counts) if n}))
    out.sort(key=lambda o: (o.size, o.word()))
    return out


def fermion_kets(levels, max_particles: int):
    return occupation_maps(levels, max_particles, max_per_level=1)


def random_superposition(maps, rng: np.random.Generator, terms: int = 4) -> FockVector:
    picks = rng.choice(len(maps), size=min(terms, len(maps)), replace=False)
    coeffs = rng.normal(size=len(picks)) + 1j * rng.normal(size=len(picks))
    return FockVector((maps[int(k)], complex(c)) for k, c in zip(picks, coeffs))


@dataclass
class SweepReport:
    tol: float
    cases: int = 0
    max_residual: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name: str, value: float, detail: dict):
        self.cases += 1
        self.max_residual[name] = max(self.max_residual.get(name, 0.0), float(value))
        if not value <= self.tol:
            self.failures.append({"check": name, "residual": float(value), **detail})

    @property
    def ok(self) -> bool:
        return not self.failures and all(v <= self.tol for v in self.max_residual.values())


def commutator_sweep(kind, n_levels: int, max_occ: int, tol: float = fock.TOL, random_vectors: int = 0,
                     seed: int = 0, start: int = 1) -> SweepReport:
    """All (anti)commutation relations and the number identity on every basis ket.

    Bosons: every ket with total occupation ``<= max_occ``.  Fermions: every
    ket with at most ``max_occ`` particles and no repeated level.  Optionally
    adds ``random_vectors`` seeded random superpositions of those kets.
    """
    kind = particle_kind(kind)
    levels = list(range(start, start + n_levels))
    basis = fock.LevelBasis.uniform(n_levels, start=start)
    maps = occupation_maps(levels, max_occ) if kind == BOSON else fermion_kets(levels, max_occ)
    vectors = [(repr(o), fock.basis_ket(o)) for o in maps]
    rng = np.random.default_rng(seed)
    for r in range(random_vectors):
        v = random_superposition(maps, rng)
        vectors.append((f"random#{r}: {v!r}", v))

    report = SweepReport(tol)
    for label, v in vectors:
        for a in levels:
            for b in levels:
                for rel in fock.RELATIONS:
                    res = fock.commutator_residual(kind, a, b, v, rel, basis=basis)
                    report.record(rel, res.max_abs(), {"alpha": a, "beta": b, "ket": label})
            res = fock.number_residual(kind, a, v, basis=basis)
            report.record("number", res.max_abs(), {"alpha": a, "beta": a, "ket": label})
    if kind == FERMION:
        # Pauli exclusion: every repeated word has exactly zero norm.
        for occ in occupation_maps(levels, max(max_occ, 2), min_total=2):
            if occ.has_repeats():
                ip = fock.basis_inner(FERMION, occ, occ)
                report.record("pauli", abs(ip), {"ket": repr(occ)})
    return report


def oracle_sweep(n_levels: int, max_len: int, start: int = 1) -> SweepReport:
    """``fock.basis_inner`` against the literal permutation sum, every pair, both kinds."""
    levels = list(range(start, start + n_levels))
    maps = occupation_maps(levels, max_len)
    report = SweepReport(tol=0.0)
    for kind in (BOSON, FERMION):
        for f in maps:
            for g in maps:
                got = fock.basis_inner(kind, f, g)
                want = oracle_inner(kind, f, g)
                report.record(kind, abs(got - want), {"left": repr(f), "right": repr(g), "got": got, "want": want})
    return report


def m_multisets(kinds, max_total: int):
    kinds = list(kinds)
    out = []
    for counts in itertools.product(range(max_total + 1), repeat=len(kinds)):
        if sum(counts) <= max_total:
            out.append(qset({k: n for k, n in zip(kinds, counts) if n}))
    return out


def permutation_demo(max_total: int = 5, n_kinds: int = 3) -> SweepReport:
    """Swap an atom of ``x`` for an outside one of the pool ``t``, for every valid ``(x, kind, t)``.

    ``x`` ranges over every m-multiset with total count ``<= max_total`` over
    ``n_kinds`` kinds, ``t`` over every such multiset containing ``x`` with
    at least one extra atom of the swapped kind.
    """
    kinds = [f"k{i}" for i in range(n_kinds)]
    sets = m_multisets(kinds, max_total)
    report = SweepReport(tol=0.0)
    for x in sets:
        for t in sets:
            if t.minus(x).plus(x) != t:
                continue  # x is not inside t
            for k in x.kinds():
                if t.count(k) <= x.count(k):
                    continue
                y = permutation_swap(x, k, t)
                same = y == x and indistinguishable(y, x) and isinstance(y, QSet)
                report.record("swap", 0.0 if same else 1.0, {"x": repr(x), "kind": k, "t": repr(t), "result": repr(y)})
    return report
