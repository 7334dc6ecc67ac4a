"""A finite, executable model of quasi-sets.

m-atoms are never stored individually.  A q-set keeps its m-content as a
multiset ``kind -> count`` and everything else (M-atoms and nested q-sets) as
an ordinary frozenset.  Nothing in the public surface iterates over m-atoms,
so no ordering, and hence no labelling, of indistinguishable atoms can leak.

In this model two q-sets are indistinguishable exactly when they are
structurally equal, which is what ``QSet.__eq__`` implements.  Identity in the
strict sense is only available for classical things; see :func:`identical`.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Union


class QSetError(Exception):
    """Base class for errors raised by the quasi-set kernel."""


class IdentityUndefined(QSetError):
    """Raised when identity is asked of something involving m-atoms."""


class NotAMember(QSetError):
    pass


class PreconditionFailed(QSetError):
    pass


@dataclass(frozen=True)
class AtomKind:
    """An atom, observable only through its kind.

    For flavor ``"m"`` the id names a species (``"electron"``); every m-atom of
    that species is the same ``AtomKind`` value, which is the point.  For
    flavor ``"M"`` the id is the atom's label and carries ordinary identity.
    """

    id: Union[str, int, float]
    flavor: str = "m"

    def __post_init__(self):
        if self.flavor not in ("m", "M"):
            raise ValueError(f"flavor must be 'm' or 'M', got {self.flavor!r}")
        if self.flavor == "m":
            object.__setattr__(self, "id", str(self.id))

    @property
    def is_m(self) -> bool:
        return self.flavor == "m"

    def __repr__(self):
        return f"{'m' if self.is_m else 'M'}({self.id!r})"


def m_atom(kind: str) -> AtomKind:
    return AtomKind(kind, "m")


def M_atom(label) -> AtomKind:
    return AtomKind(label, "M")


def _kind_id(kind) -> str:
    if isinstance(kind, AtomKind):
        if not kind.is_m:
            raise TypeError(f"{kind!r} is not an m-atom kind")
        return kind.id
    return str(kind)


def _check_member(x):
    if isinstance(x, QSet):
        return x
    if isinstance(x, AtomKind):
        if x.is_m:
            raise TypeError("m-atoms belong in the m-part, not among the other members")
        return x
    # Bare scalars stand for M-atoms labelled by themselves: {1, 2, 3}.
    if isinstance(x, (int, float, str)) and not isinstance(x, bool):
        return M_atom(x)
    raise TypeError(f"cannot place {x!r} in a q-set")


class QSet:
    """A finite q-set.

    ``m_part`` maps m-kind ids to positive counts.  ``classical_part`` holds
    every other member: M-atoms and nested q-sets.  Nested q-sets may
    themselves carry m-atoms; duplicates among nested members are merged by
    structural equality.
    """

    __slots__ = ("_m", "_others", "_hash")

    def __init__(self, m: Mapping | None = None, classical: Iterable = ()):
        counts: dict[str, int] = {}
        for kind, n in (m or {}).items():
            k = _kind_id(kind)
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise ValueError(f"count for kind {k!r} must be a non-negative integer, got {n!r}")
            if n:
                counts[k] = counts.get(k, 0) + n
        self._m = tuple(sorted(counts.items()))
        self._others = frozenset(_check_member(x) for x in classical)
        self._hash = None

    @property
    def m_part(self) -> dict[str, int]:
        return dict(self._m)

    @property
    def classical_part(self) -> frozenset:
        return self._others

    def count(self, kind) -> int:
        """How many m-atoms of ``kind`` occur in this q-set."""
        return dict(self._m).get(_kind_id(kind), 0)

    def kinds(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self._m)

    @property
    def qcard(self) -> int:
        return sum(n for _, n in self._m) + len(self._others)

    def is_empty(self) -> bool:
        return not self._m and not self._others

    def contains(self, x) -> bool:
        """Whether some member of this q-set is indistinguishable from ``x``."""
        if isinstance(x, AtomKind) and x.is_m:
            return self.count(x) > 0
        return _check_member(x) in self._others

    # Structural equality coincides with indistinguishability in this model.
    def __eq__(self, other):
        if not isinstance(other, QSet):
            return NotImplemented
        return self._m == other._m and self._others == other._others

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._m, self._others))
        return self._hash

    def __repr__(self):
        parts = [f"{k}:{n}" for k, n in self._m]
        parts += sorted(repr(x) for x in self._others)
        return "{" + ", ".join(parts) + "}"

    # -- multiset algebra -------------------------------------------------

    def union(self, other: QSet) -> QSet:
        """Multiset union: per-kind maximum of counts, set union of the rest."""
        counts = dict(self._m)
        for k, n in other._m:
            counts[k] = max(counts.get(k, 0), n)
        return _make(counts, self._others | other._others)

    def plus(self, other: QSet) -> QSet:
        """Disjoint union: m-counts add.  Use when the operands share no atoms."""
        counts = dict(self._m)
        for k, n in other._m:
            counts[k] = counts.get(k, 0) + n
        return _make(counts, self._others | other._others)

    def minus(self, other: QSet) -> QSet:
        counts = dict(self._m)
        for k, n in other._m:
            counts[k] = max(counts.get(k, 0) - n, 0)
        return _make(counts, self._others - other._others)

    def intersection(self, other: QSet) -> QSet:
        mine = dict(self._m)
        counts = {k: min(mine[k], n) for k, n in other._m if k in mine}
        return _make(counts, self._others & other._others)

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        others = sorted(self._others, key=_member_sort_key)
        return {"m": dict(self._m), "classical": [_member_to_json(x) for x in others]}

    @classmethod
    def from_json(cls, data) -> QSet:
        if not isinstance(data, dict):
            raise ValueError(f"q-set JSON must be an object, got {type(data).__name__}")
        unknown = set(data) - {"m", "classical"}
        if unknown:
            raise ValueError(f"unknown q-set keys: {sorted(unknown)}")
        m = data.get("m", {})
        for k, n in m.items():
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ValueError(f"count for kind {k!r} must be a positive integer, got {n!r}")
        classical = [_member_from_json(x) for x in data.get("classical", [])]
        return _make(m, classical)


class PureQSet(QSet):
    """A finite q-set of indistinguishable m-atoms of a single kind."""

    __slots__ = ("kind",)

    def __init__(self, kind, qcard: int):
        super().__init__({kind: qcard})
        self.kind = _kind_id(kind)

    def __repr__(self):
        return f"PureQSet({self.kind!r}, {self.qcard})"


def _make(counts: Mapping, others: Iterable) -> QSet:
    others = frozenset(others)
    live = {k: n for k, n in counts.items() if n}
    if len(live) == 1 and not others:
        ((k, n),) = live.items()
        return PureQSet(k, n)
    return QSet(live, others)


def _member_sort_key(x):
    if isinstance(x, AtomKind):
        return (0, type(x.id).__name__, str(x.id))
    return (1, "", repr(x))


def _member_to_json(x):
    if isinstance(x, AtomKind):
        return x.id
    return x.to_json()


def _member_from_json(x):
    if isinstance(x, dict):
        return QSet.from_json(x)
    if isinstance(x, (str, int, float)) and not isinstance(x, bool):
        return M_atom(x)
    raise ValueError(f"invalid classical member {x!r}")


def qset(m: Mapping | None = None, classical: Iterable = ()) -> QSet:
    """Build a q-set, returning a :class:`PureQSet` when it is one."""
    q = QSet(m, classical)
    return _make(q.m_part, q.classical_part)


# ---------------------------------------------------------------------------
# kernel operations
# ---------------------------------------------------------------------------

Thing = Union[AtomKind, QSet]


def _as_thing(x) -> Thing:
    if isinstance(x, (AtomKind, QSet)):
        return x
    return _check_member(x)


def is_classical(q) -> bool:
    """True iff no m-atom occurs anywhere in the transitive closure of ``q``."""
    q = _as_thing(q)
    if isinstance(q, AtomKind):
        return not q.is_m
    if q._m:
        return False
    return all(is_classical(x) for x in q._others)


def indistinguishable(a, b) -> bool:
    a, b = _as_thing(a), _as_thing(b)
    if isinstance(a, AtomKind) and isinstance(b, AtomKind):
        return a.flavor == b.flavor and a.id == b.id
    if isinstance(a, QSet) and isinstance(b, QSet):
        return a == b
    return False


def identical(a, b) -> bool:
    """Identity of classical things.

    Raises :class:`IdentityUndefined` if either argument is an m-atom or a
    q-set with m-atoms in its transitive closure.
    """
    a, b = _as_thing(a), _as_thing(b)
    for x in (a, b):
        if not is_classical(x):
            raise IdentityUndefined(f"identity is not defined for {x!r}")
    return indistinguishable(a, b)


def qcard(q: QSet) -> int:
    return q.qcard


def weak_singleton(x, z: QSet) -> QSet:
    """``[x]_z``: the sub-q-set of ``z`` of everything indistinguishable from ``x``."""
    x = _as_thing(x)
    if isinstance(x, AtomKind) and x.is_m:
        n = z.count(x)
        if n == 0:
            raise NotAMember(f"no atom of kind {x.id!r} in {z!r}")
        return PureQSet(x.id, n)
    if x not in z.classical_part:
        raise NotAMember(f"nothing indistinguishable from {x!r} in {z!r}")
    return QSet(classical=[x])


def strong_singleton(kind, z: QSet) -> PureQSet:
    """``⟦x⟧_z`` for an m-atom: some single atom of ``kind`` from ``z``.

    Only the kind and the quasi-cardinal 1 are observable; there is no way
    to ask which atom it is.
    """
    k = _kind_id(kind)
    if z.count(k) == 0:
        raise NotAMember(f"no atom of kind {k!r} in {z!r}")
    return PureQSet(k, 1)


def weak_pair(x, y, z: QSet) -> QSet:
    """``[x, y]_z``: elements of ``z`` indistinguishable from ``x`` or from ``y``."""
    parts = []
    for item in (x, y):
        try:
            parts.append(weak_singleton(item, z))
        except NotAMember:
            pass
    if not parts:
        raise NotAMember(f"neither {x!r} nor {y!r} occurs in {z!r}")
    out = parts[0]
    for p in parts[1:]:
        out = out.union(p)
    return out


def weak_ordered_pair(x, y, z: QSet) -> QSet:
    """``⟨x, y⟩_z = [[x]_z, [x, y]_z]``, kept as the literal nested q-set.

    The outer collection holds the two inner q-sets as members; when they are
    indistinguishable they merge into one member.
    """
    first = weak_singleton(x, z)
    second = weak_pair(x, y, z)
    return QSet(classical=[first, second])


@dataclass(frozen=True)
class QuasiFunction:
    """A finite list of (argument, value) pairs, not yet validated."""

    pairs: tuple

    def __init__(self, pairs: Iterable):
        object.__setattr__(self, "pairs", tuple((_as_thing(u), _as_thing(v)) for u, v in pairs))

    def is_valid(self) -> bool:
        return validate_quasi_function(self)

    def image(self, arg):
        """The value attached to ``arg`` (any pair whose argument is ≡ ``arg``)."""
        arg = _as_thing(arg)
        for u, v in self.pairs:
            if indistinguishable(u, arg):
                return v
        return None


def validate_quasi_function(qf) -> bool:
    """Indistinguishable arguments must carry indistinguishable values."""
    pairs = qf.pairs if isinstance(qf, QuasiFunction) else [(_as_thing(u), _as_thing(v)) for u, v in qf]
    for i, (u, v) in enumerate(pairs):
        for w, z in pairs[i + 1 :]:
            if indistinguishable(u, w) and not indistinguishable(v, z):
                return False
    return True


def permutation_swap(x: QSet, kind, t: QSet) -> QSet:
    """Trade one ``kind``-atom of ``x`` for an indistinguishable one of ``t`` outside ``x``.

    Computes ``(x - ⟦z⟧_t) ∪ ⟦w⟧_t``.  ``t`` must hold more ``kind``-atoms
    than ``x`` so that an outside atom ``w`` exists.
    """
    k = _kind_id(kind)
    if x.count(k) == 0:
        raise PreconditionFailed(f"no atom of kind {k!r} in {x!r}")
    if t.count(k) <= x.count(k):
        raise PreconditionFailed(f"{t!r} holds no {k!r}-atom outside {x!r}")
    taken = strong_singleton(k, t)
    brought = strong_singleton(k, t)
    # `brought` lies outside the remainder, so the union is disjoint.
    return x.minus(taken).plus(brought)
