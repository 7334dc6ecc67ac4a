"""Occupation-number vectors, the boson/fermion inner products and ladder operators.

A basis vector is an :class:`OccupationMap`: a finitely supported map from
level index to occupation count.  Because the expanded index word is always
emitted in ascending order, a basis vector never carries particle labels or a
particle order.  A :class:`FockVector` is a finite complex combination of
basis vectors.

The two inner products on basis vectors are the permutation sums

    boson:    f o g  = delta_nm * sum_p      prod_k delta(i_k, i'_{p k})
    fermion:  f . g  = delta_nm * sum_p sgn(p) prod_k delta(i_k, i'_{p k})

i.e. the permanent and determinant of the delta matrix of the two words.
They are evaluated exactly in integers and extended sesquilinearly,
conjugate-linear in the first argument.

Fermionic vectors are compared up to similarity: two vectors are similar when
they differ by a combination of null-norm vectors.  The null-norm basis
vectors are exactly those whose word repeats an index, so similarity reduces
to dropping those terms and comparing what is left.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache

from . import _kernels
from .qset_kernel import AtomKind, QSet, QuasiFunction, PureQSet, validate_quasi_function
from .statistics import StatisticsKind

BOSON = "boson"
FERMION = "fermion"

TOL = 1e-9
PRUNE = 1e-12


class FockError(Exception):
    pass


class InvalidOccupation(FockError, ValueError):
    pass


class UnknownLevel(FockError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown level"


class NegativeNorm(FockError, ArithmeticError):
    """A self inner product came out negative, which indicates a bug."""


class NullNormState(FockError, ValueError):
    pass


class NotPure(FockError, ValueError):
    pass


class InvalidQF(FockError, ValueError):
    pass


def particle_kind(kind) -> str:
    """Normalise ``boson``/``fermion``/``be``/``fd``/StatisticsKind to ``boson`` or ``fermion``."""
    if isinstance(kind, StatisticsKind):
        kind = kind.value
    k = str(kind).lower()
    if k in ("boson", "bosons", "be", "b"):
        return BOSON
    if k in ("fermion", "fermions", "fd", "f"):
        return FERMION
    raise ValueError(f"kind must be boson or fermion, got {kind!r}")


# ---------------------------------------------------------------------------
# levels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Level:
    index: int
    value: float


class LevelBasis:
    """Ordered eigenvalue levels; values strictly increase with index."""

    def __init__(self, levels: Iterable[Level]):
        levels = tuple(sorted(levels, key=lambda lv: lv.index))
        for a, b in zip(levels, levels[1:]):
            if a.index == b.index:
                raise ValueError(f"duplicate level index {a.index}")
            if not a.value < b.value:
                raise ValueError(f"level values must increase with index: {a} then {b}")
        for lv in levels:
            if lv.index < 0 or not math.isfinite(lv.value):
                raise ValueError(f"invalid level {lv}")
        self.levels = levels
        self._by_index = {lv.index: lv for lv in levels}
        self._by_value = {lv.value: lv for lv in levels}

    @classmethod
    def uniform(cls, n: int, start: int = 1) -> LevelBasis:
        """Levels ``start .. start+n-1`` with value equal to index."""
        return cls(Level(i, float(i)) for i in range(start, start + n))

    @classmethod
    def from_values(cls, values: Iterable[float], start: int = 1) -> LevelBasis:
        values = sorted(set(float(v) for v in values))
        return cls(Level(start + k, v) for k, v in enumerate(values))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(lv.index for lv in self.levels)

    def __len__(self):
        return len(self.levels)

    def __contains__(self, index) -> bool:
        return index in self._by_index

    def __iter__(self):
        return iter(self.levels)

    def index_of_value(self, value: float) -> int:
        try:
            return self._by_value[float(value)].index
        except KeyError:
            raise UnknownLevel(f"no level with eigenvalue {value!r}") from None

    def check(self, index: int) -> int:
        if index not in self._by_index:
            raise UnknownLevel(f"level {index!r} is not in the basis {list(self.indices)}")
        return index

    def __repr__(self):
        return f"LevelBasis({list(self.levels)!r})"


# ---------------------------------------------------------------------------
# occupation maps
# ---------------------------------------------------------------------------


def _valid_index(i) -> bool:
    return isinstance(i, int) and not isinstance(i, bool) and i >= 0


class OccupationMap(Mapping):
    """Immutable finite-support map ``level index -> occupation >= 1``."""

    __slots__ = ("_items", "_hash")

    def __init__(self, counts: Mapping | Iterable = ()):
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        merged: dict[int, int] = {}
        for i, n in pairs:
            if not _valid_index(i):
                raise InvalidOccupation(f"level index must be a non-negative integer, got {i!r}")
            if isinstance(n, bool) or not isinstance(n, int) or n <= 0:
                raise InvalidOccupation(f"occupation of level {i} must be a positive integer, got {n!r}")
            merged[i] = merged.get(i, 0) + n
        self._items = tuple(sorted(merged.items()))
        self._hash = hash(self._items)

    @classmethod
    def from_word(cls, word: Iterable[int]) -> OccupationMap:
        counts: dict[int, int] = {}
        for i in word:
            counts[i] = counts.get(i, 0) + 1
        return cls(counts)

    def word(self) -> tuple[int, ...]:
        """Expanded index word, ascending: {1: 2, 3: 1} -> (1, 1, 3)."""
        return tuple(i for i, n in self._items for _ in range(n))

    @property
    def size(self) -> int:
        return sum(n for _, n in self._items)

    def has_repeats(self) -> bool:
        return any(n > 1 for _, n in self._items)

    def with_count(self, index: int, n: int) -> OccupationMap:
        d = dict(self._items)
        if n:
            d[index] = n
        else:
            d.pop(index, None)
        return OccupationMap(d)

    def __getitem__(self, index):
        for i, n in self._items:
            if i == index:
                return n
        raise KeyError(index)

    def get(self, index, default=0):
        for i, n in self._items:
            if i == index:
                return n
        return default

    def __iter__(self):
        return (i for i, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, OccupationMap):
            return self._items == other._items
        return Mapping.__eq__(self, other)

    def __lt__(self, other):
        return _term_key(self) < _term_key(other)

    def __repr__(self):
        return "|" + " ".join(map(str, self.word())) + ")" if self._items else "|0)"

    def to_json(self) -> dict:
        return {str(i): n for i, n in self._items}

    @classmethod
    def from_json(cls, data) -> OccupationMap:
        if not isinstance(data, dict):
            raise InvalidOccupation(f"occupation JSON must be an object, got {data!r}")
        try:
            return cls({int(k): n for k, n in data.items()})
        except ValueError as exc:
            if isinstance(exc, InvalidOccupation):
                raise
            raise InvalidOccupation(f"bad level key in {data!r}") from None


VACUUM = OccupationMap()


def _term_key(occ: OccupationMap):
    return (occ.size, occ.word())


def _as_occ(occ) -> OccupationMap:
    return occ if isinstance(occ, OccupationMap) else OccupationMap(occ)


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


class FockVector:
    """A finite complex combination of occupation maps, zero terms pruned."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[OccupationMap, complex] = {}
        for occ, c in pairs:
            occ = _as_occ(occ)
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"non-finite coefficient {c!r} for {occ!r}")
            acc[occ] = acc.get(occ, 0j) + c
        self._terms = {o: c for o, c in acc.items() if abs(c) > PRUNE}

    @classmethod
    def zero(cls) -> FockVector:
        return cls()

    @classmethod
    def vacuum(cls) -> FockVector:
        return cls({VACUUM: 1})

    @property
    def terms(self) -> dict[OccupationMap, complex]:
        return dict(self._terms)

    def items(self):
        """Terms in deterministic order: by particle number, then word."""
        return sorted(self._terms.items(), key=lambda t: _term_key(t[0]))

    def coefficient(self, occ) -> complex:
        return self._terms.get(_as_occ(occ), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __len__(self):
        return len(self._terms)

    def __add__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, lam):
        if isinstance(lam, FockVector):
            return NotImplemented
        return scale(lam, self)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def allclose(self, other: FockVector, tol: float = TOL) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({_fmt_complex(c)}){occ!r}" for occ, c in self.items())


def _fmt_complex(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:g}"
    return f"{c.real:g}{c.imag:+g}j"


def basis_ket(occ) -> FockVector:
    """The basis vector of ``occ`` with coefficient 1."""
    return FockVector({_as_occ(occ): 1})


def add(v: FockVector, w: FockVector) -> FockVector:
    return FockVector(list(v._terms.items()) + list(w._terms.items()))


def scale(lam, v: FockVector) -> FockVector:
    lam = complex(lam)
    return FockVector((o, lam * c) for o, c in v._terms.items())


# ---------------------------------------------------------------------------
# fermionic words
# ---------------------------------------------------------------------------


class NullNorm:
    """Marker for a fermionic word that repeats an index."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "|nn)"


NULL_NORM = NullNorm()


def _inversions(word) -> int:
    return sum(1 for a in range(len(word)) for b in range(a + 1, len(word)) if word[a] > word[b])


def canonical_fermion_word(word: Iterable[int]):
    """Sort a fermionic index word.

    Returns ``(sign, OccupationMap)`` with ``sign`` the parity of the sorting
    permutation, or :data:`NULL_NORM` if an index repeats.
    """
    word = tuple(word)
    if len(set(word)) != len(word):
        return NULL_NORM
    sign = -1 if _inversions(word) % 2 else 1
    return sign, OccupationMap.from_word(word)


def ket(kind, word: Iterable[int]) -> FockVector:
    """``|i1 i2 ... in)`` for a word given in any order.

    Bosons ignore the order.  Fermions pick up the sign of the sorting
    permutation; a repeated index gives the (null-norm) repeated basis vector.
    """
    word = tuple(word)
    occ = OccupationMap.from_word(word)
    if particle_kind(kind) == BOSON:
        return basis_ket(occ)
    canon = canonical_fermion_word(word)
    if canon is NULL_NORM:
        return basis_ket(occ)
    sign, occ = canon
    return FockVector({occ: sign})


def fermion_canonical(v: FockVector) -> FockVector:
    """Drop null-norm terms: the representative used for similarity."""
    return FockVector((o, c) for o, c in v._terms.items() if not o.has_repeats())


def similar(v: FockVector, w: FockVector, tol: float = TOL) -> bool:
    """Fermionic similarity: ``v - w`` is a combination of null-norm vectors."""
    return fermion_canonical(v - w).max_abs() <= tol


# ---------------------------------------------------------------------------
# inner products
# ---------------------------------------------------------------------------


@lru_cache(maxsize=65536)
def _basis_inner(kind: str, f: OccupationMap, g: OccupationMap) -> int:
    if f.size != g.size:
        return 0
    m = _kernels.delta_matrix(f.word(), g.word())
    if kind == BOSON:
        return _kernels.permanent(m)
    return _kernels.determinant(m)


def basis_inner(kind, f, g) -> int:
    """Exact integer inner product of two basis vectors."""
    return _basis_inner(particle_kind(kind), _as_occ(f), _as_occ(g))


def inner(kind, v: FockVector, w: FockVector) -> complex:
    """Sesquilinear extension of the basis inner product; conjugate-linear in ``v``."""
    kind = particle_kind(kind)
    total = 0j
    for f, a in v._terms.items():
        for g, b in w._terms.items():
            if f.size != g.size:
                continue
            ip = _basis_inner(kind, f, g)
            if ip:
                total += a.conjugate() * b * ip
    return total


def norm(kind, v: FockVector) -> float:
    r = inner(kind, v, v).real
    if r < -TOL:
        raise NegativeNorm(f"self inner product {r!r} < 0 for {v!r}")
    return math.sqrt(max(r, 0.0))


def is_null_norm(kind, v: FockVector, tol: float = TOL) -> bool:
    if len(v) == 1:
        ((occ, _),) = v._terms.items()
        return _basis_inner(particle_kind(kind), occ, occ) == 0
    return abs(inner(kind, v, v)) <= tol


def normalized_ket(kind, occ) -> FockVector:
    occ = _as_occ(occ)
    ip = basis_inner(kind, occ, occ)
    if ip == 0:
        raise NullNormState(f"{occ!r} has null norm for {particle_kind(kind)}s")
    return FockVector({occ: 1 / math.sqrt(ip)})


# ---------------------------------------------------------------------------
# ladder operators
# ---------------------------------------------------------------------------


def _check_level(alpha, basis):
    if basis is not None:
        return basis.check(alpha)
    if not _valid_index(alpha):
        raise UnknownLevel(f"level must be a non-negative integer, got {alpha!r}")
    return alpha


def _jw_sign(occ: OccupationMap, alpha: int) -> int:
    below = sum(n for i, n in occ.items() if i < alpha)
    return -1 if below % 2 else 1


def create(kind, alpha: int, v: FockVector, basis: LevelBasis | None = None) -> FockVector:
    """Apply the creation operator for level ``alpha``.

    Bosons: ``sqrt(n+1)`` times the raised term.  Fermions: prepend ``alpha``
    to the word and sort; an already occupied ``alpha`` yields the raw
    repeated (null-norm) term, which similarity discards.
    """
    kind = particle_kind(kind)
    alpha = _check_level(alpha, basis)
    out = []
    for occ, c in v._terms.items():
        n = occ.get(alpha)
        raised = occ.with_count(alpha, n + 1)
        if kind == BOSON:
            out.append((raised, c * math.sqrt(n + 1)))
        elif n or occ.has_repeats():
            out.append((raised, c * _jw_sign(occ, alpha)))
        else:
            sign, canon = canonical_fermion_word((alpha,) + occ.word())
            out.append((canon, c * sign))
    return FockVector(out)


def annihilate(kind, alpha: int, v: FockVector, basis: LevelBasis | None = None) -> FockVector:
    """Apply the annihilation operator for level ``alpha``.

    Bosons: ``sqrt(n)`` times the lowered term.  Fermions: an empty ``alpha``
    gives nothing; an occupied one is moved to the front of the word with the
    sorting sign and removed.  Null-norm input terms only ever map to
    null-norm output terms.
    """
    kind = particle_kind(kind)
    alpha = _check_level(alpha, basis)
    out = []
    for occ, c in v._terms.items():
        n = occ.get(alpha)
        if n == 0:
            continue
        lowered = occ.with_count(alpha, n - 1)
        if kind == BOSON:
            out.append((lowered, c * math.sqrt(n)))
        elif occ.has_repeats():
            if lowered.has_repeats():
                out.append((lowered, c * _jw_sign(lowered, alpha)))
        else:
            sign, canon = canonical_fermion_word((alpha,) + lowered.word())
            assert canon == occ
            out.append((lowered, c * sign))
    return FockVector(out)


def number(kind, alpha: int, v: FockVector, basis: LevelBasis | None = None) -> FockVector:
    """``a_alpha^dagger a_alpha v``."""
    return create(kind, alpha, annihilate(kind, alpha, v, basis), basis)


RELATIONS = ("mixed", "annihilate", "create")


def commutator_residual(kind, alpha: int, beta: int, v: FockVector, relation: str = "mixed",
                        basis: LevelBasis | None = None) -> FockVector:
    """Residual of a canonical (anti)commutation relation applied to ``v``.

    ``relation`` selects which one:

    * ``"mixed"``: ``[a_alpha, a_beta^dagger] - delta I`` for bosons,
      ``{C_alpha, C_beta^dagger} - delta I`` for fermions;
    * ``"annihilate"``: ``[a_alpha, a_beta]`` / ``{C_alpha, C_beta}``;
    * ``"create"``: ``[a_alpha^dagger, a_beta^dagger]`` / ``{C_alpha^dagger, C_beta^dagger}``.

    The result should be the zero vector.  Fermionic residuals are returned in
    canonical form (null-norm terms dropped).
    """
    kind = particle_kind(kind)
    ops = {
        "mixed": (annihilate, create),
        "annihilate": (annihilate, annihilate),
        "create": (create, create),
    }
    if relation not in ops:
        raise ValueError(f"relation must be one of {RELATIONS}, got {relation!r}")
    first, second = ops[relation]
    ab = first(kind, alpha, second(kind, beta, v, basis), basis)
    ba = second(kind, beta, first(kind, alpha, v, basis), basis)
    if kind == BOSON:
        res = ab - ba
    else:
        res = ab + ba
    if relation == "mixed" and alpha == beta:
        res = res - v
    return fermion_canonical(res) if kind == FERMION else res


def number_residual(kind, alpha: int, v: FockVector, basis: LevelBasis | None = None) -> FockVector:
    """``a^dagger a v - n_alpha v`` term by term; zero when the number identity holds."""
    expected = FockVector((o, c * o.get(alpha)) for o, c in v._terms.items())
    res = number(kind, alpha, v, basis) - expected
    return fermion_canonical(res) if particle_kind(kind) == FERMION else res


# ---------------------------------------------------------------------------
# occupation quasi-functions
# ---------------------------------------------------------------------------


def _arg_value(arg) -> float:
    if isinstance(arg, Level):
        return arg.value
    if isinstance(arg, AtomKind) and not arg.is_m and isinstance(arg.id, (int, float)):
        return float(arg.id)
    raise InvalidQF(f"quasi-function argument {arg!r} is not an eigenvalue")


def from_quasi_function(f: QuasiFunction, basis: LevelBasis) -> OccupationMap:
    """Occupation numbers of a quasi-function from eigenvalues to pure q-sets.

    Level ``i`` gets the quasi-cardinal of the image of its eigenvalue.
    """
    if not isinstance(f, QuasiFunction):
        f = QuasiFunction(f)
    if not validate_quasi_function(f):
        raise InvalidQF("indistinguishable arguments are sent to distinguishable images")
    counts: dict[int, int] = {}
    for arg, image in f.pairs:
        if not isinstance(image, QSet):
            raise NotPure(f"image {image!r} is not a q-set")
        if image.classical_part or len(image.kinds()) > 1:
            raise NotPure(f"image {image!r} is not a pure q-set")
        idx = basis.index_of_value(_arg_value(arg))
        if image.qcard:
            counts[idx] = image.qcard
    return OccupationMap(counts)


def occupation_quasi_function(occ, basis: LevelBasis, kind: str = "particle") -> QuasiFunction:
    """Inverse direction: each level's eigenvalue goes to a pure q-set of size ``occ[i]``."""
    occ = _as_occ(occ)
    for i in occ:
        basis.check(i)
    return QuasiFunction((AtomKind(lv.value, "M"), PureQSet(kind, occ.get(lv.index))) for lv in basis)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def vector_to_json(kind, v: FockVector) -> dict:
    return {
        "kind": particle_kind(kind),
        "terms": [{"coeff": [c.real, c.imag], "occ": occ.to_json()} for occ, c in v.items()],
    }


def vector_from_json(data) -> tuple[str, FockVector]:
    if not isinstance(data, dict) or "terms" not in data:
        raise ValueError("Fock vector JSON needs a 'terms' list")
    kind = particle_kind(data.get("kind", BOSON))
    terms = []
    for t in data["terms"]:
        re, im = t["coeff"]
        terms.append((OccupationMap.from_json(t["occ"]), complex(float(re), float(im))))
    return kind, FockVector(terms)


def dumps_vector(kind, v: FockVector) -> str:
    return json.dumps(vector_to_json(kind, v))
