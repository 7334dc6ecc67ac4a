import itertools
import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qspace import fock
from qspace.fock import (
    BOSON,
    FERMION,
    NULL_NORM,
    FockVector,
    InvalidOccupation,
    InvalidQF,
    Level,
    LevelBasis,
    NotPure,
    NullNormState,
    OccupationMap,
    UnknownLevel,
    annihilate,
    basis_ket,
    canonical_fermion_word,
    commutator_residual,
    create,
    from_quasi_function,
    inner,
    is_null_norm,
    ket,
    norm,
    normalized_ket,
    similar,
)
from qspace.labeled_oracle import oracle_inner
from qspace.qset_kernel import PureQSet, QSet, QuasiFunction, M_atom, permutation_swap

occ_maps = st.lists(st.integers(1, 3), max_size=3).map(OccupationMap.from_word)
coeffs = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
vectors = st.dictionaries(occ_maps, coeffs, max_size=4).map(FockVector)
kinds = st.sampled_from([BOSON, FERMION])


def close(a, b, scale=1.0):
    return abs(a - b) <= 1e-12 * max(1.0, scale)


# -- occupation maps and vectors -----------------------------------------


def test_occupation_map_basics():
    occ = OccupationMap({3: 1, 1: 2})
    assert occ.word() == (1, 1, 3)
    assert occ == OccupationMap.from_word([3, 1, 1]) == {1: 2, 3: 1}
    assert occ.size == 3 and occ.get(2) == 0 and occ[1] == 2
    assert occ.with_count(1, 0) == OccupationMap({3: 1})
    assert repr(OccupationMap()) == "|0)"


@pytest.mark.parametrize("bad", [{1: 0}, {1: -1}, {-1: 1}, {1: 1.5}])
def test_invalid_occupation(bad):
    with pytest.raises(InvalidOccupation):
        basis_ket(bad)


def test_basis_ket_examples():
    assert basis_ket({1: 2}).terms == {OccupationMap({1: 2}): 1}
    assert basis_ket({}) == FockVector.vacuum()
    v = basis_ket({1: 1, 3: 2})
    assert len(v) == 1 and v.coefficient({1: 1, 3: 2}) == 1


def test_vector_space_examples():
    f = basis_ket({1: 2})
    assert fock.add(f, FockVector.zero()) == f
    assert fock.scale(0, f).is_zero()
    assert fock.add(f, fock.scale(-1, f)).is_zero()
    g = 2 * f + (1j) * basis_ket({2: 1})
    assert g.coefficient({1: 2}) == 2 and g.coefficient({2: 1}) == 1j


def test_non_finite_coefficients_rejected():
    with pytest.raises(ValueError):
        FockVector({OccupationMap(): float("nan")})


@given(vectors)
def test_zero_is_additive_identity(v):
    assert v + FockVector.zero() == v


# -- inner products ------------------------------------------------------


def test_boson_inner_examples():
    # by hand: two permutations, each contributing delta(1,1) delta(1,1) = 1
    assert inner(BOSON, basis_ket({1: 2}), basis_ket({1: 2})) == 2
    assert inner(BOSON, basis_ket({1: 1, 2: 1}), basis_ket({1: 1, 2: 1})) == 1
    assert inner(BOSON, basis_ket({1: 1}), basis_ket({2: 1})) == 0


def test_fermion_inner_examples():
    # +1 - 1 = 0
    assert inner(FERMION, basis_ket({1: 2}), basis_ket({1: 2})) == 0
    assert inner(FERMION, basis_ket({1: 1, 2: 1}), basis_ket({1: 1, 2: 1})) == 1


def test_different_particle_numbers_are_orthogonal():
    for kind in (BOSON, FERMION):
        assert fock.basis_inner(kind, {1: 1}, {1: 1, 2: 1}) == 0
        assert fock.basis_inner(kind, {}, {}) == 1


@given(occ_maps, occ_maps)
def test_basis_inner_matches_oracle(f, g):
    for kind in (BOSON, FERMION):
        assert fock.basis_inner(kind, f, g) == oracle_inner(kind, f, g)


@given(st.dictionaries(st.integers(0, 5), st.integers(1, 4), max_size=3))
def test_boson_self_inner_is_product_of_factorials(counts):
    occ = OccupationMap(counts)
    assert fock.basis_inner(BOSON, occ, occ) == math.prod(math.factorial(n) for n in counts.values())


@given(kinds, vectors, vectors, vectors, coeffs)
def test_sesquilinearity(kind, u, v, w, lam):
    scale = (1 + u.max_abs() + v.max_abs()) * (1 + w.max_abs()) * 100
    assert close(inner(kind, u + v, w), inner(kind, u, w) + inner(kind, v, w), scale)
    assert close(inner(kind, w, u + v), inner(kind, w, u) + inner(kind, w, v), scale)
    assert close(inner(kind, lam * v, w), lam.conjugate() * inner(kind, v, w), scale * (1 + abs(lam)))
    assert close(inner(kind, w, lam * v), lam * inner(kind, w, v), scale * (1 + abs(lam)))


@given(kinds, vectors, vectors)
def test_hermitian_symmetry(kind, v, w):
    assert close(inner(kind, v, w), inner(kind, w, v).conjugate(), 100 * (1 + v.max_abs()) * (1 + w.max_abs()))


@given(kinds, vectors)
def test_self_inner_nonnegative(kind, v):
    ip = inner(kind, v, v)
    assert ip.real >= -1e-9 and abs(ip.imag) <= 1e-9 * (1 + abs(ip))


# -- norms ---------------------------------------------------------------


def test_norm_examples():
    assert is_null_norm(FERMION, basis_ket({1: 2}))
    assert norm(BOSON, basis_ket({1: 2})) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert norm(BOSON, FockVector.vacuum()) == 1
    assert norm(FERMION, FockVector.vacuum()) == 1
    assert not is_null_norm(BOSON, basis_ket({1: 2}))


def test_null_norm_combination():
    v = ket(FERMION, [1, 2]) + ket(FERMION, [2, 1]) + basis_ket({3: 2})
    assert is_null_norm(FERMION, v)


def test_normalized_ket_examples():
    v = normalized_ket(BOSON, {1: 2})
    assert v.coefficient({1: 2}) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert normalized_ket(BOSON, {1: 1, 2: 1}).coefficient({1: 1, 2: 1}) == 1
    assert norm(BOSON, normalized_ket(BOSON, {1: 3, 2: 2})) == pytest.approx(1, abs=1e-12)
    with pytest.raises(NullNormState):
        normalized_ket(FERMION, {1: 2})


# -- fermionic words and similarity --------------------------------------


def test_canonical_fermion_word_examples():
    assert canonical_fermion_word((2, 1)) == (-1, OccupationMap({1: 1, 2: 1}))
    assert canonical_fermion_word((1, 2, 3)) == (1, OccupationMap({1: 1, 2: 1, 3: 1}))
    assert canonical_fermion_word((1, 1)) is NULL_NORM
    assert canonical_fermion_word(()) == (1, OccupationMap())


@pytest.mark.parametrize("word", list(itertools.permutations([1, 2, 3, 4])))
def test_canonical_sign_matches_determinant(word):
    # the sign of a reordered word equals det of its delta matrix against the sorted word
    sign, occ = canonical_fermion_word(word)
    m = np.equal.outer(np.array(word), np.array(occ.word())).astype(float)
    assert sign == round(np.linalg.det(m))


def test_similarity_examples():
    ab, ba = ket(FERMION, [1, 2]), ket(FERMION, [2, 1])
    assert similar(ab + ba, FockVector.zero())
    assert similar(ab, -1 * ba)
    assert not similar(ab, ket(FERMION, [1, 3]))
    assert similar(basis_ket({1: 2}), FockVector.zero())


# -- ladder operators ----------------------------------------------------


def test_boson_ladder_examples():
    assert create(BOSON, 1, FockVector.vacuum()) == basis_ket({1: 1})
    out = create(BOSON, 1, basis_ket({1: 1}))
    assert out.coefficient({1: 2}) == pytest.approx(math.sqrt(2), abs=1e-15) and len(out) == 1
    assert annihilate(BOSON, 1, FockVector.vacuum()).is_zero()
    out = annihilate(BOSON, 1, basis_ket({1: 2}))
    assert out.coefficient({1: 1}) == pytest.approx(math.sqrt(2), abs=1e-15) and len(out) == 1


def test_fermion_ladder_examples():
    out = create(FERMION, 1, basis_ket({1: 1}))
    assert similar(out, FockVector.zero())
    assert is_null_norm(FERMION, out)
    assert annihilate(FERMION, 1, basis_ket({1: 1})) == FockVector.vacuum()
    assert annihilate(FERMION, 1, FockVector.vacuum()).is_zero()
    assert annihilate(FERMION, 2, basis_ket({1: 1})).is_zero()
    # C_2^dagger |1) = |2 1) = -|1 2)
    assert create(FERMION, 2, basis_ket({1: 1})) == -1 * basis_ket({1: 1, 2: 1})
    assert create(FERMION, 1, basis_ket({2: 1})) == basis_ket({1: 1, 2: 1})


def test_unknown_level():
    basis = LevelBasis.uniform(3)
    with pytest.raises(UnknownLevel):
        create(BOSON, 7, FockVector.vacuum(), basis=basis)
    with pytest.raises(UnknownLevel):
        annihilate(FERMION, -1, FockVector.vacuum())


def _jw_operators(n_modes):
    """Jordan-Wigner creation matrices; mode 0 is the most significant bit."""
    I, Z = np.eye(2), np.diag([1.0, -1.0])
    up = np.array([[0.0, 0.0], [1.0, 0.0]])  # |0> -> |1>
    ops = []
    for j in range(n_modes):
        factors = [Z] * j + [up] + [I] * (n_modes - j - 1)
        ops.append(reduce(np.kron, factors))
    return ops


def _to_dense(v, levels):
    out = np.zeros(2 ** len(levels), dtype=complex)
    for occ, c in fock.fermion_canonical(v).terms.items():
        idx = 0
        for i in levels:
            idx = 2 * idx + occ.get(i)
        out[idx] += c
    return out


def test_fermion_operators_match_jordan_wigner_matrices():
    levels = [1, 2, 3, 4]
    cdag = _jw_operators(len(levels))
    for bits in itertools.product((0, 1), repeat=len(levels)):
        occ = OccupationMap({i: 1 for i, b in zip(levels, bits) if b})
        v = basis_ket(occ)
        dense = _to_dense(v, levels)
        for j, alpha in enumerate(levels):
            np.testing.assert_allclose(_to_dense(create(FERMION, alpha, v), levels), cdag[j] @ dense, atol=1e-12)
            np.testing.assert_allclose(_to_dense(annihilate(FERMION, alpha, v), levels), cdag[j].T @ dense, atol=1e-12)


def test_fermion_operators_preserve_null_subspace():
    for occ in [{1: 2}, {1: 2, 2: 1}, {1: 3}, {1: 1, 2: 2}]:
        v = basis_ket(occ)
        for alpha in (1, 2, 3):
            for op in (create, annihilate):
                assert similar(op(FERMION, alpha, v), FockVector.zero())


@pytest.mark.parametrize("n", range(0, 5))
def test_boson_commutator_examples(n):
    v = basis_ket({1: n, 2: 1} if n else {2: 1})
    assert commutator_residual(BOSON, 1, 1, v).max_abs() < 1e-9
    assert commutator_residual(BOSON, 1, 2, v).max_abs() < 1e-9


@settings(max_examples=50)
@given(vectors, st.integers(1, 3), st.integers(1, 3))
def test_boson_commutators_on_random_vectors(v, a, b):
    for rel in fock.RELATIONS:
        assert commutator_residual(BOSON, a, b, v, rel).max_abs() <= 1e-9 * (1 + v.max_abs())


def test_fermion_anticommutator_examples():
    v = basis_ket({1: 1, 3: 1})
    assert commutator_residual(FERMION, 1, 1, v).is_zero()
    assert commutator_residual(FERMION, 2, 2, v).is_zero()
    assert commutator_residual(FERMION, 1, 2, v).is_zero()
    assert commutator_residual(FERMION, 1, 3, v, "annihilate").is_zero()
    assert commutator_residual(FERMION, 2, 4, v, "create").is_zero()


def test_raw_anticommutator_with_null_terms_is_similar_to_zero():
    # {C_1^dagger, C_1^dagger} leaves raw null-norm terms that similarity discards
    v = basis_ket({2: 1})
    raw = create(FERMION, 1, create(FERMION, 1, v))
    assert not raw.is_zero() and similar(raw, FockVector.zero())


def test_number_operator():
    v = basis_ket({1: 3, 2: 1})
    assert fock.number(BOSON, 1, v).allclose(3 * v)
    assert fock.number_residual(BOSON, 2, v).max_abs() < 1e-9


def test_bad_relation():
    with pytest.raises(ValueError):
        commutator_residual(BOSON, 1, 1, FockVector.vacuum(), "sideways")


# -- levels and quasi-functions -------------------------------------------


def test_level_basis_invariants():
    with pytest.raises(ValueError):
        LevelBasis([Level(1, 2.0), Level(2, 1.0)])
    with pytest.raises(ValueError):
        LevelBasis([Level(1, 1.0), Level(1, 2.0)])
    b = LevelBasis.from_values([2.5, -1.0, 0.5])
    assert b.indices == (1, 2, 3) and b.index_of_value(2.5) == 3
    with pytest.raises(UnknownLevel):
        b.index_of_value(9.0)


EPS = LevelBasis.from_values([-0.5, 0.25, 1.0])


def _qf(images):
    return QuasiFunction((M_atom(lv.value), img) for lv, img in zip(EPS, images))


def test_from_quasi_function_examples():
    f = _qf([PureQSet("e", 3), PureQSet("e", 1), PureQSet("e", 1)])
    assert from_quasi_function(f, EPS) == OccupationMap({1: 3, 2: 1, 3: 1})
    assert from_quasi_function(_qf([QSet(), QSet(), QSet()]), EPS) == OccupationMap()


def test_from_quasi_function_after_kernel_permutation():
    x, y = PureQSet("e", 3), PureQSet("e", 1)
    f = _qf([x, y, PureQSet("e", 1)])
    x2 = permutation_swap(x, "e", x.plus(y))
    y2 = permutation_swap(y, "e", x.plus(y))
    assert from_quasi_function(_qf([x2, y2, PureQSet("e", 1)]), EPS) == from_quasi_function(f, EPS)


def test_from_quasi_function_errors():
    with pytest.raises(NotPure):
        from_quasi_function(_qf([QSet({"e": 1, "p": 1}), QSet(), QSet()]), EPS)
    with pytest.raises(NotPure):
        from_quasi_function(_qf([QSet(classical=[1]), QSet(), QSet()]), EPS)
    bad = QuasiFunction([(M_atom(-0.5), PureQSet("e", 1)), (M_atom(-0.5), PureQSet("e", 2))])
    with pytest.raises(InvalidQF):
        from_quasi_function(bad, EPS)
    with pytest.raises(UnknownLevel):
        from_quasi_function(QuasiFunction([(M_atom(3.0), PureQSet("e", 1))]), EPS)


def test_occupation_quasi_function_round_trip():
    occ = OccupationMap({1: 2, 3: 1})
    assert from_quasi_function(fock.occupation_quasi_function(occ, EPS, "e"), EPS) == occ


# -- JSON ----------------------------------------------------------------


@given(kinds, vectors)
def test_vector_json_round_trip(kind, v):
    text = fock.dumps_vector(kind, v)
    k2, v2 = fock.vector_from_json(__import__("json").loads(text))
    assert k2 == kind and v2 == v
    assert fock.dumps_vector(k2, v2) == text


def test_vector_json_shape():
    data = fock.vector_to_json(FERMION, basis_ket({1: 1, 10: 1}) * 2j)
    assert data == {"kind": "fermion", "terms": [{"coeff": [0.0, 2.0], "occ": {"1": 1, "10": 1}}]}
