"""Fock space built from quasi-sets of indistinguishable atoms.

Submodules:

* :mod:`qspace.qset_kernel` - finite model of quasi-sets (m-atoms carry no identity)
* :mod:`qspace.statistics` - MB / BE / FD microstate counting
* :mod:`qspace.fock` - occupation vectors, inner products, ladder operators
* :mod:`qspace.labeled_oracle` - labelled tensor-product formalism, used as an oracle
* :mod:`qspace.cli` - the ``qspace`` command
"""

from .fock import (
    BOSON,
    FERMION,
    FockVector,
    Level,
    LevelBasis,
    OccupationMap,
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
from .qset_kernel import AtomKind, PureQSet, QSet, QuasiFunction, indistinguishable, identical, permutation_swap
from .statistics import StatisticsKind, count_microstates, enumerate_microstates, equiprobability_table, planck_weight

__version__ = "0.1.0"
