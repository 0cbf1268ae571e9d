from fractions import Fraction

import pytest

from qchev.cartan import build_cartan_datum
from qchev.errors import DomainError, NoIntertwinerError
from qchev.intertwiners import (admissible_expectations, expectation_value,
                                hom_dimension, intertwiner_from_expectation,
                                singular_vectors, verify_intertwiner)
from qchev.linalg import rank
from qchev.modules import irreducible, tensor
from qchev.scalars import ONE, ZERO

A1 = build_cartan_datum("A", 1)
A2 = build_cartan_datum("A", 2)

L0 = irreducible(A1, (0,))
L2 = irreducible(A1, (2,))
L4 = irreducible(A1, (4,))


def test_singular_vectors_highest_line():
    for L in (L2, L4, irreducible(A2, (1, 1))):
        assert len(singular_vectors(L, L.highest_weight)) == 1


def test_singular_vectors_tensor():
    T = tensor(L2, L2)
    assert len(singular_vectors(T, (2,))) == 1
    T0 = tensor(L0, L2)
    assert len(singular_vectors(T0, (0,))) == 0
    assert singular_vectors(T, (99,)) == []


def test_hom_dimension_table():
    # V = L_{2m}: zero iff mu < m, one otherwise
    for m in (1, 2):
        V = irreducible(A1, (2 * m,))
        for mu in range(0, 7):
            expected = 0 if mu < m else 1
            assert hom_dimension((mu,), V) == expected
    for mu in range(0, 4):
        assert hom_dimension((mu,), L0) == 1


def test_hom_dimension_requires_dominant():
    with pytest.raises(DomainError):
        hom_dimension((-1,), L2)


def test_zero_intertwiner():
    phi = intertwiner_from_expectation((3,), L2, [ZERO])
    assert phi.is_zero()
    assert expectation_value(phi) == [ZERO]
    assert verify_intertwiner(phi)


def test_expectation_round_trip():
    for mu in (1, 2, 3, 4):
        phi = intertwiner_from_expectation((mu,), L2, [ONE])
        assert expectation_value(phi) == [ONE]
        c = ONE + ONE + ONE
        phi3 = intertwiner_from_expectation((mu,), L2, [c])
        assert expectation_value(phi3) == [c]


def test_intertwiner_classical_limit_matches_recursion():
    # Phi(l_mu) = l_mu x v0 - (2/mu) F l_mu x v2 at q = 1
    for mu in (1, 2, 3, 5):
        phi = intertwiner_from_expectation((mu,), L2, [ONE])
        pos = phi.T.pair_index[((mu - 2,), 0, (2,), 0)][1]
        assert phi.vec[pos].evaluate("one", A1.q_exp) == Fraction(-2, mu)
        # no other components besides the two prescribed ones
        nonzero = [p for p, x in enumerate(phi.vec) if x]
        assert len(nonzero) == 2


def test_no_intertwiner_for_bad_value():
    # mu = 0, V = L2: E^{0+1} v0 = E v0 != 0
    with pytest.raises(NoIntertwinerError):
        intertwiner_from_expectation((0,), L2, [ONE])
    with pytest.raises(DomainError):
        intertwiner_from_expectation((2,), L2, [ONE, ONE])


def test_intertwiners_commute_with_action():
    for mu, V in (((3,), L2), ((2,), L4)):
        phi = intertwiner_from_expectation(mu, V, [ONE])
        assert verify_intertwiner(phi)


def test_intertwiners_rank_two():
    Vadj = irreducible(A2, (1, 1))
    mu = (1, 1)
    adm = admissible_expectations(mu, Vadj)
    assert len(adm) == hom_dimension(mu, Vadj)
    L = irreducible(A2, mu)
    T = tensor(L, Vadj)
    for v in adm:
        phi = intertwiner_from_expectation(mu, Vadj, v, L=L, T=T)
        assert expectation_value(phi) == v
        assert verify_intertwiner(phi)


def test_expectation_injective_on_computed_space():
    from qchev.intertwiners import Intertwiner

    Vadj = irreducible(A2, (1, 1))
    L = irreducible(A2, (2, 1))
    T = tensor(L, Vadj)
    sing = singular_vectors(T, (2, 1))
    assert sing
    rows = [Intertwiner(L, Vadj, T, svec).expectation() for svec in sing]
    assert rank(rows) == len(sing)
