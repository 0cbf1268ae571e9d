import itertools
import random
from fractions import Fraction

import pytest

from qchev.cartan import (WeylElement, build_cartan_datum, datum_from_name,
                          dominant_representative, longest_element,
                          rank_one_datum, weyl_group)
from qchev.errors import ConfigurationError


A1 = build_cartan_datum("A", 1)
A2 = build_cartan_datum("A", 2)
B2 = build_cartan_datum("B", 2)
G2 = build_cartan_datum("G", 2)


def test_datum_a1():
    assert A1.matrix == ((2,),)
    assert A1.d == (1,)
    assert A1.pairing_denominator == 2
    assert A1.q_exp == 4


def test_datum_a2():
    assert A2.matrix == ((2, -1), (-1, 2))
    assert A2.d == (1, 1)
    assert A2.pairing_denominator == 3


def test_datum_b2_symmetrizers():
    assert B2.d == (2, 1)
    # brute-force the minimal symmetrizers over {1,2,3}^2
    candidates = []
    for d in itertools.product((1, 2, 3), repeat=2):
        if all(d[i] * B2.matrix[i][j] == d[j] * B2.matrix[j][i]
               for i in range(2) for j in range(2)):
            candidates.append(d)
    assert min(candidates, key=sum) == B2.d


def test_unknown_type_rejected():
    with pytest.raises(ConfigurationError):
        build_cartan_datum("E", 8)
    with pytest.raises(ConfigurationError):
        build_cartan_datum("A", 9)
    with pytest.raises(ConfigurationError):
        datum_from_name("Z3")


def test_datum_from_name():
    assert datum_from_name("B2") == B2
    assert datum_from_name("G2").d == (1, 3)


def test_pairing_a1():
    alpha = A1.simple_root(0)
    assert A1.pairing(alpha, alpha) == 2
    omega = (1,)
    # invert the symmetrized Cartan matrix by hand: (2)^-1 * d = 1/2
    assert A1.pairing(omega, omega) == Fraction(1, 2)
    assert A1.pairing((5,), (0,)) == 0


def test_pairing_simple_roots():
    for datum in (A2, B2, G2):
        r = datum.rank
        for i in range(r):
            for j in range(r):
                ai, aj = datum.simple_root(i), datum.simple_root(j)
                assert datum.pairing(ai, aj) == datum.d[i] * datum.matrix[i][j]


def test_weyl_group_sizes():
    assert len(weyl_group(A1)) == 2
    w_a2 = weyl_group(A2)
    assert len(w_a2) == 6
    assert longest_element(A2).length == 3
    assert len(weyl_group(B2)) == 8
    assert len(weyl_group(G2)) == 12
    assert len(weyl_group(build_cartan_datum("A", 3))) == 24


def test_weyl_group_closed():
    elems = weyl_group(B2)
    mats = {w.matrix for w in elems}
    for a in elems:
        for b in elems:
            assert (a * b).matrix in mats


def test_dot_action_a1():
    s = WeylElement.simple(A1, 0)
    for lam in range(-3, 6):
        assert s.dot((lam,)) == (-lam - 2,)
    e = WeylElement.identity(A1)
    assert e.dot((7,)) == (7,)


def test_dot_action_a2():
    s1 = WeylElement.simple(A2, 0)
    assert s1.dot((0, 0)) == (-2, 1)


def test_dot_composition():
    rng = random.Random(1)
    for datum in (A2, B2):
        elems = weyl_group(datum)
        for _ in range(20):
            w1, w2 = rng.choice(elems), rng.choice(elems)
            lam = tuple(rng.randrange(-4, 5) for _ in range(datum.rank))
            assert (w1 * w2).dot(lam) == w1.dot(w2.dot(lam))


def test_reflection_involution_and_braid():
    for datum in (A2, B2, G2):
        for i in range(datum.rank):
            s = WeylElement.simple(datum, i)
            assert (s * s).is_identity()
    s1, s2 = WeylElement.simple(A2, 0), WeylElement.simple(A2, 1)
    assert (s1 * s2 * s1).matrix == (s2 * s1 * s2).matrix
    t1, t2 = WeylElement.simple(B2, 0), WeylElement.simple(B2, 1)
    assert (t1 * t2 * t1 * t2).matrix == (t2 * t1 * t2 * t1).matrix


def test_pairing_weyl_invariance():
    rng = random.Random(2)
    for datum in (A2, B2, G2):
        elems = weyl_group(datum)
        for _ in range(15):
            w = rng.choice(elems)
            lam = tuple(rng.randrange(-5, 6) for _ in range(datum.rank))
            mu = tuple(rng.randrange(-5, 6) for _ in range(datum.rank))
            assert datum.pairing(w.act(lam), w.act(mu)) == datum.pairing(lam, mu)


def test_length_counts_inversions():
    for datum in (A2, B2):
        for w in weyl_group(datum):
            sent_negative = 0
            for y in datum.positive_roots:
                x = w.act(datum.root_to_weight(y))
                yy = datum.weight_to_root(x)
                if all(c <= 0 for c in yy):
                    sent_negative += 1
            assert sent_negative == w.length


def test_reduced_word_is_reduced():
    for datum in (A2, B2):
        for w in weyl_group(datum):
            word = w.reduced_word
            prod = WeylElement.identity(datum)
            for i in word:
                prod = prod * WeylElement.simple(datum, i)
            assert prod == w


def test_dominant_representative():
    lam = (4, 1)
    mu, w = dominant_representative(A2, lam)
    assert mu == lam and w.is_identity()

    mu, w = dominant_representative(A1, (-3,))
    assert mu == (3,) and w.length == 1

    lam = (-1, -1)
    mu, w = dominant_representative(A2, lam)
    assert w.act(mu) == lam
    orbit = {v.act(lam) for v in weyl_group(A2)}
    dominant_orbit = {x for x in orbit if min(x) >= 0}
    assert dominant_orbit == {mu}


def test_positive_roots():
    assert len(A2.positive_roots) == 3
    assert len(B2.positive_roots) == 4
    assert len(G2.positive_roots) == 6
    assert A2.highest_root == (1, 1)
    assert B2.highest_root == (0, 2)
    # highest root cannot be raised by any simple root
    for datum in (A2, B2, G2):
        roots = set(datum.positive_roots)
        top = datum.weight_to_root(datum.highest_root)
        for i in range(datum.rank):
            raised = tuple(int(c) + (1 if k == i else 0)
                           for k, c in enumerate(top))
            assert raised not in roots


def test_height_drop():
    assert A2.height_drop((1, 1), (1, 1)) == 0
    theta = A2.highest_root
    assert A2.height_drop(theta, tuple(-t for t in theta)) == 4


def test_rank_one_datum_custom_qexp():
    d = rank_one_datum(12)
    assert d.q_exp == 12
    assert d.matrix == ((2,),)
    assert d != A1
