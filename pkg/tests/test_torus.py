import random
from fractions import Fraction

import pytest

from qchev.cartan import WeylElement, build_cartan_datum, weyl_group
from qchev.errors import DomainError, PoleError
from qchev.modules import irreducible
from qchev.scalars import ExactScalar, ONE, ZERO, qpow, quantum_integer
from qchev.torus import (TorusFunction, classical_limit, divide_by_qstring,
                         e_action, evaluate_at_weight, evaluate_symbolic,
                         hull_vertices, lattice_points_of_hull,
                         multiply_by_qstring, nilpotency_degree,
                         point_in_hull, weight_diagram, weyl_pushforward)

A1 = build_cartan_datum("A", 1)
A2 = build_cartan_datum("A", 2)
L2 = irreducible(A1, (2,))
V0_L2 = [ZERO, ONE, ZERO]  # unit vector of the zero-weight line of L2


def character(datum, L):
    terms = {}
    for wt, k in L.basis_enumeration():
        vec = terms.setdefault(wt, [ZERO] * L.total_dim)
        vec[L.offset(wt) + k] = ONE
    return TorusFunction(datum, L, terms)


def test_point_in_hull_rank_two_oracle():
    # Caratheodory in the plane: membership iff inside some triangle/segment
    rng = random.Random(3)
    pts = [(rng.randrange(-3, 4), rng.randrange(-3, 4)) for _ in range(7)]

    def brute(p):
        import itertools
        for trio in itertools.combinations(pts, 3):
            (x1, y1), (x2, y2), (x3, y3) = trio
            det = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
            if det == 0:
                continue
            a = Fraction((p[0] - x1) * (y3 - y1) - (x3 - x1) * (p[1] - y1), det)
            b = Fraction((x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1), det)
            if a >= 0 and b >= 0 and a + b <= 1:
                return True
        for duo in itertools.combinations(pts, 2):
            (x1, y1), (x2, y2) = duo
            dx, dy = x2 - x1, y2 - y1
            if dx == dy == 0:
                continue
            px, py = p[0] - x1, p[1] - y1
            if px * dy != py * dx:
                continue
            t = Fraction(px, dx) if dx else Fraction(py, dy)
            if 0 <= t <= 1:
                return True
        return p in pts

    for x in range(-4, 5):
        for y in range(-4, 5):
            assert point_in_hull((x, y), pts) == brute((x, y))


def test_e_action_basics():
    f = TorusFunction.single(A1, L2, (2,), V0_L2)
    assert e_action(f, 0, 0) == f
    g = e_action(f, 0, 1)
    assert g.support() == [(2,)]
    # E v0 = [2] v2 in the monomial basis of L2
    assert g.terms[(2,)][0] == quantum_integer(2, A1.q_exp)
    assert e_action(f, 0, 3).is_zero()
    assert nilpotency_degree(L2, 0) == 2
    assert nilpotency_degree(irreducible(A1, (4,)), 0) == 4


def test_qstring_division_round_trip():
    f = TorusFunction(A1, L2, {(2,): V0_L2, (-4,): [ZERO, qpow(3), ONE]})
    for n in (1, 2):
        prod = multiply_by_qstring(f, 0, n)
        res = divide_by_qstring(prod, 0, n)
        assert res.divisible
        assert res.quotient == f
        assert multiply_by_qstring(res.quotient, 0, n) == prod


def test_qstring_not_divisible():
    f = TorusFunction.single(A1, L2, (0,), V0_L2)
    res = divide_by_qstring(f, 0, 1)
    assert not res.divisible
    assert res.offending_coset is not None
    assert res.remainder


def test_qstring_rank_two_cosets():
    Vadj = irreducible(A2, (1, 1))
    vec = [ZERO] * Vadj.total_dim
    vec[Vadj.offset(Vadj.zero_weight())] = ONE
    f = TorusFunction(A2, Vadj, {(1, 1): vec, (-1, 2): vec, (2, -1): vec})
    prod = multiply_by_qstring(f, 0, 1)
    res = divide_by_qstring(prod, 0, 1)
    assert res.divisible and res.quotient == f


def test_evaluate_at_weight():
    f = TorusFunction.single(A1, L2, (0,), V0_L2)
    for lam in ((0,), (2,), (-1,)):
        assert evaluate_at_weight(f, lam)[1] == ONE
    falpha = TorusFunction.single(A1, L2, (2,), V0_L2)
    # e^alpha(q^{2 omega}) = q^{2<alpha,omega>} = q^2
    assert evaluate_at_weight(falpha, (1,))[1] == qpow(2 * A1.q_exp)
    L1 = irreducible(A1, (1,))
    chi = character(A1, L1)
    vals = evaluate_at_weight(chi, (1,))
    assert sum(vals[1:], vals[0]) == quantum_integer(2, A1.q_exp)


def test_evaluate_linear():
    f = TorusFunction.single(A1, L2, (2,), V0_L2)
    g = TorusFunction.single(A1, L2, (-2,), [ONE, ZERO, ZERO])
    lam = (3,)
    fg = evaluate_at_weight(f + g, lam)
    fv, gv = evaluate_at_weight(f, lam), evaluate_at_weight(g, lam)
    assert fg == [a + b for a, b in zip(fv, gv)]


def test_symbolic_evaluation_matches_grid():
    for datum, lam_grid in ((A1, [(-2,), (0,), (3,)]),
                            (A2, [(0, 0), (1, 2), (-1, 3)])):
        V = irreducible(datum, datum.highest_root)
        vec = [ZERO] * V.total_dim
        vec[V.offset(V.zero_weight())] = ONE
        f = TorusFunction(datum, V,
                          {datum.highest_root: vec,
                           tuple(-x for x in datum.highest_root): vec})
        sym = evaluate_symbolic(f)
        for lam in lam_grid:
            assert [x.specialize(list(lam)) for x in sym] == \
                evaluate_at_weight(f, lam)


def test_weyl_pushforward():
    f = TorusFunction.single(A1, L2, (2,), V0_L2)
    s = WeylElement.simple(A1, 0)
    e = WeylElement.identity(A1)
    assert weyl_pushforward(f, e) == f
    assert weyl_pushforward(f, s).support() == [(-2,)]
    assert weyl_pushforward(weyl_pushforward(f, s), s) == f
    rng = random.Random(4)
    Vadj = irreducible(A2, (1, 1))
    vec = [ZERO] * Vadj.total_dim
    vec[Vadj.offset(Vadj.zero_weight()) + 1] = ONE
    g = TorusFunction(A2, Vadj, {(1, 1): vec, (0, 0): vec})
    for w in weyl_group(A2):
        for _ in range(3):
            lam = tuple(rng.randrange(-3, 4) for _ in range(2))
            assert evaluate_at_weight(weyl_pushforward(g, w), lam) == \
                evaluate_at_weight(g, w.inverse().act(lam))


def test_classical_limit():
    chi = character(A1, irreducible(A1, (3,)))
    limit = classical_limit(chi)
    assert set(limit) == {(3,), (1,), (-1,), (-3,)}
    for vec in limit.values():
        assert sum(vec) == 1
    assert classical_limit(TorusFunction.zero(A1, L2)) == {}
    pole = ExactScalar.from_fraction(1) / (qpow(1) - qpow(-1))
    f = TorusFunction.single(A1, L2, (0,), [pole, ZERO, ZERO])
    with pytest.raises(PoleError):
        classical_limit(f)


def test_weight_diagram():
    assert weight_diagram(TorusFunction.zero(A1, L2)) == set()
    f = TorusFunction(A1, L2, {(-2,): V0_L2, (2,): V0_L2})
    assert weight_diagram(f) == {(-2,), (-1,), (0,), (1,), (2,)}
    single = TorusFunction.single(A2, irreducible(A2, (1, 1)),
                                  (2, -1), [ONE] + [ZERO] * 7)
    assert weight_diagram(single) == {(2, -1)}


def test_weight_diagram_triangle():
    pts = [(1, 0), (-1, 1), (0, -1)]
    assert lattice_points_of_hull(pts, 2) == {(1, 0), (-1, 1), (0, -1), (0, 0)}
    assert hull_vertices(pts + [(0, 0)]) == sorted(pts)
