import random
from fractions import Fraction

import pytest

from qchev.errors import DomainError, PoleError, UnsupportedEvaluationError
from qchev.scalars import (ExactScalar, ONE, ZERO, from_string, qpow,
                           quantum_factorial, quantum_integer, to_string)


def frac_scalar(a, b=1):
    return ExactScalar.from_fraction(Fraction(a, b))


def test_quantum_integer_small():
    # [3] = q^2 + 1 + q^-2
    assert quantum_integer(3) == qpow(2) + ONE + qpow(-2)
    assert quantum_integer(0, 2).is_zero()
    assert quantum_integer(1, 3) == ONE
    assert quantum_integer(-4) == -quantum_integer(4)


def test_quantum_integer_division():
    # [4]/[2] = q^2 + q^-2, checked by an independent product oracle
    ratio = quantum_integer(4) / quantum_integer(2)
    assert ratio == qpow(2) + qpow(-2)
    assert ratio * quantum_integer(2) == quantum_integer(4)


def test_quantum_factorial():
    assert quantum_factorial(0) == ONE
    assert quantum_factorial(2) == qpow(1) + qpow(-1)
    expected = (qpow(1) + qpow(-1)) * (qpow(2) + ONE + qpow(-2))
    assert quantum_factorial(3) == expected
    with pytest.raises(DomainError):
        quantum_factorial(-1)


def test_evaluate():
    m = 5
    assert quantum_integer(m).evaluate("one", 1) == m
    x = qpow(2) + qpow(-2)
    assert x.evaluate(2, 1) == Fraction(17, 4)
    assert (quantum_integer(4) / quantum_integer(2)).evaluate(1, 1) == 2


def test_evaluate_errors():
    pole = ONE / (qpow(1) - qpow(-1))
    with pytest.raises(PoleError):
        pole.evaluate(1, 1)
    # s alone is q^(1/2) when q = s^2: not evaluable at a rational q != 1
    half = qpow(1)
    with pytest.raises(UnsupportedEvaluationError):
        half.evaluate(4, 2)
    assert half.evaluate(1, 2) == 1
    with pytest.raises(DomainError):
        ONE.evaluate(0, 1)


def test_canonical_zero_and_cancellation():
    x = quantum_integer(7) / quantum_factorial(3)
    assert (x - x).is_zero()
    assert (x - x) == ZERO
    y = (qpow(4) - ONE) / (qpow(2) - ONE)
    assert y == qpow(2) + ONE
    assert y.is_polynomial()


def test_denominator_normalization():
    # denominator must come out monic with lowest exponent 0
    x = ONE / (qpow(3) * frac_scalar(2) + qpow(1))
    assert min(x.den) == 0
    assert x.den[max(x.den)] == 1
    assert x * (qpow(3) * frac_scalar(2) + qpow(1)) == ONE


def test_field_axioms_random():
    rng = random.Random(0)

    def rand_scalar():
        num = {rng.randrange(-4, 5): Fraction(rng.randrange(-5, 6) or 1)
               for _ in range(rng.randrange(1, 4))}
        den = {rng.randrange(-2, 3): Fraction(rng.randrange(-3, 4) or 2)
               for _ in range(rng.randrange(1, 3))}
        return ExactScalar(num, den)

    for _ in range(25):
        a, b, c = rand_scalar(), rand_scalar(), rand_scalar()
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a - a).is_zero()
        if not a.is_zero():
            assert a * a.inverse() == ONE
            assert a ** 2 * a ** -2 == ONE


@pytest.mark.parametrize("d", [1, 2, 3])
def test_pascal_identity(d):
    # [m+1][m-1] = [m]^2 - 1 at every quantum parameter q^d
    for m in range(1, 11):
        lhs = quantum_integer(m + 1, d) * quantum_integer(m - 1, d)
        rhs = quantum_integer(m, d) ** 2 - ONE
        assert lhs == rhs


@pytest.mark.parametrize("d", [1, 2, 3])
def test_bar_symmetry(d):
    for m in range(0, 8):
        x = quantum_integer(m, d)
        assert x.bar() == x
    y = quantum_integer(5, d) / quantum_integer(3, d)
    assert y.bar() == y


def test_string_roundtrip():
    samples = [
        ZERO,
        ONE,
        frac_scalar(-3, 2),
        quantum_integer(4),
        quantum_integer(5) / quantum_integer(2),
        qpow(3) - frac_scalar(1, 7) * qpow(-5),
        (qpow(1) + ONE) / (qpow(2) - frac_scalar(1, 3)),
    ]
    for q_exp in (1, 2, 4):
        for x in samples:
            assert from_string(to_string(x, q_exp), q_exp) == x


def test_string_format():
    assert to_string(quantum_integer(3), 1) == "1*q^2+1+1*q^-2"
    assert to_string(qpow(1), 2) == "1*q^(1/2)"
    x = quantum_integer(4) / quantum_integer(3)
    assert to_string(x, 1).startswith("(")
    assert ")/(" in to_string(x, 1)
