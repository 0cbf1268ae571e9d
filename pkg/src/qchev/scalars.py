"""Exact arithmetic in rational functions of one Laurent variable.

Every scalar in the engine is a quotient of Laurent polynomials in a single
variable ``s`` with rational coefficients.  A Cartan datum fixes the meaning
of ``s`` by declaring ``q = s**q_exp`` (with ``q_exp = 2L`` for pairing
denominator ``L``), so that every power of q arising from weight pairings is
an integer power of s.  The scalar layer itself never needs to know q; only
construction of quantum integers and evaluation/serialization do, and those
take the relevant exponent explicitly.

Canonical form: numerator and denominator are coprime, the denominator is an
ordinary polynomial (lowest exponent 0) with leading coefficient 1, and any
monomial factor is carried by the numerator.  Equality is literal equality of
canonical forms.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, PoleError, UnsupportedEvaluationError

# Laurent polynomials are dicts {exponent: nonzero Fraction}.

_ZERO_P: dict[int, Fraction] = {}
_ONE_P: dict[int, Fraction] = {0: Fraction(1)}


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return {}
    out: dict[int, Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pscale(a, c):
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def _pshift(a, k):
    return {e + k: c for e, c in a.items()}


def _pvaluation(a):
    return min(a) if a else 0


def _pdegree(a):
    return max(a) if a else 0


def _divmod_ordinary(a, b):
    """Ordinary polynomial division (inputs must have valuation >= 0)."""
    q: dict[int, Fraction] = {}
    r = dict(a)
    db = _pdegree(b)
    lb = b[db]
    while r and _pdegree(r) >= db:
        dr = _pdegree(r)
        c = r[dr] / lb
        q[dr - db] = c
        for e, v in b.items():
            ee = e + dr - db
            s = r.get(ee, 0) - c * v
            if s:
                r[ee] = s
            else:
                r.pop(ee, None)
    return q, r


def _primitive_int(p):
    """Integer-primitive copy of a poly with Fraction coefficients."""
    from math import gcd, lcm
    mult = lcm(*(c.denominator for c in p.values()))
    ints = {e: int(c * mult) for e, c in p.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {e: v // g for e, v in ints.items()}


def _pseudo_rem_int(a, b):
    """Pseudo-remainder of ordinary integer polys, deg a >= deg b possible."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r[dr]
        nr = {e: c * lb for e, c in r.items()}
        for e, c in b.items():
            ee = e + dr - db
            s = nr.get(ee, 0) - lr * c
            if s:
                nr[ee] = s
            else:
                nr.pop(ee, None)
        r = nr
    return r


def _pgcd(a, b):
    """Monic gcd, ignoring monomial factors (Laurent units).

    Uses a primitive pseudo-remainder sequence over the integers to keep
    coefficient growth in check; the plain Euclidean sequence over Q is
    catastrophically slow at the degrees arising in elimination.
    """
    if len(a) == 1 or len(b) == 1:
        return dict(_ONE_P)  # a monomial is a unit times a power of s
    pa = _primitive_int(_pshift(a, -_pvaluation(a)))
    pb = _primitive_int(_pshift(b, -_pvaluation(b)))
    if _pdegree(pa) < _pdegree(pb):
        pa, pb = pb, pa
    from math import gcd
    while pb:
        r = _pseudo_rem_int(pa, pb)
        if not r:
            pa = pb
            break
        r = _pshift(r, -_pvaluation(r))
        g = 0
        for v in r.values():
            g = gcd(g, v)
        pa, pb = pb, {e: v // g for e, v in r.items()}
    if _pdegree(pa) == 0 and _pvaluation(pa) == 0:
        return dict(_ONE_P)
    lead = pa[_pdegree(pa)]
    return {e: Fraction(c, lead) for e, c in pa.items()}


class ExactScalar:
    """Element of the fraction field of Laurent polynomials over Q."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = dict(_ONE_P)
        if _canonical:
            self.num = num
            self.den = den
            return
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num = {}
            self.den = dict(_ONE_P)
            return
        # move the denominator's monomial factor into the numerator
        dval = _pvaluation(den)
        if dval:
            den = _pshift(den, -dval)
            num = _pshift(num, -dval)
        if den != _ONE_P:
            g = _pgcd(num, den)
            if g != _ONE_P:
                nval = _pvaluation(num)
                num0, rn = _divmod_ordinary(_pshift(num, -nval), g)
                den0, rd = _divmod_ordinary(den, g)
                assert not rn and not rd
                num = _pshift(num0, nval)
                den = den0
        lead = den[_pdegree(den)]
        if lead != 1:
            den = {e: c / lead for e, c in den.items()}
            num = {e: c / lead for e, c in num.items()}
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_fraction(c) -> "ExactScalar":
        c = Fraction(c)
        return ExactScalar({0: c} if c else {}, dict(_ONE_P), _canonical=True)

    @staticmethod
    def monomial(c, e: int) -> "ExactScalar":
        c = Fraction(c)
        return ExactScalar({e: c} if c else {}, dict(_ONE_P), _canonical=True)

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        return self.den == _ONE_P

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return ExactScalar(_padd(self.num, other.num), dict(self.den))
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return ExactScalar(num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(_pneg(self.num), dict(self.den), _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == _ONE_P and other.den == _ONE_P:
            return ExactScalar(_pmul(self.num, other.num), dict(_ONE_P),
                               _canonical=True)
        return ExactScalar(_pmul(self.num, other.num),
                           _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero scalar")
        return ExactScalar(dict(self.den), dict(self.num))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n == 0:
            return ONE
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(sorted(self.num.items())),
                     tuple(sorted(self.den.items()))))

    def __repr__(self):
        return f"ExactScalar({to_string(self, 1)!r})"

    # -- substitutions ------------------------------------------------

    def bar(self):
        """The involution s -> 1/s."""
        return ExactScalar({-e: c for e, c in self.num.items()},
                           {-e: c for e, c in self.den.items()})

    def evaluate(self, q_value, q_exp: int):
        """Substitute q = q_value exactly, where q = s**q_exp.

        Accepts the string "one" (or the value 1) for the classical limit.
        Each surviving s-exponent must be a multiple of q_exp unless
        q_value is 1.  Raises PoleError if the denominator vanishes.
        """
        if q_value == "one":
            q_value = 1
        q_value = Fraction(q_value)
        if q_value == 0:
            raise DomainError("evaluation at q = 0 is undefined")

        def ev(poly):
            if q_value == 1:
                return sum(poly.values(), Fraction(0))
            total = Fraction(0)
            for e, c in poly.items():
                if e % q_exp:
                    raise UnsupportedEvaluationError(
                        f"exponent {e} is not a multiple of {q_exp}")
                total += c * q_value ** (e // q_exp)
            return total

        dv = ev(self.den)
        if dv == 0:
            raise PoleError(f"denominator vanishes at q = {q_value}")
        return ev(self.num) / dv


ZERO = ExactScalar.from_fraction(0)
ONE = ExactScalar.from_fraction(1)


def qpow(e: int) -> ExactScalar:
    """The monomial s**e."""
    return ExactScalar.monomial(1, e)


def quantum_integer(m: int, step: int = 1) -> ExactScalar:
    """[m] evaluated at the quantum parameter s**step.

    Expanded directly as s**(step*(m-1)) + s**(step*(m-3)) + ... so no
    division is involved; [-m] = -[m], [0] = 0.
    """
    if m == 0:
        return ZERO
    sign = 1 if m > 0 else -1
    m = abs(m)
    poly = {step * (m - 1 - 2 * j): Fraction(sign) for j in range(m)}
    return ExactScalar(poly, dict(_ONE_P), _canonical=True)


def quantum_factorial(m: int, step: int = 1) -> ExactScalar:
    """[m]! = [m][m-1]...[1]; [0]! = 1."""
    if m < 0:
        raise DomainError("quantum factorial of a negative integer")
    out = ONE
    for k in range(2, m + 1):
        out = out * quantum_integer(k, step)
    return out


# -- serialization ----------------------------------------------------
#
# Scalars print as sums of monomials "c*q^e" in descending exponent order,
# with e the exponent in units of q (that is, s-exponent divided by q_exp),
# written as an integer or "(a/b)".  Rational functions print as
# "(num)/(den)".


def _poly_to_string(poly, q_exp):
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        if e == 0:
            parts.append(str(c))
            continue
        qe = Fraction(e, q_exp)
        estr = str(qe.numerator) if qe.denominator == 1 else f"({qe})"
        parts.append(f"{c}*q^{estr}")
    return "+".join(parts)


def to_string(x: ExactScalar, q_exp: int) -> str:
    ns = _poly_to_string(x.num, q_exp)
    if x.is_polynomial():
        return ns
    return f"({ns})/({_poly_to_string(x.den, q_exp)})"


def _poly_from_string(text, q_exp):
    text = text.replace(" ", "")
    if text == "0":
        return {}
    poly: dict[int, Fraction] = {}
    for term in text.split("+"):
        if "*q^" in term:
            cs, es = term.split("*q^")
            if es.startswith("("):
                es = es[1:-1]
            e = Fraction(es) * q_exp
            if e.denominator != 1:
                raise DomainError(f"exponent {es} not representable")
            e = int(e)
        elif term.startswith("q^"):
            raise DomainError(f"malformed term {term!r}: coefficient required")
        else:
            cs, e = term, 0
        c = Fraction(cs)
        if c:
            poly[e] = poly.get(e, Fraction(0)) + c
    return {e: c for e, c in poly.items() if c}


def from_string(text: str, q_exp: int) -> ExactScalar:
    text = text.strip()
    cut = text.find(")/(")
    if text.startswith("(") and cut != -1:
        num = _poly_from_string(text[1:cut], q_exp)
        den = _poly_from_string(text[cut + 3:-1], q_exp)
        return ExactScalar(num, den)
    return ExactScalar(_poly_from_string(text, q_exp))
