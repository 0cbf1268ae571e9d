"""Multivariate Laurent fractions for formal integral-weight arguments.

A symbolic scalar lives in Q(s, Z_1, ..., Z_r) where s is the scalar base
variable and Z_j stands for q^(lam(h_j)/(2L)) = s^(lam(h_j)) for a formal
integral weight lam.  With that convention every quantity the engine needs
(evaluations e^nu(q^(2lam)) and dynamical-operator entries) has integer
exponents in the Z_j, and specializing at a concrete integral weight is the
monomial substitution Z_j -> s^(lam(h_j)).

Fractions are not reduced to a canonical form (multivariate gcd is not worth
the trouble here); instead equality is decided exactly by cross
multiplication, and only monomial and leading-coefficient normalization is
applied to keep sizes in check.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ExactScalar

# polynomials: dict {(s_exp, z_1, ..., z_r): nonzero Fraction}


def _padd(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pmul(a, b):
    if not a or not b:
        return {}
    out: dict[tuple, Fraction] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + ca * cb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _pneg(a):
    return {k: -c for k, c in a.items()}


class SymScalar:
    """Quotient of multivariate Laurent polynomials; nvars counts the Z_j."""

    __slots__ = ("num", "den", "nvars")

    def __init__(self, num, den, nvars, _normalized=False):
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.nvars = nvars
        if not num:
            self.num = {}
            self.den = {(0,) * (nvars + 1): 1}
            return
        if _normalized:
            self.num, self.den = num, den
            return
        # strip a common monomial factor
        width = nvars + 1
        mins = [min(k[i] for k in den) for i in range(width)]
        for i in range(width):
            mins[i] = min(mins[i], min(k[i] for k in num))
        if any(mins):
            shift = tuple(-m for m in mins)
            num = {tuple(x + y for x, y in zip(k, shift)): c
                   for k, c in num.items()}
            den = {tuple(x + y for x, y in zip(k, shift)): c
                   for k, c in den.items()}
        # clear coefficient denominators and divide by the integer content,
        # so that almost all coefficient arithmetic happens over the ints
        from math import gcd, lcm
        mult = 1
        for c in num.values():
            if isinstance(c, Fraction):
                mult = lcm(mult, c.denominator)
        for c in den.values():
            if isinstance(c, Fraction):
                mult = lcm(mult, c.denominator)
        g = 0
        for c in num.values():
            g = gcd(g, int(c * mult))
        for c in den.values():
            g = gcd(g, int(c * mult))
        if den[max(den)] * mult < 0:
            g = -g
        num = {k: int(c * mult) // g for k, c in num.items()}
        den = {k: int(c * mult) // g for k, c in den.items()}
        self.num, self.den = num, den

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(nvars):
        return SymScalar({}, {(0,) * (nvars + 1): 1}, nvars)

    @staticmethod
    def one(nvars):
        key = (0,) * (nvars + 1)
        return SymScalar({key: 1}, {key: 1}, nvars, _normalized=True)

    @staticmethod
    def monomial(nvars, s_exp=0, z_exps=None, coeff=1):
        z_exps = tuple(z_exps or (0,) * nvars)
        key = (s_exp,) + z_exps
        c = Fraction(coeff)
        one_key = (0,) * (nvars + 1)
        return SymScalar({key: c} if c else {}, {one_key: Fraction(1)}, nvars)

    @staticmethod
    def from_exact(x: ExactScalar, nvars):
        ztail = (0,) * nvars
        num = {(e,) + ztail: c for e, c in x.num.items()}
        den = {(e,) + ztail: c for e, c in x.den.items()}
        return SymScalar(num, den, nvars)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, SymScalar):
            return other
        if isinstance(other, ExactScalar):
            return SymScalar.from_exact(other, self.nvars)
        if isinstance(other, (int, Fraction)):
            return SymScalar.monomial(self.nvars, coeff=other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return SymScalar(_padd(self.num, other.num), dict(self.den),
                             self.nvars)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return SymScalar(num, _pmul(self.den, other.den), self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return SymScalar(_pneg(self.num), dict(self.den), self.nvars,
                         _normalized=True)

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
        return SymScalar(_pmul(self.num, other.num),
                         _pmul(self.den, other.den), self.nvars)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return SymScalar(dict(self.den), dict(self.num), self.nvars)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _pmul(self.num, other.den) == _pmul(other.num, self.den)

    def __hash__(self):
        raise TypeError("SymScalar is not hashable (no canonical form)")

    def __repr__(self):
        return f"SymScalar({len(self.num)} num terms / {len(self.den)} den terms)"

    # -- substitutions ------------------------------------------------------

    def substitute(self, s_offsets, z_matrix):
        """Monomial substitution Z_j -> s^(s_offsets[j]) * prod_k Z_k^(z_matrix[k][j]).

        Used for Weyl-group and affine shifts of the formal weight.
        """
        nv = self.nvars

        def tf(poly):
            out: dict[tuple, Fraction] = {}
            for k, c in poly.items():
                s_exp = k[0] + sum(s_offsets[j] * k[1 + j] for j in range(nv))
                z = tuple(sum(z_matrix[t][j] * k[1 + j] for j in range(nv))
                          for t in range(nv))
                key = (s_exp,) + z
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
            return out

        return SymScalar(tf(self.num), tf(self.den), nv)

    def specialize(self, s_values):
        """Substitute Z_j -> s^(s_values[j]); returns an ExactScalar."""

        def tf(poly):
            out: dict[int, Fraction] = {}
            for k, c in poly.items():
                e = k[0] + sum(s_values[j] * k[1 + j]
                               for j in range(self.nvars))
                s = out.get(e, 0) + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
            return out

        den = tf(self.den)
        if not den:
            raise ZeroDivisionError("denominator vanishes under specialization")
        return ExactScalar({e: Fraction(c) for e, c in tf(self.num).items()},
                           {e: Fraction(c) for e, c in den.items()})


def z_components(x: SymScalar):
    """Split a symbolic scalar whose denominator involves only s into a map
    from Z-exponent vectors to exact s-scalars."""
    den = {}
    for k, c in x.den.items():
        if any(k[1:]):
            raise ValueError("denominator involves formal weight variables")
        den[k[0]] = Fraction(c)
    groups: dict[tuple, dict] = {}
    for k, c in x.num.items():
        groups.setdefault(k[1:], {})[k[0]] = Fraction(c)
    return {z: ExactScalar(spart, dict(den)) for z, spart in groups.items()}


def weight_substitution(datum, w, dot=False):
    """Substitution data turning a symbolic function of lam into one of
    w(lam) (or w.lam for the shifted action)."""
    r = datum.rank
    mat = [[w.matrix[j][k] for k in range(r)] for j in range(r)]
    # Z_j carries lam(h_j); after lam -> w(lam) the j-th coordinate is
    # sum_k mat[j][k] lam(h_k), so Z_j -> s^off_j * prod_k Z_k^{mat[j][k]}
    # with the transposed exponent matrix in substitute()'s convention.
    z_matrix = [[mat[j][k] for j in range(r)] for k in range(r)]
    if dot:
        ones = w.act((1,) * r)
        offsets = [ones[j] - 1 for j in range(r)]
    else:
        offsets = [0] * r
    return offsets, z_matrix


def negate_shift_substitution(datum):
    """Substitution lam -> -lam - rho, i.e. Z_j -> s^-1 Z_j^-1."""
    r = datum.rank
    z_matrix = [[-1 if j == k else 0 for j in range(r)] for k in range(r)]
    return [-1] * r, z_matrix
