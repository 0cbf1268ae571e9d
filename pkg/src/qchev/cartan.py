"""Finite-type Cartan data, weight arithmetic and the Weyl group.

Weights are plain tuples of integers in fundamental-weight coordinates,
i.e. lam = (lam(h_1), ..., lam(h_r)).  The Cartan matrix is stored with the
convention a[i][j] = alpha_j(h_i), so the coordinates of the simple root
alpha_i form the i-th column of the matrix.  Root coordinates (coefficients
in the simple-root basis) are used for bookkeeping heights and the nilpotent
algebra grading.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from .errors import ConfigurationError, DomainError


def _cartan_matrix(letter: str, rank: int):
    """Cartan matrix tables, a[i][j] = alpha_j(h_i)."""
    if letter == "A" and 1 <= rank <= 4:
        return [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                 for j in range(rank)] for i in range(rank)]
    if letter == "B" and 2 <= rank <= 4:
        a = _cartan_matrix("A", rank)
        # last simple root short: alpha_{r-1}(h_r) stays -1 viewed from the
        # short side, but the short coroot pairs -2 against the long root
        a[rank - 1][rank - 2] = -2
        return a
    if letter == "C" and 2 <= rank <= 4:
        a = _cartan_matrix("A", rank)
        a[rank - 2][rank - 1] = -2
        return a
    if letter == "D" and rank == 4:
        a = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]
        for i, j in ((0, 1), (1, 2), (1, 3)):
            a[i][j] = a[j][i] = -1
        return a
    if letter == "G" and rank == 2:
        return [[2, -3], [-1, 2]]
    raise ConfigurationError(f"unsupported Cartan type {letter}{rank}")


def _symmetrizers(a):
    """Minimal positive integers d with d_i a_ij = d_j a_ji."""
    r = len(a)
    d = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if a[i][j] and d[j] is None:
                    d[j] = d[i] * a[i][j] / a[j][i]
                    stack.append(j)
    mult = lcm(*(x.denominator for x in d))
    ints = [int(x * mult) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if any(x <= 0 for x in ints):
        raise ConfigurationError("Cartan matrix is not symmetrizable")
    return tuple(ints)


def _mat_inverse_fraction(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] +
           [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(row for row in range(col, n) if aug[row][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for row in range(n):
            if row != col and aug[row][col]:
                f = aug[row][col]
                aug[row] = [x - f * y for x, y in zip(aug[row], aug[col])]
    return [row[n:] for row in aug]


class CartanDatum:
    """Immutable container for a finite-type Cartan matrix realization.

    q_exp is the integer e with q = s**e for the Laurent variable s of the
    scalar field; for a freshly built datum e = 2L where L is the pairing
    denominator.  A rank-one datum obtained by restriction to a node i of a
    bigger datum keeps the ambient variable and carries q_exp scaled by d_i,
    so that its quantum parameter is q_i.
    """

    def __init__(self, type_name, matrix, d, q_exp=None):
        self.type_name = type_name
        self.matrix = tuple(tuple(row) for row in matrix)
        self.d = tuple(d)
        self.rank = len(self.d)
        inv = _mat_inverse_fraction(matrix)
        # <omega_i, omega_j> = d_i * (A^-1)_{ij}; built from
        # <alpha_i, alpha_j> = d_i a_ij and <omega_i, alpha_j> = d_j delta_ij
        gram = [[self.d[i] * inv[i][j] for j in range(self.rank)]
                for i in range(self.rank)]
        for i in range(self.rank):
            for j in range(self.rank):
                assert gram[i][j] == gram[j][i]
        self.gram = tuple(tuple(row) for row in gram)
        self.pairing_denominator = lcm(
            *(gram[i][j].denominator for i in range(self.rank)
              for j in range(self.rank)))
        self.q_exp = 2 * self.pairing_denominator if q_exp is None else q_exp
        self._validate()

    def _validate(self):
        a, d, r = self.matrix, self.d, self.rank
        for i in range(r):
            if a[i][i] != 2:
                raise ConfigurationError("diagonal entries must equal 2")
            for j in range(r):
                if i != j and a[i][j] > 0:
                    raise ConfigurationError("off-diagonal entries must be <= 0")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise ConfigurationError("zero pattern must be symmetric")
                if d[i] * a[i][j] != d[j] * a[j][i]:
                    raise ConfigurationError("symmetrizers do not symmetrize")
        # positive definiteness of (d_i a_ij) via leading principal minors
        sym = [[Fraction(d[i] * a[i][j]) for j in range(r)] for i in range(r)]
        for k in range(1, r + 1):
            if _det([row[:k] for row in sym[:k]]) <= 0:
                raise ConfigurationError("symmetrized matrix not positive definite")

    # -- identity -------------------------------------------------------

    def _key(self):
        return (self.matrix, self.d, self.q_exp)

    def __eq__(self, other):
        return isinstance(other, CartanDatum) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"CartanDatum({self.type_name}, q_exp={self.q_exp})"

    # -- weight arithmetic -----------------------------------------------

    @property
    def rho(self):
        return (1,) * self.rank

    def simple_root(self, i):
        """Fundamental coordinates of alpha_i."""
        return tuple(self.matrix[j][i] for j in range(self.rank))

    @cached_property
    def _inv_matrix(self):
        return _mat_inverse_fraction(self.matrix)

    def root_to_weight(self, y):
        """Coordinates of sum_k y_k alpha_k in the fundamental basis."""
        return tuple(sum(self.matrix[j][k] * y[k] for k in range(self.rank))
                     for j in range(self.rank))

    def weight_to_root(self, x):
        """Simple-root coefficients of a weight (Fractions in general)."""
        inv = self._inv_matrix
        return tuple(sum(inv[k][j] * x[j] for j in range(self.rank))
                     for k in range(self.rank))

    def pairing(self, lam, mu) -> Fraction:
        g = self.gram
        return sum(Fraction(lam[i]) * g[i][j] * mu[j]
                   for i in range(self.rank) for j in range(self.rank))

    def is_dominant(self, lam):
        return all(c >= 0 for c in lam)

    def height_drop(self, lam, nu):
        """Height of lam - nu, which must be a nonnegative root combination."""
        y = self.weight_to_root(tuple(a - b for a, b in zip(lam, nu)))
        if any(c.denominator != 1 or c < 0 for c in y):
            raise DomainError(f"{nu} is not below {lam} in the root order")
        return int(sum(y))

    # -- roots -------------------------------------------------------------

    @cached_property
    def positive_roots(self):
        """All positive roots, in root coordinates, sorted by (height, coords)."""
        simple = [tuple(1 if k == i else 0 for k in range(self.rank))
                  for i in range(self.rank)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for y in frontier:
                x = self.root_to_weight(y)
                for i in range(self.rank):
                    c = x[i]
                    ry = list(y)
                    ry[i] -= c
                    ry = tuple(ry)
                    if all(v >= 0 for v in ry) and ry not in seen:
                        seen.add(ry)
                        nxt.append(ry)
            frontier = nxt
        return tuple(sorted(seen, key=lambda y: (sum(y), y)))

    @cached_property
    def highest_root(self):
        """Fundamental coordinates of the highest root."""
        top = self.positive_roots[-1]
        assert sum(top) == max(sum(y) for y in self.positive_roots)
        return self.root_to_weight(top)

    def root_pairing(self, y1, y2) -> Fraction:
        return self.pairing(self.root_to_weight(y1), self.root_to_weight(y2))


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


def build_cartan_datum(type_letter: str, rank: int) -> CartanDatum:
    """Construct a finite-type datum; types A1..A4, B2..B4, C2..C4, D4, G2."""
    a = _cartan_matrix(type_letter, rank)
    return CartanDatum(f"{type_letter}{rank}", a, _symmetrizers(a))


def datum_from_name(name: str) -> CartanDatum:
    name = name.strip()
    if len(name) < 2 or not name[1:].isdigit():
        raise ConfigurationError(f"cannot parse Cartan type {name!r}")
    return build_cartan_datum(name[0].upper(), int(name[1:]))


def rank_one_datum(q_exp: int) -> CartanDatum:
    """An A1 datum over the ambient scalar variable with the given q_exp."""
    return CartanDatum("A1", [[2]], (1,), q_exp=q_exp)


class WeylElement:
    """Group element stored by its matrix action on fundamental coordinates."""

    __slots__ = ("datum", "matrix", "_word")

    def __init__(self, datum, matrix, word=None):
        self.datum = datum
        self.matrix = matrix
        self._word = word

    @staticmethod
    def identity(datum):
        r = datum.rank
        mat = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
        return WeylElement(datum, mat, ())

    @staticmethod
    def simple(datum, i):
        r = datum.rank
        alpha = datum.simple_root(i)
        mat = tuple(tuple((1 if j == k else 0) - (alpha[j] if k == i else 0)
                          for k in range(r)) for j in range(r))
        return WeylElement(datum, mat, (i,))

    def act(self, lam):
        return tuple(sum(row[k] * lam[k] for k in range(self.datum.rank))
                     for row in self.matrix)

    def __mul__(self, other):
        r = self.datum.rank
        m = tuple(tuple(sum(self.matrix[i][k] * other.matrix[k][j]
                            for k in range(r)) for j in range(r))
                  for i in range(r))
        return WeylElement(self.datum, m)

    def inverse(self):
        rows = _mat_inverse_fraction([list(row) for row in self.matrix])
        assert all(x.denominator == 1 for row in rows for x in row)
        m = tuple(tuple(int(x) for x in row) for row in rows)
        return WeylElement(self.datum, m)

    def is_identity(self):
        return all(self.matrix[i][j] == (1 if i == j else 0)
                   for i in range(self.datum.rank)
                   for j in range(self.datum.rank))

    def __eq__(self, other):
        return (isinstance(other, WeylElement) and self.datum == other.datum
                and self.matrix == other.matrix)

    def __hash__(self):
        return hash(self.matrix)

    def _sends_negative(self, i):
        """Whether w(alpha_i) is a negative root."""
        x = self.act(self.datum.simple_root(i))
        y = self.datum.weight_to_root(x)
        return all(c <= 0 for c in y)

    @property
    def reduced_word(self):
        """A canonical reduced word, recomputed lazily by descents."""
        if self._word is None:
            w = self
            word = []
            while not w.is_identity():
                i = next(i for i in range(self.datum.rank)
                         if w._sends_negative(i))
                # l(w s_i) < l(w), so w = w' s_i with the letter appended
                word.append(i)
                w = w * WeylElement.simple(self.datum, i)
            self._word = tuple(reversed(word))
        return self._word

    @property
    def length(self):
        return len(self.reduced_word)

    def dot(self, lam):
        """Shifted action w . lam = w(lam + rho) - rho."""
        rho = self.datum.rho
        shifted = tuple(a + 1 for a in lam)
        return tuple(a - 1 for a in self.act(shifted))

    def __repr__(self):
        return f"WeylElement(word={self.reduced_word})"


def weyl_group(datum) -> list[WeylElement]:
    """All elements, sorted by (length, reduced word); closed under products."""
    gens = [WeylElement.simple(datum, i) for i in range(datum.rank)]
    seen = {WeylElement.identity(datum).matrix: WeylElement.identity(datum)}
    frontier = [WeylElement.identity(datum)]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                wg = w * g
                if wg.matrix not in seen:
                    seen[wg.matrix] = wg
                    nxt.append(wg)
        frontier = nxt
    return sorted(seen.values(), key=lambda w: (w.length, w.reduced_word))


def longest_element(datum) -> WeylElement:
    return max(weyl_group(datum), key=lambda w: w.length)


def dot_action(datum, w: WeylElement, lam) -> tuple:
    return w.dot(lam)


def dominant_representative(datum, lam):
    """Return (mu, w) with mu dominant and w(mu) = lam (unshifted action)."""
    x = tuple(lam)
    u = WeylElement.identity(datum)
    while True:
        neg = [i for i in range(datum.rank) if x[i] < 0]
        if not neg:
            break
        i = neg[0]
        s = WeylElement.simple(datum, i)
        x = s.act(x)
        u = s * u
    return x, u.inverse()
