"""Finite character sums with module-valued coefficients.

A torus function is sum_nu e^nu v_nu with each v_nu a vector over the full
basis of a fixed target module V; zero coefficient vectors are never stored.
Evaluation follows e^nu(q^(2 lam)) = q^(2<nu,lam>), realized as integer
powers of the scalar base variable, or symbolically as monomials in the
formal weight variables Z_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .linalg import mat_mul, mat_vec
from .scalars import ExactScalar, ONE, ZERO, qpow
from .symbolic import SymScalar


def _wt_key(wt):
    return tuple(-c for c in wt)


class TorusFunction:
    def __init__(self, datum, target, terms=None):
        self.datum = datum
        self.target = target
        self.terms = {}
        for wt, vec in (terms or {}).items():
            vec = list(vec)
            if len(vec) != target.total_dim:
                raise DomainError("coefficient vector has wrong dimension")
            if any(vec):
                self.terms[tuple(wt)] = vec

    # -- basic ring structure ------------------------------------------

    @staticmethod
    def zero(datum, target):
        return TorusFunction(datum, target)

    @staticmethod
    def single(datum, target, wt, vec):
        return TorusFunction(datum, target, {tuple(wt): list(vec)})

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms, key=_wt_key)

    def copy_terms(self):
        return {wt: list(vec) for wt, vec in self.terms.items()}

    def __add__(self, other):
        if self.datum != other.datum or self.target is not other.target:
            raise DomainError("operands live in different rings")
        out = self.copy_terms()
        for wt, vec in other.terms.items():
            if wt in out:
                out[wt] = [a + b for a, b in zip(out[wt], vec)]
            else:
                out[wt] = list(vec)
        return TorusFunction(self.datum, self.target, out)

    def __neg__(self):
        return TorusFunction(self.datum, self.target,
                             {wt: [ZERO - x for x in vec]
                              for wt, vec in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = ExactScalar.from_fraction(c)
        return TorusFunction(self.datum, self.target,
                             {wt: [c * x for x in vec]
                              for wt, vec in self.terms.items()})

    def shift(self, delta):
        """Multiply by the character e^delta."""
        delta = tuple(delta)
        return TorusFunction(self.datum, self.target,
                             {tuple(a + b for a, b in zip(wt, delta)): vec
                              for wt, vec in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, TorusFunction)
                and self.datum == other.datum
                and self.terms == other.terms)

    def __repr__(self):
        return f"TorusFunction({len(self.terms)} terms)"

    # -- zero-weight bookkeeping -----------------------------------------

    def zero_block_positions(self):
        zw = self.target.zero_weight()
        return [k for k, (wt, _) in enumerate(self.target.basis_enumeration())
                if wt == zw]

    def coefficients_outside_zero_weight(self):
        """(weight, basis position) pairs with coefficients off V[0]."""
        zero_pos = set(self.zero_block_positions())
        bad = []
        for wt in self.support():
            for k, x in enumerate(self.terms[wt]):
                if k not in zero_pos and x:
                    bad.append((wt, k))
        return bad

    def zero_block(self, wt):
        vec = self.terms.get(tuple(wt))
        pos = self.zero_block_positions()
        if vec is None:
            return [ZERO] * len(pos)
        return [vec[p] for p in pos]

    @staticmethod
    def from_zero_block_terms(datum, target, terms):
        """Build from vectors given over the V[0] basis only."""
        pos = [k for k, (wt, _) in enumerate(target.basis_enumeration())
               if wt == target.zero_weight()]
        full = {}
        for wt, vec in terms.items():
            fv = [ZERO] * target.total_dim
            for p, x in zip(pos, vec):
                fv[p] = x
            full[tuple(wt)] = fv
        return TorusFunction(datum, target, full)


# -- operator action ------------------------------------------------------


def full_operator(V, which, i):
    """Matrix of E_i or F_i on the whole of V in its basis enumeration."""
    key = ("_full_ops", which, i)
    cache = getattr(V, "_full_op_cache", None)
    if cache is None:
        cache = V._full_op_cache = {}
    if key in cache:
        return cache[key]
    n = V.total_dim
    mat = [[ZERO] * n for _ in range(n)]
    for wt in V.weight_order:
        target = V.shift_weight(wt, i, up=(which == "e"))
        block = V.op_matrix(which, i, wt)
        if block is None or target not in V.dims:
            continue
        roff, coff = V.offset(target), V.offset(wt)
        for a in range(len(block)):
            for b in range(len(block[a])):
                mat[roff + a][coff + b] = block[a][b]
    cache[key] = mat
    return mat


def e_action(f: TorusFunction, i: int, n: int = 1) -> TorusFunction:
    """(1 x E_i)^n applied to the coefficients."""
    if n < 0:
        raise DomainError("raising power must be nonnegative")
    if n == 0:
        return f
    mat = full_operator(f.target, "e", i)
    out = {}
    for wt, vec in f.terms.items():
        cur = vec
        for _ in range(n):
            cur = mat_vec(mat, cur, ZERO)
        out[wt] = cur
    return TorusFunction(f.datum, f.target, out)


def nilpotency_degree(V, i) -> int:
    """Largest n with E_i^n nonzero on V."""
    mat = full_operator(V, "e", i)
    n = 0
    power = mat
    while any(x for row in power for x in row):
        n += 1
        power = mat_mul(mat, power, ZERO)
        if n > V.total_dim:
            raise DomainError("raising operator is not nilpotent")
    return n


# -- q-string division ----------------------------------------------------


@dataclass
class QStringDivision:
    divisible: bool
    quotient: TorusFunction | None
    offending_coset: tuple | None
    remainder: dict | None

    def __bool__(self):
        return self.divisible


def _coset_split(f: TorusFunction, i: int):
    """Partition support into classes modulo the i-th simple root, returning
    (representative, {step: weight}) with wt = rep + step * alpha_i."""
    alpha = f.datum.simple_root(i)
    j0 = next(k for k, a in enumerate(alpha) if a)
    groups = []
    for wt in f.support():
        placed = False
        for rep, members in groups:
            diff = tuple(a - b for a, b in zip(wt, rep))
            step, r = divmod(diff[j0], alpha[j0])
            if r == 0 and all(d == step * a for d, a in zip(diff, alpha)):
                members[step] = wt
                placed = True
                break
        if not placed:
            groups.append((wt, {0: wt}))
    return groups


def divide_by_qstring(f: TorusFunction, i: int, n: int) -> QStringDivision:
    """Exact division by (1 - q_i^2 e^a_i)(1 - q_i^4 e^a_i)...(1 - q_i^2n e^a_i),
    performed coset by coset along the alpha_i strings."""
    if n <= 0:
        raise DomainError("number of string factors must be positive")
    datum = f.datum
    alpha = datum.simple_root(i)
    step_exp = datum.q_exp * datum.d[i]
    # divisor polynomial in T = e^{alpha_i}: prod (1 - q_i^{2k} T)
    divisor = {0: ONE}
    for k in range(1, n + 1):
        c = qpow(2 * k * step_exp)
        new = dict(divisor)
        for t, x in divisor.items():
            cur = new.get(t + 1, ZERO) - c * x
            if cur:
                new[t + 1] = cur
            else:
                new.pop(t + 1, None)
        divisor = new
    quotient_terms = {}
    for rep, members in _coset_split(f, i):
        coeffs = {t: list(f.terms[wt]) for t, wt in members.items()}
        tmin, tmax = min(coeffs), max(coeffs)
        width = f.target.total_dim
        qcoeffs = {}
        for t in range(tmin, tmax - n + 1):
            vec = coeffs.get(t)
            if vec is None or not any(vec):
                coeffs.pop(t, None)
                continue
            qcoeffs[t] = vec
            for dt, dx in divisor.items():
                if dt == 0:
                    coeffs.pop(t, None)
                    continue
                tt = t + dt
                cur = coeffs.get(tt, [ZERO] * width)
                cur = [a - dx * b for a, b in zip(cur, vec)]
                if any(cur):
                    coeffs[tt] = cur
                else:
                    coeffs.pop(tt, None)
        leftovers = {t: v for t, v in coeffs.items() if any(v)}
        if leftovers:
            remainder = {
                tuple(r + t * a for r, a in zip(rep, alpha)): v
                for t, v in leftovers.items()}
            return QStringDivision(False, None, rep, remainder)
        for t, vec in qcoeffs.items():
            wt = tuple(r + t * a for r, a in zip(rep, alpha))
            quotient_terms[wt] = vec
    return QStringDivision(
        True, TorusFunction(f.datum, f.target, quotient_terms), None, None)


def multiply_by_qstring(f: TorusFunction, i: int, n: int) -> TorusFunction:
    """Multiply by the same product of string factors (division inverse)."""
    datum = f.datum
    alpha = datum.simple_root(i)
    step_exp = datum.q_exp * datum.d[i]
    out = f
    for k in range(1, n + 1):
        shifted = out.shift(alpha).scale(qpow(2 * k * step_exp))
        out = out - shifted
    return out


# -- evaluation -------------------------------------------------------------


def evaluate_at_weight(f: TorusFunction, lam):
    """sum_nu q^(2<nu,lam>) v_nu for an integral weight lam."""
    datum = f.datum
    total = [ZERO] * f.target.total_dim
    for wt, vec in f.terms.items():
        e = 2 * datum.q_exp * datum.pairing(wt, lam)
        if Fraction(e).denominator != 1:
            raise DomainError("pairing exponent is not integral")
        mono = qpow(int(e))
        total = [a + mono * b for a, b in zip(total, vec)]
    return total


def _z_exponents(datum, wt):
    out = []
    for j in range(datum.rank):
        omega = tuple(1 if k == j else 0 for k in range(datum.rank))
        e = 2 * datum.q_exp * datum.pairing(wt, omega)
        if Fraction(e).denominator != 1:
            raise DomainError("symbolic exponent is not integral")
        out.append(int(e))
    return out


def evaluate_symbolic(f: TorusFunction):
    """The same evaluation with lam left formal: a vector of symbolic
    scalars in the variables Z_j = s^(lam(h_j))."""
    datum = f.datum
    r = datum.rank
    total = [SymScalar.zero(r) for _ in range(f.target.total_dim)]
    for wt, vec in f.terms.items():
        mono = SymScalar.monomial(r, 0, _z_exponents(datum, wt))
        for k, x in enumerate(vec):
            if x:
                total[k] = total[k] + mono * SymScalar.from_exact(x, r)
    return total


def weyl_pushforward(f: TorusFunction, w) -> TorusFunction:
    """Transport terms along nu -> w(nu)."""
    return TorusFunction(f.datum, f.target,
                         {w.act(wt): list(vec)
                          for wt, vec in f.terms.items()})


def classical_limit(f: TorusFunction):
    """Coefficients at q = 1, as plain rationals; raises PoleError on poles."""
    out = {}
    for wt, vec in f.terms.items():
        vals = [x.evaluate("one", f.datum.q_exp) for x in vec]
        if any(vals):
            out[wt] = vals
    return out


# -- convex geometry on the weight lattice ----------------------------------


def point_in_hull(p, points) -> bool:
    """Exact feasibility of p in conv(points) via phase-one simplex."""
    points = list(points)
    if not points:
        return False
    if tuple(p) in {tuple(x) for x in points}:
        return True
    r = len(p)
    m = r + 1
    n = len(points)
    # constraints: sum_t x_t * point_t = p, sum_t x_t = 1, x >= 0
    rows = [[Fraction(pt[j]) for pt in points] for j in range(r)]
    rows.append([Fraction(1)] * n)
    rhs = [Fraction(c) for c in p] + [Fraction(1)]
    for j in range(m):
        if rhs[j] < 0:
            rows[j] = [-x for x in rows[j]]
            rhs[j] = -rhs[j]
    # artificial variables complete an identity basis
    tab = [rows[j] + [Fraction(1 if k == j else 0) for k in range(m)]
           + [rhs[j]] for j in range(m)]
    basis = list(range(n, n + m))
    cost = [Fraction(0)] * (n + m + 1)
    for j in range(m):
        for k in range(n + m + 1):
            cost[k] -= tab[j][k]
    for k in range(n, n + m):
        cost[k] += 1
    while True:
        enter = next((k for k in range(n + m) if cost[k] < 0), None)
        if enter is None:
            break
        ratios = [(tab[j][-1] / tab[j][enter], j)
                  for j in range(m) if tab[j][enter] > 0]
        if not ratios:
            break
        _, leave = min(ratios, key=lambda t: (t[0], basis[t[1]]))
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for j in range(m):
            if j != leave and tab[j][enter]:
                fct = tab[j][enter]
                tab[j] = [a - fct * b for a, b in zip(tab[j], tab[leave])]
        if cost[enter]:
            fct = cost[enter]
            cost = [a - fct * b for a, b in zip(cost, tab[leave] + [])]
        basis[leave] = enter
    return -cost[-1] == 0


def hull_vertices(points):
    """Points that are not convex combinations of the others."""
    points = sorted({tuple(p) for p in points})
    out = []
    for p in points:
        others = [x for x in points if x != p]
        if not others or not point_in_hull(p, others):
            out.append(p)
    return out


def weight_diagram(f: TorusFunction):
    """All lattice points of the convex hull of the support."""
    support = f.support()
    if not support:
        return set()
    return lattice_points_of_hull(support, f.datum.rank)


def lattice_points_of_hull(points, rank):
    pts = {tuple(p) for p in points}
    lo = [min(p[j] for p in pts) for j in range(rank)]
    hi = [max(p[j] for p in pts) for j in range(rank)]
    out = set()

    def rec(prefix):
        j = len(prefix)
        if j == rank:
            cand = tuple(prefix)
            if cand in pts or point_in_hull(cand, pts):
                out.add(cand)
            return
        for c in range(lo[j], hi[j] + 1):
            rec(prefix + [c])

    rec([])
    return out
