"""Dynamical Weyl group operators on the zero weight space.

The simple-reflection operator at node i acts blockwise through the rank-one
restriction of the target module: the zero weight space splits into strings
of even highest weight 2m, and on the string of a highest vector the
operator multiplies by (-1)^m prod_{j=1..m} [z+1+j]/[z+1-j] evaluated at the
quantum parameter q_i and the coordinate z = lam(h_i).  General elements are
assembled along reduced words by composing simple factors at dot-shifted
arguments; restricted to the zero weight space this is independent of the
chosen word.  Everything exists both at concrete integral weights and
symbolically, with the formal weight realized by the variables Z_j.

The same operators also have a direct definition through truncated Verma
modules: push an intertwiner through the extremal singular vector and read
off the leading block.  That route is implemented separately and serves as
the independent oracle for the product formula and the blockwise assembly.
"""

from __future__ import annotations

from fractions import Fraction

from .cartan import WeylElement
from .errors import (DepthError, DomainError, GenericityError, PoleError,
                     TheoremViolationError)
from .intertwiners import Intertwiner, singular_vectors, zero_weight_block
from .linalg import kernel_basis, mat_inverse, mat_mul, mat_vec, solve_right
from .modules import WeightModule, irreducible, restrict_sl2, tensor, \
    verma_truncated
from .scalars import ExactScalar, ONE, ZERO, quantum_factorial, quantum_integer
from .symbolic import (SymScalar, negate_shift_substitution,
                       weight_substitution)


# -- extremal singular vectors ------------------------------------------


def extremal_exponents(datum, w: WeylElement, lam):
    """The pairs (node, exponent) prescribing the product of lowering powers
    reaching the extremal weight w . lam, via the root chain of a reduced
    word."""
    word = w.reduced_word
    lam_rho = tuple(c + 1 for c in lam)
    out = []
    for j, i_j in enumerate(word):
        alpha = datum.simple_root(i_j)
        for t in range(j + 1, len(word)):
            alpha = WeylElement.simple(datum, word[t]).act(alpha)
        num = 2 * datum.pairing(lam_rho, alpha)
        den = datum.pairing(alpha, alpha)
        n = Fraction(num, 1) / den
        if n.denominator != 1 or n <= 0:
            raise DomainError(f"exponent {n} is not a positive integer")
        out.append((i_j, int(n)))
    return out


def extremal_singular_vector(M: WeightModule, w: WeylElement, lam):
    """The normalized singular vector of weight w . lam in the (truncated)
    Verma module of highest weight lam: apply the prescribed lowering powers
    and divide by the product of quantum factorials."""
    datum = M.datum
    lam = tuple(lam)
    if M.highest_weight != lam:
        raise DomainError("module has a different highest weight")
    exps = extremal_exponents(datum, w, lam)
    total = sum(n * 1 for _, n in exps)
    height_budget = M.truncation_depth
    if height_budget is not None and total > height_budget:
        raise DepthError(f"need depth {total}, module has {height_budget}")
    wt, vec = lam, [ONE]
    for i_j, n_j in reversed(exps):
        for _ in range(n_j):
            wt, vec = M.apply("f", i_j, wt, vec)
            if not vec or not any(vec):
                raise DepthError("lowering fell out of the module")
        step = datum.q_exp * datum.d[i_j]
        vec = [x / quantum_factorial(n_j, step) for x in vec]
    if wt != w.dot(lam):
        raise TheoremViolationError("extremal vector has the wrong weight")
    for i in range(datum.rank):
        _, image = M.apply("e", i, wt, vec)
        if image and any(image):
            raise TheoremViolationError("extremal vector is not singular")
    return wt, vec


# -- rank-one operators -------------------------------------------------


def a_operator_rank1_formula(m: int, lam: int, step: int = 1) -> ExactScalar:
    """(-1)^m prod_{j=1..m} [lam+1+j]/[lam+1-j] at the quantum parameter
    s**step; the scalar of the reflection on the zero weight line of the
    (2m+1)-dimensional module."""
    out = ONE if m % 2 == 0 else -ONE
    for j in range(1, m + 1):
        den = quantum_integer(lam + 1 - j, step)
        if den.is_zero():
            raise PoleError(f"factor [lam+1-{j}] vanishes at lam={lam}")
        out = out * quantum_integer(lam + 1 + j, step) / den
    return out


def _bracket_symbolic(nvars, zindex, step, shift) -> SymScalar:
    """[lam(h_zindex) + shift] at parameter s**step, with Z carrying lam."""
    zpos = [0] * nvars
    zpos[zindex] = step
    zneg = [0] * nvars
    zneg[zindex] = -step
    num = (SymScalar.monomial(nvars, step * shift, zpos)
           - SymScalar.monomial(nvars, -step * shift, zneg))
    den = SymScalar.monomial(nvars, step) - SymScalar.monomial(nvars, -step)
    return num / den


def a_operator_rank1_symbolic(m: int, nvars: int, zindex: int,
                              step: int) -> SymScalar:
    out = SymScalar.one(nvars)
    if m % 2:
        out = -out
    for j in range(1, m + 1):
        out = out * _bracket_symbolic(nvars, zindex, step, 1 + j) \
            / _bracket_symbolic(nvars, zindex, step, 1 - j)
    return out


# -- zero-weight string decomposition -------------------------------------


def sl2_zero_isotypic(R: WeightModule):
    """Decomposition data of the zero weight space of a rank-one module:
    (blocks, columns, inverse) where blocks lists (m, multiplicity) and the
    columns are the images of the even singular vectors under F^m."""
    zw = (0,)
    d0 = R.dims.get(zw, 0)
    if d0 == 0:
        return [], [], []
    cols = []
    blocks = []
    m = 0
    while True:
        wt = (2 * m,)
        if wt not in R.dims and m > 0:
            break
        sing = singular_vectors(R, wt) if wt in R.dims else []
        count = 0
        for svec in sing:
            cur_wt, vec = wt, svec
            ok = True
            for _ in range(m):
                cur_wt, vec = R.apply("f", 0, cur_wt, vec)
                if not vec:
                    ok = False
                    break
            if ok and vec:
                cols.append(vec)
                count += 1
        if count:
            blocks.append((m, count))
        m += 1
        if (2 * m,) not in R.dims:
            break
    if len(cols) != d0:
        raise TheoremViolationError(
            f"string decomposition found {len(cols)} of {d0} directions")
    cmat = [[cols[c][t] for c in range(d0)] for t in range(d0)]
    cinv = mat_inverse(cmat, ONE)
    return blocks, cmat, cinv


def _restriction_cache(V: WeightModule, i: int):
    cache = getattr(V, "_dyn_cache", None)
    if cache is None:
        cache = V._dyn_cache = {}
    if i not in cache:
        R = restrict_sl2(V, i)
        iso = sl2_zero_isotypic(R)
        zw = V.zero_weight()
        positions = [R.index_map[(zw, k)][1] for k in range(V.dims.get(zw, 0))]
        cache[i] = (R, iso, positions)
    return cache[i]


def _blockwise(V, i, scalars, embed=None):
    """Assemble C diag(scalars per block) C^-1 and cut to the ambient zero
    weight block; block scalars are produced by `scalars(m)`."""
    R, (blocks, cmat, cinv), positions = _restriction_cache(V, i)
    d0 = len(cmat)
    if d0 == 0 or not positions:
        return []
    diag = []
    for m, count in blocks:
        diag.extend([scalars(m)] * count)
    if embed is not None:
        cmat = [[embed(x) for x in row] for row in cmat]
        cinv = [[embed(x) for x in row] for row in cinv]
        zero = scalars(0) - scalars(0)
    else:
        zero = ZERO
    scaled = [[diag[c] * cinv[c][t] for t in range(d0)] for c in range(d0)]
    full = mat_mul(cmat, scaled, zero)
    amb = set(positions)
    for p in positions:
        for t in range(d0):
            if t not in amb and full[t][p]:
                raise TheoremViolationError(
                    "reflection operator leaves the ambient zero space")
    return [[full[t][p] for p in positions] for t in positions]


def a_simple(V: WeightModule, i: int, lam) -> list:
    """A_{s_i}(lam) on V[0], blockwise through the rank-one strings with
    argument lam(h_i) and parameter q_i."""
    step = V.datum.q_exp * V.datum.d[i]
    z = lam[i]
    return _blockwise(V, i, lambda m: a_operator_rank1_formula(m, z, step))


def a_simple_symbolic(V: WeightModule, i: int) -> list:
    step = V.datum.q_exp * V.datum.d[i]
    r = V.datum.rank
    return _blockwise(
        V, i, lambda m: a_operator_rank1_symbolic(m, r, i, step),
        embed=lambda x: SymScalar.from_exact(x, r))


def identity_on_zero_space(V: WeightModule):
    _, d0 = zero_weight_block(V)
    return [[ONE if a == b else ZERO for b in range(d0)] for a in range(d0)]


def a_operator_V0(w: WeylElement, V: WeightModule, lam) -> list:
    """A_{w}(lam) on V[0], composed along a reduced word with dot-shifted
    arguments."""
    if w.is_identity():
        return identity_on_zero_space(V)
    word = w.reduced_word
    i = word[0]
    rest = WeylElement.identity(V.datum)
    for t in word[1:]:
        rest = rest * WeylElement.simple(V.datum, t)
    inner = a_operator_V0(rest, V, lam)
    outer = a_simple(V, i, rest.dot(lam))
    return mat_mul(outer, inner, ZERO)


def a_operator_V0_symbolic(w: WeylElement, V: WeightModule) -> list:
    r = V.datum.rank
    if w.is_identity():
        one, zero = SymScalar.one(r), SymScalar.zero(r)
        _, d0 = zero_weight_block(V)
        return [[one if a == b else zero for b in range(d0)]
                for a in range(d0)]
    word = w.reduced_word
    i = word[0]
    rest = WeylElement.identity(V.datum)
    for t in word[1:]:
        rest = rest * WeylElement.simple(V.datum, t)
    inner = a_operator_V0_symbolic(rest, V)
    offs, zmat = weight_substitution(V.datum, rest, dot=True)
    outer = [[x.substitute(offs, zmat) for x in row]
             for row in a_simple_symbolic(V, i)]
    return mat_mul(outer, inner, SymScalar.zero(r))


def unshifted_operator(w: WeylElement, V: WeightModule, lam) -> list:
    """The unshifted variant, the shifted operator at -lam - rho."""
    neg = tuple(-c - 1 for c in lam)
    return a_operator_V0(w, V, neg)


def unshifted_operator_symbolic(w: WeylElement, V: WeightModule) -> list:
    offs, zmat = negate_shift_substitution(V.datum)
    return [[x.substitute(offs, zmat) for x in row]
            for row in a_operator_V0_symbolic(w, V)]


def unshifted_simple_polys(V: WeightModule, i: int):
    """The unshifted simple-reflection operator on V[0] written over a single
    denominator in the formal weight variables: a pair (N, D) with the
    operator equal to N/D, where D and the entries of N carry no Z-variables
    in their denominators (s-denominators may remain).  Grouping by
    Z-monomials then yields exact scalar linear constraints without any
    rational-function reduction."""
    cache = getattr(V, "_dyn_poly_cache", None)
    if cache is None:
        cache = V._dyn_poly_cache = {}
    if i in cache:
        return cache[i]
    r = V.datum.rank
    step = V.datum.q_exp * V.datum.d[i]
    _, (blocks, cmat, cinv), positions = _restriction_cache(V, i)
    offs, zmat = negate_shift_substitution(V.datum)
    scalars = []
    for m, count in blocks:
        x = a_operator_rank1_symbolic(m, r, i, step).substitute(offs, zmat)
        scalars.append((m, count, x))
    dper = {m: x.den for m, _, x in scalars}
    dfull = {(0,) * (r + 1): 1}
    from .symbolic import _pmul as mpmul
    for m, _, x in scalars:
        dfull = mpmul(dfull, x.den)
    diag = []
    for m, count, x in scalars:
        rest = {(0,) * (r + 1): 1}
        for m2, _, x2 in scalars:
            if m2 != m:
                rest = mpmul(rest, x2.den)
        entry = SymScalar(mpmul(x.num, rest), {(0,) * (r + 1): 1}, r,
                          _normalized=True)
        diag.extend([entry] * count)
    d0 = len(cmat)
    zero = SymScalar.zero(r)
    cm = [[SymScalar.from_exact(x, r) for x in row] for row in cmat]
    ci = [[SymScalar.from_exact(x, r) for x in row] for row in cinv]
    scaled = [[diag[c] * ci[c][t] for t in range(d0)] for c in range(d0)]
    full = mat_mul(cm, scaled, zero)
    amb = positions
    nmat = [[full[t][p] for p in amb] for t in amb]
    dsym = SymScalar(dfull, {(0,) * (r + 1): 1}, r, _normalized=True)
    cache[i] = (nmat, dsym)
    return cache[i]


# -- direct definition through Verma modules ------------------------------


def verma_intertwiner(M: WeightModule, V: WeightModule, T: WeightModule,
                      v) -> Intertwiner:
    """The intertwiner M -> M x V with expectation value v, requiring the
    solve to be unique (generic highest weight)."""
    mu = M.highest_weight
    zw, d0 = zero_weight_block(V)
    if len(v) != d0:
        raise DomainError("expectation value must live in V[0]")
    sing = singular_vectors(T, mu)
    positions = [T.pair_index[(mu, 0, zw, j)][1] for j in range(d0)]
    block = [[s[p] for s in sing] for p in positions]
    if sing and kernel_basis(block, len(sing), ONE):
        raise GenericityError("expectation values do not separate the solve")
    coeffs = solve_right(block, list(v), ONE)
    if coeffs is None:
        raise GenericityError("no Verma intertwiner with this value")
    vec = [ZERO] * T.dims[mu]
    for c, s in zip(coeffs, sing):
        if c:
            vec = [a + c * b for a, b in zip(vec, s)]
    return Intertwiner(M, V, T, vec)


def a_operator_direct(w: WeylElement, V: WeightModule, lam,
                      depth: int) -> list:
    """A_{w}(lam) on V[0] read off from Verma intertwiners: the leading
    block of the image of the extremal singular vector."""
    datum = V.datum
    lam = tuple(lam)
    M = verma_truncated(datum, lam, depth)
    T = tensor(M, V)
    ext_wt, ext_vec = extremal_singular_vector(M, w, lam)
    zw, d0 = zero_weight_block(V)
    lead = next(b for b, x in enumerate(ext_vec) if x)
    columns = []
    for j in range(d0):
        v = [ONE if t == j else ZERO for t in range(d0)]
        phi = verma_intertwiner(M, V, T, v)
        image = mat_vec(phi.matrices()[ext_wt], ext_vec, ZERO)
        block = [[ZERO] * d0 for _ in range(M.dims[ext_wt])]
        for key, (tot, pos) in T.pair_index.items():
            if tot != ext_wt:
                continue
            wm, im, wn, jn = key
            if wm == ext_wt and wn == zw:
                block[im][jn] = image[pos]
        col = [block[lead][t] / ext_vec[lead] for t in range(d0)]
        # the whole leading block must be the outer product with the
        # extremal direction; anything else breaks the defining expansion
        for b in range(M.dims[ext_wt]):
            for t in range(d0):
                if block[b][t] != ext_vec[b] * col[t]:
                    raise TheoremViolationError(
                        "leading block is not a multiple of the extremal vector")
        columns.append(col)
    return [[columns[c][t] for c in range(d0)] for t in range(d0)]


def a_operator_rank1_direct(m: int, lam: int, depth: int) -> ExactScalar:
    """Rank-one direct computation; the independent oracle for the product
    formula."""
    from .cartan import build_cartan_datum
    if depth < lam + 1:
        raise DepthError("depth must reach the extremal weight")
    datum = build_cartan_datum("A", 1)
    V = irreducible(datum, (2 * m,))
    s = WeylElement.simple(datum, 0)
    mat = a_operator_direct(s, V, (lam,), depth)
    return mat[0][0]
