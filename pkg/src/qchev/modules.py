"""Type-I category-O weight modules at integral weights.

Construction strategy.  The negative nilpotent half acts on every Verma
module by left multiplication in a way that does not depend on the highest
weight, so its structure constants are computed once per Cartan datum: we
run the module relations inside the Verma module with highest weight -rho,
where the contravariant form is nondegenerate on every weight space (no
weight there satisfies the reducibility criterion), hence no weight space
contains a singular vector and joint E-kernels vanish.  That makes the map
"apply all raising operators" injective, so Gaussian elimination on raising
images both selects a basis of F-monomial words (lexicographically smallest
independent words, giving deterministic bases) and expresses every other
word in it.  The resulting straightening table is reused verbatim for every
highest weight; only the raising operators depend on the weight, through the
commutator [E_i, F_j] = delta_ij [nu(h_i)]_{q_i} id.

A truncated Verma keeps the weight spaces within a fixed height of the top;
its lowering operators are cut at the boundary (mapping into a missing space
gives zero), which is where and why the defining relations visibly fail.
Irreducible quotients are cut out by the radical of the contravariant form,
computed exactly per weight space.
"""

from __future__ import annotations

from fractions import Fraction

from .cartan import CartanDatum, rank_one_datum
from .errors import DepthError, DomainError
from .linalg import kernel_basis, mat_mul, mat_vec, rref
from .scalars import (ExactScalar, ONE, ZERO, qpow, quantum_factorial,
                      quantum_integer, to_string)


def _sub_e(beta, i):
    out = list(beta)
    out[i] -= 1
    return tuple(out)


def _add_e(beta, i):
    out = list(beta)
    out[i] += 1
    return tuple(out)


def _zero_vec(n):
    return [ZERO] * n


class NilpotentBasis:
    """Monomial basis and straightening data for the lowering half.

    words[beta]       basis words (tuples of node indices) at root-drop beta;
                      a word (i, rest) stands for F_i applied to rest.
    word_parent[beta] aligned list of (i, index of rest in words[beta - e_i]).
    fmat[(i, beta)]   matrix of left multiplication by F_i from the basis of
                      beta to the basis of beta + e_i.
    """

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.depth = 0
        origin = (0,) * datum.rank
        self.words = {origin: [()]}
        self.word_parent = {origin: []}
        self.fmat = {}
        self._lam_star = (-1,) * datum.rank
        self._emat_star = {}

    # -- raising-operator recursion ------------------------------------

    def _bracket(self, lam, beta, i):
        """[nu(h_i)]_{q_i} for nu = lam - sum beta_k alpha_k."""
        datum = self.datum
        nu_hi = lam[i] - sum(datum.matrix[i][k] * beta[k]
                             for k in range(datum.rank))
        return quantum_integer(nu_hi, datum.q_exp * datum.d[i])

    def _raise_word(self, j, beta, i, b_idx, lam, emat):
        """E_j applied to the word F_i . b at space beta, as a vector over
        the basis of beta - e_j (which must be a valid nonzero space)."""
        prev = _sub_e(beta, i)
        target = _sub_e(beta, j)
        out = _zero_vec(len(self.words[target]))
        up = _sub_e(prev, j)
        if min(up) >= 0 and (j, prev) in emat:
            col = [row[b_idx] for row in emat[(j, prev)]]
            fm = self.fmat.get((i, up))
            if fm is not None:
                lifted = mat_vec(fm, col, ZERO)
                out = [a + b for a, b in zip(out, lifted)]
        if i == j:
            coeff = self._bracket(lam, prev, i)
            if coeff:
                out[b_idx] = out[b_idx] + coeff
        return out

    # -- construction ----------------------------------------------------

    def extend(self, depth: int):
        datum = self.datum
        r = datum.rank
        while self.depth < depth:
            k = self.depth + 1
            parents = [b for b in self.words if sum(b) == k - 1]
            betas = sorted({_add_e(b, i) for b in parents for i in range(r)})
            for beta in betas:
                self._build_space(beta)
            self.depth = k

    def _build_space(self, beta):
        datum = self.datum
        r = datum.rank
        cands = []
        for i in range(r):
            prev = _sub_e(beta, i)
            if min(prev) >= 0 and prev in self.words:
                for b_idx, bw in enumerate(self.words[prev]):
                    cands.append(((i,) + bw, i, b_idx))
        cands.sort()
        targets = [j for j in range(r)
                   if min(_sub_e(beta, j)) >= 0 and _sub_e(beta, j) in self.words]
        offs, total = {}, 0
        for j in targets:
            offs[j] = total
            total += len(self.words[_sub_e(beta, j)])

        pivots = []  # (pivot_col, echelon vector, combo over selected)
        sel_words, sel_parents, raw_vectors = [], [], []
        expansions = {}
        for word, i, b_idx in cands:
            vec = _zero_vec(total)
            for j in targets:
                block = self._raise_word(j, beta, i, b_idx,
                                         self._lam_star, self._emat_star)
                for t, x in enumerate(block):
                    if x:
                        vec[offs[j] + t] = x
            raw = list(vec)
            combo = {}
            for pc, pvec, pcombo in pivots:
                f = vec[pc]
                if f:
                    vec = [a - f * b for a, b in zip(vec, pvec)]
                    for u, c in pcombo.items():
                        s = combo.get(u, ZERO) + f * c
                        combo[u] = s
            lead = next((c for c, x in enumerate(vec) if x), None)
            if lead is None:
                # E-separation: the word equals this combination of the
                # already selected basis words
                expansions[word] = combo
            else:
                sel_idx = len(sel_words)
                ld = vec[lead]
                nvec = [x / ld for x in vec]
                ncombo = {u: -c / ld for u, c in combo.items() if c}
                ncombo[sel_idx] = ONE / ld
                pivots.append((lead, nvec, ncombo))
                pivots.sort(key=lambda p: p[0])
                sel_words.append(word)
                sel_parents.append((i, b_idx))
                raw_vectors.append(raw)
                expansions[word] = {sel_idx: ONE}

        self.words[beta] = sel_words
        self.word_parent[beta] = sel_parents
        for i in range(self.datum.rank):
            prev = _sub_e(beta, i)
            if min(prev) >= 0 and prev in self.words:
                cols = []
                for bw in self.words[prev]:
                    exp = expansions[(i,) + bw]
                    cols.append([exp.get(t, ZERO) for t in range(len(sel_words))])
                self.fmat[(i, prev)] = [[cols[c][t] for c in range(len(cols))]
                                        for t in range(len(sel_words))]
        for j in targets:
            tdim = len(self.words[_sub_e(beta, j)])
            self._emat_star[(j, beta)] = [
                [raw_vectors[c][offs[j] + t] for c in range(len(sel_words))]
                for t in range(tdim)]

    # -- per-weight raising operators -------------------------------------

    def e_matrices(self, lam, depth):
        """All raising matrices of the Verma with highest weight lam, keyed
        by (node, root drop), down to the given height."""
        self.extend(depth)
        emat = {}
        spaces = sorted((b for b in self.words if 0 < sum(b) <= depth),
                        key=lambda b: (sum(b), b))
        for beta in spaces:
            parents = self.word_parent[beta]
            for j in range(self.datum.rank):
                target = _sub_e(beta, j)
                if min(target) < 0 or target not in self.words:
                    continue
                cols = [self._raise_word(j, beta, i, b_idx, lam, emat)
                        for (i, b_idx) in parents]
                emat[(j, beta)] = [[cols[c][t] for c in range(len(cols))]
                                   for t in range(len(self.words[target]))]
        return emat


_BUILDERS: dict[CartanDatum, NilpotentBasis] = {}


def nilpotent_basis(datum) -> NilpotentBasis:
    if datum not in _BUILDERS:
        _BUILDERS[datum] = NilpotentBasis(datum)
    return _BUILDERS[datum]


def _weight_sort_key(wt):
    return tuple(-c for c in wt)


class WeightModule:
    """Weight-graded space with raising/lowering matrices per node.

    e_ops[(i, wt)] maps the wt basis to the wt + alpha_i basis; f_ops
    likewise downward.  Missing spaces mean zero for complete modules and
    "cut by truncation" for truncated Vermas.  basis_words and build_steps
    describe each basis vector as F_i applied to an explicit vector one
    level up, which is what lets intertwiners extend along the module.
    """

    def __init__(self, datum, dims, e_ops, f_ops, *, complete,
                 highest_weight=None, truncation_depth=None,
                 basis_words=None, build_steps=None):
        self.datum = datum
        self.dims = dims
        self.e_ops = e_ops
        self.f_ops = f_ops
        self.complete = complete
        self.highest_weight = highest_weight
        self.truncation_depth = truncation_depth
        self.basis_words = basis_words
        self.build_steps = build_steps
        self.weight_order = sorted(dims, key=_weight_sort_key)
        self._offsets = {}
        total = 0
        for wt in self.weight_order:
            self._offsets[wt] = total
            total += dims[wt]
        self.total_dim = total
        self._gram = {}

    def dim(self, wt):
        return self.dims.get(tuple(wt), 0)

    def weights(self):
        return list(self.weight_order)

    def basis_enumeration(self):
        return [(wt, k) for wt in self.weight_order
                for k in range(self.dims[wt])]

    def offset(self, wt):
        return self._offsets[tuple(wt)]

    def zero_weight(self):
        return (0,) * self.datum.rank

    def shift_weight(self, wt, i, up=True):
        alpha = self.datum.simple_root(i)
        sign = 1 if up else -1
        return tuple(a + sign * b for a, b in zip(wt, alpha))

    def op_matrix(self, which, i, wt):
        """Matrix of E_i or F_i out of wt, or None when the target is absent."""
        ops = self.e_ops if which == "e" else self.f_ops
        key = (i, tuple(wt))
        if key in ops:
            return ops[key]
        target = self.shift_weight(wt, i, up=(which == "e"))
        if tuple(wt) in self.dims and target in self.dims:
            # both spaces exist but no stored matrix: genuine zero map
            return [[ZERO] * self.dims[tuple(wt)]
                    for _ in range(self.dims[target])]
        return None

    def apply(self, which, i, wt, vec):
        """Apply E_i/F_i to a vector at wt; returns (target_wt, vector or [])."""
        target = self.shift_weight(wt, i, up=(which == "e"))
        mat = self.op_matrix(which, i, wt)
        if mat is None or target not in self.dims:
            return target, []
        return target, mat_vec(mat, vec, ZERO)

    def __repr__(self):
        hw = f", hw={self.highest_weight}" if self.highest_weight else ""
        return f"WeightModule(dim={self.total_dim}{hw})"


def verma_truncated(datum, lam, depth: int) -> WeightModule:
    """Verma module with highest weight lam, cut below height `depth`."""
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    builder = nilpotent_basis(datum)
    builder.extend(depth)
    emat = builder.e_matrices(lam, depth)

    def wt_of(beta):
        return tuple(lam[j] - sum(datum.matrix[j][k] * beta[k]
                                  for k in range(datum.rank))
                     for j in range(datum.rank))

    spaces = [b for b in builder.words if sum(b) <= depth]
    dims, e_ops, f_ops, basis_words, build_steps = {}, {}, {}, {}, {}
    for beta in spaces:
        wt = wt_of(beta)
        words = builder.words[beta]
        dims[wt] = len(words)
        basis_words[wt] = list(words)
        steps = []
        for (i, b_idx) in builder.word_parent[beta]:
            up_dim = len(builder.words[_sub_e(beta, i)])
            vec = _zero_vec(up_dim)
            vec[b_idx] = ONE
            steps.append([(i, vec)])
        build_steps[wt] = steps
    for beta in spaces:
        wt = wt_of(beta)
        for i in range(datum.rank):
            if (i, beta) in emat:
                e_ops[(i, wt)] = emat[(i, beta)]
            up = _add_e(beta, i)
            if sum(up) <= depth and (i, beta) in builder.fmat:
                f_ops[(i, wt)] = builder.fmat[(i, beta)]
    return WeightModule(datum, dims, e_ops, f_ops, complete=False,
                        highest_weight=tuple(lam), truncation_depth=depth,
                        basis_words=basis_words, build_steps=build_steps)


def contravariant_form(M: WeightModule, nu):
    """Gram matrix at weight nu of the bilinear form with <m, m> = 1 on the
    highest-weight vector and <F_i x, y> = <x, E_i y>."""
    nu = tuple(nu)
    if M.highest_weight is None or M.build_steps is None:
        raise DomainError("module carries no highest-weight word structure")
    if nu not in M.dims:
        raise DomainError(f"{nu} is not a weight of the module")
    if nu in M._gram:
        return M._gram[nu]
    if nu == M.highest_weight:
        gram = [[ONE]]
        M._gram[nu] = gram
        return gram
    d = M.dims[nu]
    steps = M.build_steps[nu]
    gram = [[ZERO] * d for _ in range(d)]
    for a in range(d):
        # w_a = sum_s F_{i_s} x_s, so <w_a, y> = sum_s <x_s, E_{i_s} y>
        for i_s, x_s in steps[a]:
            up = M.shift_weight(nu, i_s, up=True)
            gram_up = contravariant_form(M, up)
            emat = M.op_matrix("e", i_s, nu)
            partial = mat_vec(gram_up, x_s, ZERO)
            for b in range(d):
                acc = gram[a][b]
                for c in range(len(partial)):
                    x = emat[c][b]
                    if x:
                        acc = acc + partial[c] * x
                gram[a][b] = acc
    M._gram[nu] = gram
    return gram


# Above this Verma depth, higher-rank irreducibles are assembled as the
# highest-weight component of a tensor product instead; straightening a very
# deep Verma is exact but much slower than generating the submodule directly.
IRREDUCIBLE_VERMA_DEPTH_LIMIT = 9


def irreducible(datum, lam, extra_depth: int = 1) -> WeightModule:
    """Finite-dimensional simple module of dominant integral highest weight."""
    lam = tuple(lam)
    if not datum.is_dominant(lam):
        raise DomainError(f"{lam} is not dominant")
    from .cartan import longest_element
    w0 = longest_element(datum)
    depth = datum.height_drop(lam, w0.act(lam)) + extra_depth
    if datum.rank > 1 and depth > IRREDUCIBLE_VERMA_DEPTH_LIMIT:
        return _irreducible_cartan_component(datum, lam)
    return _irreducible_from_verma(datum, lam, depth)


def _irreducible_from_verma(datum, lam, depth) -> WeightModule:
    """Quotient of a truncated Verma by the radical of the contravariant
    form, computed weight space by weight space."""
    M = verma_truncated(datum, lam, depth)

    surviving, proj = {}, {}
    for wt in M.weight_order:
        gram = contravariant_form(M, wt)
        d = M.dims[wt]
        radical = kernel_basis(gram, d, ONE)
        red, pivots = rref(radical)
        pivot_set = set(pivots)
        keep = [c for c in range(d) if c not in pivot_set]
        if not keep:
            continue
        # projection along the radical: pivot coordinates rewrite into kept ones
        pmat = [[ZERO] * d for _ in range(len(keep))]
        for t, c in enumerate(keep):
            pmat[t][c] = ONE
        for row, pc in zip(red, pivots):
            for t, c in enumerate(keep):
                if row[c]:
                    pmat[t][pc] = ZERO - row[c]
        surviving[wt] = keep
        proj[wt] = pmat

    dims = {wt: len(keep) for wt, keep in surviving.items()}
    e_ops, f_ops, basis_words, build_steps = {}, {}, {}, {}
    for wt, keep in surviving.items():
        basis_words[wt] = [M.basis_words[wt][c] for c in keep]
        steps = []
        if wt != lam:
            for c in keep:
                [(i, pvec)] = M.build_steps[wt][c]
                up = M.shift_weight(wt, i, up=True)
                # a surviving word has a surviving parent space: its class is
                # F_i of the parent's class, which would vanish otherwise
                assert up in surviving
                steps.append([(i, mat_vec(proj[up], pvec, ZERO))])
        build_steps[wt] = steps
        for which, store in (("e", e_ops), ("f", f_ops)):
            for i in range(datum.rank):
                target = M.shift_weight(wt, i, up=(which == "e"))
                if target not in surviving:
                    continue
                big = M.op_matrix(which, i, wt)
                if big is None:
                    continue
                cols = [[big[rr][c] for rr in range(len(big))] for c in keep]
                mat = [[cols[cc][rr] for cc in range(len(keep))]
                       for rr in range(len(big))]
                store[(i, wt)] = mat_mul(proj[target], mat, ZERO)
    return WeightModule(datum, dims, e_ops, f_ops, complete=True,
                        highest_weight=lam, basis_words=basis_words,
                        build_steps=build_steps)


def _rref_with_combos(rows):
    """Row reduce, tracking each echelon row as a combination of the input
    rows.  Returns (echelon_rows, pivot_columns, combos)."""
    if not rows:
        return [], [], []
    n = len(rows[0])
    work = [list(r) + [ONE if t == s else ZERO for t in range(len(rows))]
            for s, r in enumerate(rows)]
    red, pivots = rref(work)
    pivots = [p for p in pivots if p < n]
    out_rows = [red[t][:n] for t in range(len(pivots))]
    combos = [red[t][n:] for t in range(len(pivots))]
    return out_rows, pivots, combos


def _irreducible_cartan_component(datum, lam) -> WeightModule:
    """L(lam) as the submodule generated by the product of highest-weight
    vectors inside L(lam - omega_k) x L(omega_k)."""
    k = lam.index(max(lam))
    rest = tuple(c - (1 if j == k else 0) for j, c in enumerate(lam))
    omega = tuple(1 if j == k else 0 for j in range(datum.rank))
    L1 = irreducible(datum, rest)
    L2 = irreducible(datum, omega)
    T = tensor(L1, L2)
    _, top_pos = T.pair_index[(rest, 0, omega, 0)]
    top = _unit(T.dims[lam], top_pos)
    sub = _generated_submodule(T, lam, top)
    return sub


def _generated_submodule(T: WeightModule, top_wt, top_vec) -> WeightModule:
    """Highest-weight submodule of T generated by a singular vector.

    Weight spaces are spanned by lowering the bases one level up; reduced
    echelon bases make membership a pivot-coordinate lookup, which gives the
    induced operator matrices without solving any further systems.
    """
    datum = T.datum
    top_wt = tuple(top_wt)
    basis = {top_wt: [list(top_vec)]}
    pivots = {top_wt: [next(c for c, x in enumerate(top_vec) if x)]}
    build_steps = {top_wt: []}
    level = [top_wt]
    while level:
        nxt = set()
        for wt in level:
            for i in range(datum.rank):
                down = T.shift_weight(wt, i, up=False)
                if down in T.dims and down not in basis:
                    nxt.add(down)
        nxt = sorted(nxt, key=_weight_sort_key)
        level = []
        for wt in nxt:
            span, srcs = [], []
            for i in range(datum.rank):
                up = T.shift_weight(wt, i, up=True)
                if up not in basis:
                    continue
                fmat = T.op_matrix("f", i, up)
                if fmat is None:
                    continue
                for t, bvec in enumerate(basis[up]):
                    span.append(mat_vec(fmat, bvec, ZERO))
                    srcs.append((i, up, t))
            if not span:
                continue
            rows, pcols, combos = _rref_with_combos(span)
            if not rows:
                continue
            basis[wt] = rows
            pivots[wt] = pcols
            steps = []
            for combo in combos:
                per_node = {}
                for s, c in enumerate(combo):
                    if c:
                        i, up, t = srcs[s]
                        vec = per_node.setdefault(i, _zero_vec(len(basis[up])))
                        vec[t] = vec[t] + c
                steps.append(sorted(per_node.items()))
            build_steps[wt] = steps
            level.append(wt)

    def express(wt, vec):
        coeffs = [vec[pc] for pc in pivots[wt]]
        check = _zero_vec(len(vec))
        for c, row in zip(coeffs, basis[wt]):
            if c:
                check = [a + c * b for a, b in zip(check, row)]
        assert check == list(vec), "vector left the generated submodule"
        return coeffs

    dims = {wt: len(rows) for wt, rows in basis.items()}
    e_ops, f_ops = {}, {}
    for wt, rows in basis.items():
        for which, store in (("e", e_ops), ("f", f_ops)):
            target = None
            for i in range(datum.rank):
                target = T.shift_weight(wt, i, up=(which == "e"))
                if target not in dims:
                    continue
                cols = []
                for bvec in rows:
                    _, img = T.apply(which, i, wt, bvec)
                    if not img:
                        cols.append(_zero_vec(dims[target]))
                    else:
                        cols.append(express(target, img))
                store[(i, wt)] = [[cols[c][t] for c in range(len(cols))]
                                  for t in range(dims[target])]
    return WeightModule(datum, dims, e_ops, f_ops, complete=True,
                        highest_weight=top_wt, build_steps=build_steps)


def tensor(M: WeightModule, N: WeightModule) -> WeightModule:
    """Tensor product module, raising by E_i x q_i^{h_i} + 1 x E_i and
    lowering by F_i x 1 + q_i^{-h_i} x F_i."""
    if M.datum != N.datum:
        raise DomainError("tensor factors live over different Cartan data")
    datum = M.datum
    pairs = {}
    for wm in M.weight_order:
        for wn in N.weight_order:
            tot = tuple(a + b for a, b in zip(wm, wn))
            pairs.setdefault(tot, []).append((wm, wn))
    index = {}
    dims = {}
    for tot, blocks in pairs.items():
        pos = 0
        for (wm, wn) in blocks:
            for im in range(M.dims[wm]):
                for jn in range(N.dims[wn]):
                    index[(wm, im, wn, jn)] = (tot, pos)
                    pos += 1
        dims[tot] = pos

    e_ops, f_ops = {}, {}
    for tot, blocks in pairs.items():
        for i in range(datum.rank):
            step = datum.q_exp * datum.d[i]
            for which in ("e", "f"):
                up = which == "e"
                target = tuple(a + (1 if up else -1) * b
                               for a, b in zip(tot, datum.simple_root(i)))
                if target not in dims:
                    continue
                mat = [[ZERO] * dims[tot] for _ in range(dims[target])]
                wrote = False
                for (wm, wn) in blocks:
                    for im in range(M.dims[wm]):
                        for jn in range(N.dims[wn]):
                            _, col = index[(wm, im, wn, jn)]
                            if which == "e":
                                tm, va = M.apply("e", i, wm, _unit(M.dims[wm], im))
                                if va:
                                    scale = qpow(step * wn[i])
                                    for c, x in enumerate(va):
                                        if x:
                                            _, row = index[(tm, c, wn, jn)]
                                            mat[row][col] = mat[row][col] + x * scale
                                            wrote = True
                                tn, vb = N.apply("e", i, wn, _unit(N.dims[wn], jn))
                                if vb:
                                    for c, x in enumerate(vb):
                                        if x:
                                            _, row = index[(wm, im, tn, c)]
                                            mat[row][col] = mat[row][col] + x
                                            wrote = True
                            else:
                                tm, va = M.apply("f", i, wm, _unit(M.dims[wm], im))
                                if va:
                                    for c, x in enumerate(va):
                                        if x:
                                            _, row = index[(tm, c, wn, jn)]
                                            mat[row][col] = mat[row][col] + x
                                            wrote = True
                                tn, vb = N.apply("f", i, wn, _unit(N.dims[wn], jn))
                                if vb:
                                    scale = qpow(-step * wm[i])
                                    for c, x in enumerate(vb):
                                        if x:
                                            _, row = index[(wm, im, tn, c)]
                                            mat[row][col] = mat[row][col] + x * scale
                                            wrote = True
                if wrote or (M.complete and N.complete):
                    (e_ops if which == "e" else f_ops)[(i, tot)] = mat
    out = WeightModule(datum, dims, e_ops, f_ops,
                       complete=M.complete and N.complete)
    out.pair_index = index
    out.pair_blocks = pairs
    return out


def _unit(n, k):
    v = _zero_vec(n)
    v[k] = ONE
    return v


class RelationReport:
    """Findings of the defining-relation checker."""

    def __init__(self):
        self.violations = []

    def add(self, wt, kind, detail):
        self.violations.append({"weight": list(wt), "relation": kind,
                                "detail": detail})

    @property
    def clean(self):
        return not self.violations

    def weights(self):
        return {tuple(v["weight"]) for v in self.violations}

    def __repr__(self):
        return f"RelationReport(violations={len(self.violations)})"


def _compose(M, wt, steps):
    """Compose E/F steps (applied left to right) out of weight wt; absent
    spaces give zero maps.  Returns (target_wt, matrix)."""
    src_dim = M.dims[tuple(wt)]
    cur = tuple(wt)
    mat = None
    for pos, (which, i) in enumerate(steps):
        target = M.shift_weight(cur, i, up=(which == "e"))
        step_mat = M.op_matrix(which, i, cur)
        if step_mat is None or target not in M.dims:
            final = target
            for w2, i2 in steps[pos + 1:]:
                final = M.shift_weight(final, i2, up=(w2 == "e"))
            fdim = M.dims.get(final, 0)
            return final, [[ZERO] * src_dim for _ in range(fdim)]
        mat = step_mat if mat is None else mat_mul(step_mat, mat, ZERO)
        cur = target
    return cur, mat if mat is not None else None


def check_relations(M: WeightModule) -> RelationReport:
    """Verify the commutator and Serre relations on every weight space."""
    datum = M.datum
    report = RelationReport()
    for wt in M.weight_order:
        d = M.dims[wt]
        for i in range(datum.rank):
            for j in range(datum.rank):
                _, ef = _compose(M, wt, [("f", j), ("e", i)])
                _, fe = _compose(M, wt, [("e", i), ("f", j)])
                if len(ef) != len(fe) or (ef and len(ef[0]) != len(fe[0])):
                    report.add(wt, "commutator-shape", {"i": i, "j": j})
                    continue
                expected = (quantum_integer(wt[i], datum.q_exp * datum.d[i])
                            if i == j else ZERO)
                ok = True
                for a in range(len(ef)):
                    for b in range(d):
                        diff = ef[a][b] - fe[a][b]
                        want = expected if (i == j and a == b) else ZERO
                        if diff != want:
                            ok = False
                if not ok:
                    report.add(wt, "commutator", {"i": i, "j": j})
        for i in range(datum.rank):
            for j in range(datum.rank):
                if i == j:
                    continue
                n = 1 - datum.matrix[i][j]
                step = datum.q_exp * datum.d[i]
                for which in ("e", "f"):
                    total = None
                    for k in range(n + 1):
                        # X_i^{n-k} X_j X_i^k applies the rightmost factor first
                        ops = ([(which, i)] * k + [(which, j)]
                               + [(which, i)] * (n - k))
                        _, mat = _compose(M, wt, ops)
                        coeff = (Fraction(-1) ** k
                                 / (quantum_factorial(k, step)
                                    * quantum_factorial(n - k, step)))
                        term = [[coeff * x for x in row] for row in mat]
                        if total is None:
                            total = term
                        else:
                            total = [[a + b for a, b in zip(r1, r2)]
                                     for r1, r2 in zip(total, term)]
                    if total and any(x for row in total for x in row):
                        report.add(wt, f"serre-{which}", {"i": i, "j": j})
    return report


def restrict_sl2(M: WeightModule, i: int) -> WeightModule:
    """View M through the rank-one subalgebra at node i: weights regrade by
    nu -> nu(h_i) and the quantum parameter becomes q_i."""
    datum = M.datum
    sub = rank_one_datum(datum.q_exp * datum.d[i])
    groups = {}
    for wt in M.weight_order:
        groups.setdefault((wt[i],), []).append(wt)
    index_map = {}
    dims = {}
    for c, wts in groups.items():
        pos = 0
        for wt in wts:
            for k in range(M.dims[wt]):
                index_map[(wt, k)] = (c, pos)
                pos += 1
        dims[c] = pos
    e_ops, f_ops = {}, {}
    for c, wts in groups.items():
        for which in ("e", "f"):
            upshift = 2 if which == "e" else -2
            target = (c[0] + upshift,)
            if target not in dims:
                continue
            mat = [[ZERO] * dims[c] for _ in range(dims[target])]
            for wt in wts:
                big = M.op_matrix(which, i, wt)
                twt = M.shift_weight(wt, i, up=(which == "e"))
                if big is None or twt not in M.dims:
                    continue
                for k in range(M.dims[wt]):
                    _, col = index_map[(wt, k)]
                    for t in range(M.dims[twt]):
                        x = big[t][k]
                        if x:
                            _, row = index_map[(twt, t)]
                            mat[row][col] = x
            (e_ops if which == "e" else f_ops)[(0, c)] = mat
    out = WeightModule(sub, dims, e_ops, f_ops, complete=M.complete)
    out.index_map = index_map
    return out


def module_to_json(M: WeightModule, q_exp=None):
    q_exp = q_exp if q_exp is not None else M.datum.q_exp
    data = {
        "cartan": M.datum.type_name,
        "weights": [{"weight": list(wt), "dim": M.dims[wt]}
                    for wt in M.weight_order],
        "operators": [],
    }
    if M.highest_weight is not None:
        data["highest_weight"] = list(M.highest_weight)
    for which, ops in (("E", M.e_ops), ("F", M.f_ops)):
        for (i, wt) in sorted(ops, key=lambda key: (key[0], _weight_sort_key(key[1]))):
            mat = ops[(i, wt)]
            data["operators"].append({
                "kind": which, "node": i, "weight": list(wt),
                "matrix": [[to_string(x, q_exp) for x in row] for row in mat],
            })
    return data
