"""The restriction map to the torus, its image conditions, and the
constructive inverse.

A module map L -> L x V restricts to the weighted trace sum_nu e^nu tr_nu,
a torus function with coefficients in the zero weight space of V.  Such
functions are cut out by three checkable conditions: zero-weight values,
invariance under the unshifted dynamical reflection operators (simple
reflections suffice, the cocycle handles the rest), and exact divisibility
of raised functions by q-shifted string factors.  Conversely any function
passing the checks is peeled into trace summands by walking extremal points
of its weight diagram, which is the decomposition procedure implemented
here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import WeylElement, dominant_representative
from .dynamical import (a_operator_rank1_formula, unshifted_simple_polys,
                        verma_intertwiner)
from .errors import (ConditionError, DomainError, GenericityError,
                     TheoremViolationError)
from .intertwiners import (Intertwiner, admissible_expectations,
                           intertwiner_from_expectation, singular_vectors,
                           zero_weight_block)
from .linalg import mat_vec, rank, rref
from .modules import WeightModule, irreducible, restrict_sl2, tensor, \
    verma_truncated
from .scalars import ExactScalar, ONE, ZERO, to_string
from .symbolic import SymScalar, weight_substitution, z_components
from .torus import (TorusFunction, divide_by_qstring, e_action,
                    evaluate_symbolic, hull_vertices, nilpotency_degree,
                    weight_diagram)


class Workspace:
    """Per-datum cache of modules, tensor pairs and trace bases."""

    def __init__(self, datum):
        self.datum = datum
        self._irr = {}
        self._pairs = {}
        self._traces = {}

    def irreducible(self, lam) -> WeightModule:
        lam = tuple(lam)
        if lam not in self._irr:
            self._irr[lam] = irreducible(self.datum, lam)
        return self._irr[lam]

    def pair(self, mu, V):
        key = (tuple(mu), id(V))
        if key not in self._pairs:
            L = self.irreducible(mu)
            self._pairs[key] = (L, tensor(L, V))
        return self._pairs[key]

    def trace_basis(self, mu, V):
        """For each admissible expectation basis vector of Hom(L_mu, L_mu x V),
        the intertwiner and its weighted trace."""
        key = (tuple(mu), id(V))
        if key not in self._traces:
            mu = tuple(mu)
            L, T = self.pair(mu, V)
            out = []
            for v in admissible_expectations(mu, V):
                phi = intertwiner_from_expectation(mu, V, v, L=L, T=T)
                out.append((v, phi, res_trace(phi)))
            self._traces[key] = out
        return self._traces[key]


def res_trace(phi: Intertwiner) -> TorusFunction:
    """The weighted trace of an intertwiner: for every weight of the source,
    the diagonal block of the map contributes its partial trace, landing in
    V[0] for weight reasons."""
    L, V, T = phi.L, phi.V, phi.T
    datum = L.datum
    mats = phi.matrices()
    zw, d0 = zero_weight_block(V)
    terms = {}
    for nu in L.weight_order:
        mat = mats[nu]
        acc = [ZERO] * d0
        hit = False
        for b in range(L.dims[nu]):
            for j in range(d0):
                pos = T.pair_index[(nu, b, zw, j)][1]
                x = mat[pos][b]
                if x:
                    acc[j] = acc[j] + x
                    hit = True
        if hit and any(acc):
            terms[nu] = acc
    return TorusFunction.from_zero_block_terms(datum, V, terms)


# -- the three conditions ---------------------------------------------------


@dataclass
class ConditionReport:
    zero_weight_ok: bool
    zero_weight_offenders: list
    dynamical: dict
    dynamical_witnesses: dict
    divisibility: dict
    divisibility_witnesses: dict

    def passed(self) -> bool:
        return (self.zero_weight_ok and all(self.dynamical.values())
                and all(self.divisibility.values()))

    def first_failure(self):
        if not self.zero_weight_ok:
            return f"zero-weight condition: offenders {self.zero_weight_offenders[:3]}"
        for i, ok in sorted(self.dynamical.items()):
            if not ok:
                return f"dynamical invariance fails at node {i}"
        for key, ok in sorted(self.divisibility.items()):
            if not ok:
                return f"string divisibility fails at (node, power) = {key}"
        return None

    def to_json(self):
        return {
            "zero_weight": {
                "ok": self.zero_weight_ok,
                "offenders": [{"weight": list(w), "position": p}
                              for w, p in self.zero_weight_offenders],
            },
            "dynamical_invariance": {
                str(i): {"ok": ok,
                         "witness": self.dynamical_witnesses.get(i)}
                for i, ok in sorted(self.dynamical.items())},
            "divisibility": {
                f"{i},{n}": {"ok": ok,
                             "witness": self.divisibility_witnesses.get((i, n))}
                for (i, n), ok in sorted(self.divisibility.items())},
            "passed": self.passed(),
        }


def check_conditions(f: TorusFunction) -> ConditionReport:
    """Run the three membership checks; condition two is verified as an
    identity of rational functions of the formal weight, per simple
    reflection (sufficient via the cocycle)."""
    datum = f.datum
    V = f.target
    offenders = f.coefficients_outside_zero_weight()
    zero_ok = not offenders

    dyn, dyn_wit = {}, {}
    if zero_ok:
        r = datum.rank
        sym = evaluate_symbolic(f)
        pos = f.zero_block_positions()
        fvec = [sym[p] for p in pos]
        for i in range(r):
            s_i = WeylElement.simple(datum, i)
            offs, zmat = weight_substitution(datum, s_i, dot=False)
            lhs = [x.substitute(offs, zmat) for x in fvec]
            nmat, dsym = unshifted_simple_polys(V, i)
            ok = True
            witness = None
            for k in range(len(fvec)):
                resid = dsym * lhs[k]
                for j in range(len(fvec)):
                    if nmat[k][j]:
                        resid = resid - nmat[k][j] * fvec[j]
                if not resid.is_zero():
                    ok = False
                    witness = {"component": k,
                               "residual_terms": len(resid.num)}
                    break
            dyn[i] = ok
            dyn_wit[i] = witness
    else:
        for i in range(datum.rank):
            dyn[i] = False
            dyn_wit[i] = {"reason": "coefficients leave the zero weight space"}

    div, div_wit = {}, {}
    for i in range(datum.rank):
        bound = nilpotency_degree(V, i)
        for n in range(1, bound + 1):
            g = e_action(f, i, n)
            if g.is_zero():
                div[(i, n)] = True
                continue
            res = divide_by_qstring(g, i, n)
            div[(i, n)] = res.divisible
            if not res.divisible:
                div_wit[(i, n)] = {
                    "offending_coset": list(res.offending_coset),
                    "remainder_weights": [list(w) for w in
                                          sorted(res.remainder)],
                }
    return ConditionReport(zero_ok, offenders, dyn, dyn_wit, div, div_wit)


def check_condition2_at_weight(f: TorusFunction, w: WeylElement, lam):
    """Pointwise guard for the symbolic route: compare f(q^{2 w lam}) with
    the unshifted operator applied to f(q^{2 lam}) at one integral weight.
    Raises PoleError when lam hits a pole of the operator."""
    from .dynamical import unshifted_operator
    from .torus import evaluate_at_weight
    pos = f.zero_block_positions()
    lhs_full = evaluate_at_weight(f, w.act(lam))
    rhs_in = evaluate_at_weight(f, lam)
    mat = unshifted_operator(w, f.target, lam)
    rhs = mat_vec(mat, [rhs_in[p] for p in pos], ZERO)
    return [lhs_full[p] for p in pos] == rhs


# -- decomposition ----------------------------------------------------------


@dataclass
class Decomposition:
    terms: list = field(default_factory=list)

    def to_json(self, q_exp):
        return {"terms": [{"mu": list(mu),
                           "v": [to_string(x, q_exp) for x in v]}
                          for mu, v in self.terms]}


def decompose(ws: Workspace, f: TorusFunction,
              report: ConditionReport | None = None) -> Decomposition:
    """Write a condition-satisfying function as a combination of weighted
    traces by induction on its weight diagram: take the lexicographically
    largest dominant vertex mu, subtract the trace with expectation value
    the coefficient at mu, and repeat on the strictly smaller diagram."""
    if report is None:
        report = check_conditions(f)
    if not report.passed():
        raise ConditionError(report)
    datum = f.datum
    V = f.target
    terms = []
    current = f
    previous_diagram = None
    while not current.is_zero():
        diagram = weight_diagram(current)
        if previous_diagram is not None and not diagram < previous_diagram:
            raise TheoremViolationError("weight diagram did not shrink")
        previous_diagram = diagram
        vertices = hull_vertices(current.support())
        dominant_vertices = set()
        for vert in vertices:
            mu, _ = dominant_representative(datum, vert)
            dominant_vertices.add(mu)
        choices = sorted(dominant_vertices, reverse=True)
        mu = choices[0]
        if mu not in current.terms:
            raise TheoremViolationError(
                f"dominant vertex {mu} carries no coefficient")
        v = current.zero_block(mu)
        L, T = ws.pair(mu, V)
        try:
            phi = intertwiner_from_expectation(mu, V, v, L=L, T=T)
        except Exception as exc:
            raise TheoremViolationError(
                f"no intertwiner for extremal coefficient at {mu}: {exc}")
        current = current - res_trace(phi)
        if tuple(mu) in current.terms:
            raise TheoremViolationError("extremal coefficient survived")
        terms.append((tuple(mu), v))
    terms.sort(key=lambda t: t[0], reverse=True)
    out = Decomposition(terms)
    _verify_reconstruction(ws, f, out)
    return out


def _verify_reconstruction(ws, f, decomposition):
    total = TorusFunction.zero(f.datum, f.target)
    for mu, v in decomposition.terms:
        L, T = ws.pair(mu, f.target)
        phi = intertwiner_from_expectation(mu, f.target, v, L=L, T=T)
        total = total + res_trace(phi)
    if total != f:
        raise TheoremViolationError("decomposition does not reconstruct input")


# -- rank-one restriction of functions ---------------------------------------


def string_restriction(f: TorusFunction, i: int):
    """Split f along cosets of the i-th root line and regrade each part to
    the rank-one world of node i (weights nu(h_i), parameter q_i)."""
    from .torus import _coset_split
    V = f.target
    R = restrict_sl2(V, i)
    out = []
    for rep, members in _coset_split(f, i):
        terms = {}
        for _, wt in sorted(members.items()):
            old = f.terms[wt]
            vec = [ZERO] * R.total_dim
            for k, (vwt, idx) in enumerate(V.basis_enumeration()):
                x = old[k]
                if x:
                    rwt, pos = R.index_map[(vwt, idx)]
                    vec[R.offset(rwt) + pos] = x
            terms[(wt[i],)] = vec
        out.append((rep, TorusFunction(R.datum, R, terms)))
    return out


# -- truncated character-series identity -------------------------------------


@dataclass
class TraceSeriesResult:
    depth: int
    lhs: dict
    rhs: dict
    residual: dict

    def max_residual_index(self):
        bad = [t for t, x in self.residual.items() if not x.is_zero()]
        return min(bad) if bad else None

    def clean(self):
        return self.max_residual_index() is None


def _verma_diagonal_series(M, V, T, v, depth):
    """Coefficients t -> tr coefficient of the Verma trace at depth t."""
    phi = verma_intertwiner(M, V, T, v)
    mats = phi.matrices()
    zw, d0 = zero_weight_block(V)
    mu = M.highest_weight
    alpha = M.datum.simple_root(0)
    out = {}
    for t in range(depth + 1):
        wt = tuple(m - t * a for m, a in zip(mu, alpha))
        if wt not in M.dims:
            break
        mat = mats[wt]
        acc = ZERO
        for b in range(M.dims[wt]):
            pos = T.pair_index[(wt, b, zw, 0)][1]
            acc = acc + mat[pos][b]
        out[t] = acc
    return out


def verma_trace_series(ws: Workspace, v_scalar, mu: int, V: WeightModule,
                       depth: int) -> TraceSeriesResult:
    """Rank-one identity between the irreducible trace and the alternating
    sum of Verma traces weighted by the reflection operators, compared as
    truncated series in powers of e^{-alpha} up to the given depth.

    Raises GenericityError when one of the Verma solves is not unique."""
    datum = ws.datum
    if datum.rank != 1:
        raise DomainError("series identity is implemented in rank one")
    zw, d0 = zero_weight_block(V)
    if d0 != 1:
        raise DomainError("target must have a one-dimensional zero space")
    m_half = V.highest_weight[0] // 2
    step = datum.q_exp * datum.d[0]

    L, T = ws.pair((mu,), V)
    phi = intertwiner_from_expectation((mu,), V, [v_scalar], L=L, T=T)
    trace = res_trace(phi)
    lhs = {}
    for t in range(depth + 1):
        wt = (mu - 2 * t,)
        lhs[t] = trace.zero_block(wt)[0]

    margin = datum.height_drop(V.highest_weight,
                               tuple(-c for c in V.highest_weight)) + 1
    M1 = verma_truncated(datum, (mu,), depth + margin)
    T1 = tensor(M1, V)
    series1 = _verma_diagonal_series(M1, V, T1, [v_scalar], depth)

    smu = -mu - 2
    M2 = verma_truncated(datum, (smu,), depth + margin)
    T2 = tensor(M2, V)
    series2 = _verma_diagonal_series(M2, V, T2, [v_scalar], depth)

    a_scalar = a_operator_rank1_formula(m_half, mu, step)
    rhs, residual = {}, {}
    for t in range(depth + 1):
        total = series1.get(t, ZERO)
        shift = t - (mu + 1)
        if shift >= 0 and shift in series2:
            total = total - a_scalar * series2[shift]
        rhs[t] = total
        residual[t] = lhs[t] - total
    return TraceSeriesResult(depth, lhs, rhs, residual)


# -- linear models of the condition space ------------------------------------


def condition_constraint_rows(V: WeightModule, support,
                              include_divisibility=True):
    """Exact linear constraints, over the scalar field, cutting out the
    condition-satisfying functions supported on the given weight set.
    Unknowns are indexed by (weight, V[0]-coordinate) pairs in order."""
    datum = V.datum
    r = datum.rank
    zw, d0 = zero_weight_block(V)
    support = sorted(tuple(w) for w in support)
    unknowns = [(wt, j) for wt in support for j in range(d0)]
    uindex = {u: t for t, u in enumerate(unknowns)}
    rows = []

    from .torus import _z_exponents
    for i in range(r):
        s_i = WeylElement.simple(datum, i)
        nmat, dsym = unshifted_simple_polys(V, i)
        # residual rows grouped by Z-monomial: for unknown (wt, j) and
        # component k:  D Z^{m(s_i wt)} delta_{jk} - N_kj Z^{m(wt)}
        grouped = {}
        for (wt, j), t in uindex.items():
            zj = tuple(_z_exponents(datum, wt))
            zsj = tuple(_z_exponents(datum, s_i.act(wt)))
            for k in range(d0):
                cell = {}
                if j == k:
                    for zex, xs in z_components(dsym).items():
                        key = tuple(a + b for a, b in zip(zex, zsj))
                        cell[key] = cell.get(key, ZERO) + xs
                if nmat[k][j]:
                    for zex, xs in z_components(nmat[k][j]).items():
                        key = tuple(a + b for a, b in zip(zex, zj))
                        cell[key] = cell.get(key, ZERO) - xs
                for key, xs in cell.items():
                    if xs:
                        grouped.setdefault((k, key), {})[t] = xs
        for (_, _), entries in sorted(grouped.items()):
            row = [ZERO] * len(unknowns)
            for t, xs in entries.items():
                row[t] = xs
            rows.append(row)

    if include_divisibility:
        from .torus import full_operator
        zpos = f_zero_positions(V)
        for i in range(r):
            alpha_lines = _split_support_lines(datum, support, i)
            step_exp = datum.q_exp * datum.d[i]
            bound = nilpotency_degree(V, i)
            emat = full_operator(V, "e", i)
            power = None
            for n in range(1, bound + 1):
                divisor = _qstring_polynomial(n, step_exp)
                power = emat if power is None else _mat_mul_zero(emat, power)
                remainder_map = {}
                for rep, members in alpha_lines:
                    tmin, tmax = min(members), max(members)
                    for t0 in sorted(members):
                        wt = members[t0]
                        for j in range(d0):
                            u = uindex[(wt, j)]
                            vec = [ZERO] * V.total_dim
                            vec[zpos[j]] = ONE
                            image = mat_vec(power, vec, ZERO)
                            if not any(image):
                                continue
                            rem = _window_remainder({t0: image}, tmin, tmax,
                                                    divisor, V.total_dim)
                            for (tt, p), x in rem.items():
                                remainder_map.setdefault((rep, tt, p), {})[u] = x
                for _, entries in sorted(remainder_map.items()):
                    row = [ZERO] * len(unknowns)
                    for u, x in entries.items():
                        row[u] = x
                    rows.append(row)
    return unknowns, rows


def f_zero_positions(V):
    zw = V.zero_weight()
    return [k for k, (wt, _) in enumerate(V.basis_enumeration())
            if wt == zw]


def _mat_mul_zero(a, b):
    from .linalg import mat_mul
    return mat_mul(a, b, ZERO)


def _qstring_polynomial(n, step_exp):
    from .scalars import qpow
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
    return divisor


def _split_support_lines(datum, support, i):
    """Group support weights along lines parallel to alpha_i; each group is
    (representative, {t: weight}) with weight = rep + t alpha_i."""
    alpha = datum.simple_root(i)
    j0 = next(k for k, a in enumerate(alpha) if a)
    groups = []
    for wt in support:
        placed = False
        for rep, members in groups:
            diff = tuple(a - b for a, b in zip(wt, rep))
            step, rr = divmod(diff[j0], alpha[j0])
            if rr == 0 and all(dd == step * aa for dd, aa in zip(diff, alpha)):
                members[step] = wt
                placed = True
                break
        if not placed:
            groups.append((wt, {0: wt}))
    return groups


def _window_remainder(coeffs, tmin, tmax, divisor, width):
    """Linear remainder of ascending division on a fixed window: quotient
    slots run over [tmin, tmax - n]; whatever remains is the remainder,
    returned as {(slot, component): scalar}."""
    n = max(divisor)
    rem = {t: list(v) for t, v in coeffs.items()}
    for t in range(tmin, tmax - n + 1):
        vec = rem.pop(t, None)
        if vec is None or not any(vec):
            continue
        for dt, dx in divisor.items():
            if dt == 0:
                continue
            tt = t + dt
            cur = rem.get(tt, [ZERO] * width)
            cur = [a - dx * b for a, b in zip(cur, vec)]
            if any(cur):
                rem[tt] = cur
            else:
                rem.pop(tt, None)
    out = {}
    for t, vec in rem.items():
        for p, x in enumerate(vec):
            if x:
                out[(t, p)] = x
    return out


def condition_space_dimension(V, support, include_divisibility=True) -> int:
    unknowns, rows = condition_constraint_rows(V, support,
                                               include_divisibility)
    return len(unknowns) - rank(rows)


def condition_space_kernel(V, support, include_divisibility=True):
    """Echelon basis of functions satisfying the assembled constraints."""
    from .linalg import kernel_basis
    unknowns, rows = condition_constraint_rows(V, support,
                                               include_divisibility)
    basis = kernel_basis(rows, len(unknowns), ONE)
    zwdim = zero_weight_block(V)[1]
    out = []
    for vec in basis:
        terms = {}
        for t, (wt, j) in enumerate(unknowns):
            if vec[t]:
                cur = terms.setdefault(wt, [ZERO] * zwdim)
                cur[j] = vec[t]
        out.append(TorusFunction.from_zero_block_terms(V.datum, V, terms))
    return out


def trace_coefficient_matrix(functions):
    """Rows of flattened coefficients over the union of supports, for exact
    rank computations (injectivity of the restriction map)."""
    weights = sorted({wt for f in functions for wt in f.support()})
    width = functions[0].target.total_dim if functions else 0
    rows = []
    for f in functions:
        row = []
        for wt in weights:
            vec = f.terms.get(wt)
            row.extend(vec if vec is not None else [ZERO] * width)
        rows.append(row)
    return rows
