"""Module maps L -> L x V determined by singular vectors of top weight.

An intertwiner is stored by the image of the highest-weight vector, a joint
kernel vector of the raising operators inside the tensor module.  Its value
on any other basis vector follows by pushing lowering operators through the
coproduct, using the recorded build steps of the source module, so extension
costs one operator application per basis vector and no further solves.
"""

from __future__ import annotations

from .errors import DomainError, NoIntertwinerError, TheoremViolationError
from .linalg import kernel_basis, mat_vec, rank, rref, solve_right
from .modules import WeightModule, tensor
from .scalars import ONE, ZERO, to_string


def singular_vectors(M: WeightModule, nu):
    """Echelon basis of the joint kernel of all E_i on the weight space nu."""
    nu = tuple(nu)
    d = M.dim(nu)
    if d == 0:
        return []
    rows = []
    for i in range(M.datum.rank):
        up = M.shift_weight(nu, i, up=True)
        mat = M.op_matrix("e", i, nu)
        if mat is None or up not in M.dims:
            continue
        rows.extend(mat)
    if not rows:
        return [_unit(d, k) for k in range(d)]
    return kernel_basis(rows, d, ONE)


def _unit(n, k):
    v = [ZERO] * n
    v[k] = ONE
    return v


def zero_weight_block(V: WeightModule):
    """Indices of the zero-weight slots in V's basis enumeration."""
    zw = V.zero_weight()
    if zw not in V.dims:
        return zw, 0
    return zw, V.dims[zw]


def admissible_expectations(mu, V: WeightModule):
    """Echelon basis of {v in V[0] : E_i^{mu(h_i)+1} v = 0 for all i}."""
    zw, d0 = zero_weight_block(V)
    if d0 == 0:
        return []
    rows = []
    for i in range(V.datum.rank):
        n = mu[i] + 1
        wt = zw
        mats = None
        ok = True
        for _ in range(n):
            mat = V.op_matrix("e", i, wt)
            target = V.shift_weight(wt, i, up=True)
            if mat is None or target not in V.dims:
                ok = False
                break
            mats = mat if mats is None else _mat_mul(mat, mats)
            wt = target
        if ok and mats is not None:
            rows.extend(mats)
    if not rows:
        return [_unit(d0, k) for k in range(d0)]
    return kernel_basis(rows, d0, ONE)


def _mat_mul(a, b):
    from .linalg import mat_mul
    return mat_mul(a, b, ZERO)


class Intertwiner:
    """Map L -> L x V recorded by the image of the highest-weight vector."""

    def __init__(self, L, V, T, vec):
        if L.highest_weight is None:
            raise DomainError("source module has no highest weight")
        if L.dims[L.highest_weight] != 1:
            raise DomainError("highest weight space is not a line")
        self.L = L
        self.V = V
        self.T = T
        self.mu = L.highest_weight
        self.vec = list(vec)
        self._matrices = None

    def is_zero(self):
        return all(x.is_zero() for x in self.vec)

    def expectation_block_positions(self):
        zw, d0 = zero_weight_block(self.V)
        return [self.T.pair_index[(self.mu, 0, zw, j)][1] for j in range(d0)]

    def expectation(self):
        return [self.vec[p] for p in self.expectation_block_positions()]

    def matrices(self):
        """Per-weight matrices of the extended map, columns over L's basis."""
        if self._matrices is not None:
            return self._matrices
        L, T = self.L, self.T
        mats = {}
        # descend by height below the top: parents are always ready
        order = sorted(L.weight_order,
                       key=lambda wt: (L.datum.height_drop(self.mu, wt), wt))
        for wt in order:
            cols = []
            if wt == self.mu:
                cols.append(list(self.vec))
            else:
                for step in L.build_steps[wt]:
                    col = [ZERO] * T.dims[wt]
                    for i, xvec in step:
                        up = L.shift_weight(wt, i, up=True)
                        lifted = mat_vec(mats[up], xvec, ZERO)
                        _, dropped = T.apply("f", i, up, lifted)
                        if dropped:
                            col = [a + b for a, b in zip(col, dropped)]
                    cols.append(col)
            mats[wt] = [[cols[c][t] for c in range(len(cols))]
                        for t in range(T.dims[wt])]
        self._matrices = mats
        return mats

    def to_json(self, q_exp=None):
        q_exp = q_exp if q_exp is not None else self.L.datum.q_exp
        rev = {}
        for key, (tot, pos) in self.T.pair_index.items():
            if tot == self.mu:
                rev[pos] = key
        entries = []
        for pos, x in enumerate(self.vec):
            if x.is_zero():
                continue
            wm, im, wn, jn = rev[pos]
            entries.append({"l_weight": list(wm), "l_index": im,
                            "v_weight": list(wn), "v_index": jn,
                            "coeff": to_string(x, q_exp)})
        return {"mu": list(self.mu), "image_of_hwv": entries}


def tensor_with_target(L: WeightModule, V: WeightModule) -> WeightModule:
    return tensor(L, V)


def hom_dimension(mu, V: WeightModule, *, L=None, T=None) -> int:
    """dim Hom(L_mu, L_mu x V), with the kernel characterization of the
    admissible expectation values cross-checked against it."""
    from .modules import irreducible
    mu = tuple(mu)
    if not V.datum.is_dominant(mu):
        raise DomainError(f"{mu} is not dominant")
    L = L if L is not None else irreducible(V.datum, mu)
    T = T if T is not None else tensor(L, V)
    sing = singular_vectors(T, mu)
    adm = admissible_expectations(mu, V)
    if len(sing) != len(adm):
        raise TheoremViolationError(
            f"singular count {len(sing)} != admissible count {len(adm)}")
    return len(sing)


def intertwiner_from_expectation(mu, V, v, *, L=None, T=None) -> Intertwiner:
    """The unique intertwiner with the given expectation value v over the
    V[0] basis; requires E_i^{mu(h_i)+1} v = 0 for every node."""
    from .modules import irreducible
    mu = tuple(mu)
    datum = V.datum
    L = L if L is not None else irreducible(datum, mu)
    T = T if T is not None else tensor(L, V)
    zw, d0 = zero_weight_block(V)
    if len(v) != d0:
        raise DomainError("expectation value must live in V[0]")
    if all(not x for x in v):
        return Intertwiner(L, V, T, [ZERO] * T.dims[mu])
    # Raising-power admissibility of v
    for i in range(datum.rank):
        wt, vec = zw, list(v)
        for _ in range(mu[i] + 1):
            wt, vec = V.apply("e", i, wt, vec)
            if not vec:
                break
        if vec and any(vec):
            raise NoIntertwinerError(
                f"E_{i}^{mu[i] + 1} does not annihilate the value")
    sing = singular_vectors(T, mu)
    positions = [T.pair_index[(mu, 0, zw, j)][1] for j in range(d0)]
    block = [[s[p] for s in sing] for p in positions]
    if sing and kernel_basis(block, len(sing), ONE):
        raise TheoremViolationError("expectation value map is not injective")
    coeffs = solve_right(block, list(v), ONE)
    if coeffs is None:
        raise TheoremViolationError(
            "admissible value outside the expectation image")
    vec = [ZERO] * T.dims[mu]
    for c, s in zip(coeffs, sing):
        if c:
            vec = [a + c * b for a, b in zip(vec, s)]
    return Intertwiner(L, V, T, vec)


def expectation_value(phi: Intertwiner):
    return phi.expectation()


def verify_intertwiner(phi: Intertwiner) -> bool:
    """Exhaustively check that the extended map commutes with every E_i and
    F_i on every basis vector of the source."""
    L, T = phi.L, phi.T
    mats = phi.matrices()
    for wt in L.weight_order:
        for i in range(L.datum.rank):
            for which in ("e", "f"):
                target = L.shift_weight(wt, i, up=(which == "e"))
                lmat = L.op_matrix(which, i, wt)
                tmat = T.op_matrix(which, i, wt)
                via_l = None
                if lmat is not None and target in L.dims:
                    via_l = _mat_mul(mats[target], lmat)
                via_t = None
                if tmat is not None and target in T.dims:
                    via_t = _mat_mul(tmat, mats[wt])
                if via_l is None and via_t is None:
                    continue
                tdim = T.dims.get(target, 0)
                if via_l is None:
                    via_l = [[ZERO] * L.dims[wt] for _ in range(tdim)]
                if via_t is None:
                    via_t = [[ZERO] * L.dims[wt] for _ in range(tdim)]
                if via_l != via_t:
                    return False
    return True


def expectation_full_rank(intertwiners) -> bool:
    """The expectation values of a family are linearly independent."""
    rows = [phi.expectation() for phi in intertwiners]
    return rank(rows) == len(rows)
