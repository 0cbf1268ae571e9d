"""Dense exact linear algebra over any field-like scalar type.

Matrices are lists of row lists.  Scalars must support +, -, *, /, truth
testing (nonzero) and equality; both the Laurent-rational scalars and the
symbolic multivariate scalars qualify.  Pivots are chosen as the first
nonzero entry in column order, and echelon bases are normalized so the
leading entry of each row is one, which keeps every output deterministic.
"""

from __future__ import annotations


def mat_mul(a, b, zero):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        orow = []
        for j in range(cols):
            acc = zero
            for k, x in enumerate(row):
                if x:
                    acc = acc + x * b[k][j]
            orow.append(acc)
        out.append(orow)
    return out


def mat_vec(a, v, zero):
    out = []
    for row in a:
        acc = zero
        for k, x in enumerate(row):
            if x:
                acc = acc + x * v[k]
        out.append(acc)
    return out


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_scale(c, v):
    return [c * x for x in v]


def identity_matrix(n, one):
    zero = one - one
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [x / inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows, pivots


def rank(rows):
    return len(rref(rows)[1])


def kernel_basis(rows, ncols, one):
    """Echelon basis of the right kernel of the matrix (rows x ncols).

    Basis vectors are indexed by free columns; each has a 1 in its free
    column, so the basis itself is in (column-)echelon form.
    """
    zero = one - one
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            if red[r][fc]:
                v[pc] = zero - red[r][fc]
        basis.append(v)
    return basis


def solve_right(rows, rhs, one):
    """One solution x of A x = b, or None if inconsistent.

    rhs may be a single vector; the solution has free coordinates set to 0.
    """
    zero = one - one
    if not rows:
        return None if any(rhs) else []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None  # pivot in the augmented column: inconsistent
        x[pc] = red[r][ncols]
    return x


def mat_inverse(rows, one):
    n = len(rows)
    aug = [list(r) + list(idr) for r, idr in zip(rows, identity_matrix(n, one))]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in red]


def transpose(rows):
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]
