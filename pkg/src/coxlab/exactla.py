"""Exact linear algebra over AlgScalar and QuadExt entries.

Matrices are plain nested lists wrapped in a small class.  Nothing here
uses floating point except the interval fast path in `det_sign`, which
only returns a sign when the enclosing ball excludes zero.
"""
from collections import namedtuple

from flint import arb_mat, ctx

from .scalar import ONE, ZERO, as_scalar, sign, to_float, expression, to_json


Signature = namedtuple("Signature", ["pos", "neg", "null"])
Signature.__doc__ = "Inertia (p, q, r) of a symmetric matrix."


class Matrix:
    """A dense exact matrix (rows of scalars)."""

    def __init__(self, rows):
        self.rows = [[as_scalar(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def dim(self):
        return self.nrows

    def copy_rows(self):
        return [list(r) for r in self.rows]

    def transpose(self):
        return Matrix([[self.rows[i][j] for i in range(self.nrows)]
                       for j in range(self.ncols)])

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                acc = ZERO
                for a, b in zip(row, col):
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return Matrix(out)

    def __sub__(self, other):
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __add__(self, other):
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        return Matrix([[c * a for a in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return all((a - b).is_zero() for r, s in zip(self.rows, other.rows)
                   for a, b in zip(r, s))

    __hash__ = None

    def apply(self, v):
        return [sum((a * x for a, x in zip(row, v)), ZERO) for row in self.rows]

    def is_symmetric(self):
        n = self.nrows
        return n == self.ncols and all(
            (self.rows[i][j] - self.rows[j][i]).is_zero()
            for i in range(n) for j in range(i + 1, n))

    def to_floats(self):
        return [[float(x) for x in r] for r in self.rows]

    def decimal_grid(self, digits=6):
        return [[to_float(x, digits) for x in r] for r in self.rows]

    def exact_grid(self):
        return [[expression(x) for x in r] for r in self.rows]

    def exact_json(self):
        return [[to_json(x) for x in r] for r in self.rows]

    def __repr__(self):
        return "%s(%r)" % (type(self).__name__, self.exact_grid())


class SymMatrix(Matrix):
    """A symmetric exact matrix."""

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_symmetric():
            raise ValueError("matrix is not symmetric")


def _field_rows(A):
    if isinstance(A, Matrix):
        return A.copy_rows()
    return [[as_scalar(x) for x in r] for r in A]


def determinant(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = _field_rows(A)
    n = len(M)
    if n == 0:
        return ONE
    flip = 1
    prev_inv = ONE
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    flip = -flip
                    break
            else:
                return ZERO
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                val = row_i[j] * pivot
                if not mik.is_zero() and not row_k[j].is_zero():
                    val = val - mik * row_k[j]
                row_i[j] = val * prev_inv
        prev_inv = pivot.inverse()
    det = M[n - 1][n - 1]
    return det if flip == 1 else -det


def det_sign(A, max_prec=1024):
    """Sign of det(A); interval fast path with exact fallback."""
    rows = A.rows if isinstance(A, Matrix) else _field_rows(A)
    n = len(rows)
    if n == 0:
        return 1
    prec = 64
    while prec <= max_prec:
        with ctx.workprec(prec):
            ball = arb_mat([[x.enclosure(prec) for x in r] for r in rows]).det()
            if ball > 0:
                return 1
            if ball < 0:
                return -1
        prec *= 4
    return sign(determinant(rows))


def inertia(A):
    """Exact inertia by symmetric congruence diagonalization.

    Only the signs of the pivots are recorded.  When every remaining
    diagonal entry vanishes but some off-diagonal e does not, the block
    [[0, e], [e, 0]] is split off and contributes one positive and one
    negative direction.
    """
    M = _field_rows(A)
    active = list(range(len(M)))
    pos = neg = 0
    while active:
        piv = next((i for i in active if not M[i][i].is_zero()), None)
        if piv is not None:
            p = M[piv][piv]
            s = sign(p)
            if s > 0:
                pos += 1
            else:
                neg += 1
            active.remove(piv)
            pinv = p.inverse()
            col = {j: M[j][piv] for j in active}
            for a_i, j in enumerate(active):
                cj = col[j]
                if cj.is_zero():
                    continue
                cjp = cj * pinv
                for k in active[a_i:]:
                    ck = col[k]
                    if ck.is_zero():
                        continue
                    M[j][k] = M[j][k] - cjp * ck
                    M[k][j] = M[j][k]
            continue
        pair = next(((i, j) for ai, i in enumerate(active) for j in active[ai + 1:]
                     if not M[i][j].is_zero()), None)
        if pair is None:
            break
        i, j = pair
        pos += 1
        neg += 1
        einv = M[i][j].inverse()
        active.remove(i)
        active.remove(j)
        ci = {k: M[k][i] for k in active}
        cj = {k: M[k][j] for k in active}
        for a_k, k in enumerate(active):
            for l in active[a_k:]:
                corr = ci[k] * cj[l] + cj[k] * ci[l]
                if not corr.is_zero():
                    M[k][l] = M[k][l] - corr * einv
                    M[l][k] = M[k][l]
    n = len(M)
    return Signature(pos, neg, n - pos - neg)


def rref(A):
    """Reduced row echelon form and the pivot columns."""
    M = _field_rows(A)
    nr = len(M)
    nc = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        src = next((i for i in range(r, nr) if not M[i][c].is_zero()), None)
        if src is None:
            continue
        M[r], M[src] = M[src], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(nr):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank_and_kernel(A):
    """Rank and a basis of the right kernel {v : A v = 0}."""
    R, pivots = rref(A)
    nc = len(R[0]) if R else 0
    free = [c for c in range(nc) if c not in pivots]
    kernel = []
    for f in free:
        v = [ZERO] * nc
        v[f] = ONE
        for row, c in enumerate(pivots):
            v[c] = -R[row][f]
        kernel.append(v)
    return len(pivots), kernel


def principal_minor(A, T):
    """The T x T submatrix (T an iterable of indices, kept in sorted order)."""
    idx = sorted(T)
    if not idx:
        raise ValueError("empty index set")
    rows = A.rows if isinstance(A, Matrix) else A
    sub = [[rows[i][j] for j in idx] for i in idx]
    return SymMatrix(sub) if isinstance(A, SymMatrix) else Matrix(sub)


def block_diag(*blocks):
    n = sum(b.nrows for b in blocks)
    out = [[ZERO] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                out[off + i][off + j] = b.rows[i][j]
        off += b.nrows
    return SymMatrix(out)


def find_nonzero_minor(A, size, order=None):
    """Rows/columns of a nonzero principal-free size x size minor, or None.

    Tries deleting index sets in the given order first; used to certify
    that rank(A) >= size constructively.
    """
    from itertools import combinations
    n = A.nrows
    candidates = list(order or [])
    candidates += [c for c in combinations(range(n), size) if c not in candidates]
    for rows in candidates:
        for cols in [rows] + [c for c in combinations(range(n), size) if c != rows]:
            sub = [[A.rows[i][j] for j in cols] for i in rows]
            if not determinant(sub).is_zero():
                return tuple(rows), tuple(cols)
    return None
