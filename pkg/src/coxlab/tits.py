"""Tits-Vinberg reflection representations from symmetric Cartan matrices.

We work in the basis (b_s) where the generator s acts by
sigma_s(b_t) = b_t - A_st b_s, so the invariant form has Gram matrix A.
When A is singular the vectors b_s span a proper subspace V_A and we
use the lexicographically first maximal independent set of them.
"""
from dataclasses import dataclass, field

from .classify import CartanKind, SubsetOracle, check_cartan, support_components
from .diagram import INF, DiagramError, set_to_mask
from .exactla import Matrix, SymMatrix, determinant, rref
from .scalar import ONE, ZERO, cos_squared_pi_over, sign


class ZeroTypeComponent(ValueError):
    pass


@dataclass
class TitsRepresentation:
    dim: int
    basis_mode: str
    basis: tuple            # indices s whose b_s form the working basis
    gram: SymMatrix
    generators: list
    diagram: object
    coords: Matrix          # column s = coordinates of b_s in the working basis
    cartan: SymMatrix = field(repr=False, default=None)

    def generator(self, s):
        return self.generators[s]


def check_compatible(A, d):
    """A_st A_ts = 4cos^2(pi/M_st) for finite labels, >= 4 for inf."""
    if A.nrows != d.rank:
        raise DiagramError("matrix and diagram sizes differ")
    for i in range(d.rank):
        for j in range(i + 1, d.rank):
            m = d.label(i, j)
            prod = A[i, j] * A[j, i]
            if m == INF:
                ok = sign(prod - 4) >= 0
            else:
                ok = (prod - 4 * cos_squared_pi_over(m)).is_zero()
            if not ok:
                raise DiagramError("entry (%d, %d) is incompatible with label %s"
                                   % (i + 1, j + 1, m))


def build(A, d):
    """Reflection representation attached to the Cartan matrix A of d."""
    if not isinstance(A, SymMatrix):
        A = SymMatrix(A.rows)
    check_cartan(A)
    check_compatible(A, d)
    oracle = SubsetOracle(A)
    for comp in support_components(A):
        if oracle.cartan_kind(set_to_mask(comp)) == CartanKind.ZERO:
            raise ZeroTypeComponent("component %s is of zero type"
                                    % sorted(s + 1 for s in comp))
    n = A.nrows
    if not determinant(A).is_zero():
        basis = tuple(range(n))
        X = Matrix.identity(n)
        mode = "full"
    else:
        R, pivots = rref(A)
        basis = tuple(pivots)
        X = Matrix([R[r] for r in range(len(pivots))])
        mode = "reduced"
    k = len(basis)
    gens = []
    for s in range(n):
        cols = []
        for c, j in enumerate(basis):
            a = A[s, j]
            cols.append([(ONE if r == c else ZERO) - a * X[r, s] for r in range(k)])
        gens.append(Matrix([[cols[c][r] for c in range(k)] for r in range(k)]))
    gram = SymMatrix([[A[i, j] for j in basis] for i in basis])
    return TitsRepresentation(k, mode, basis, gram, gens, d, X, A)


def word_to_matrix(rep, word):
    """Product rho(w_1) ... rho(w_k)."""
    M = Matrix.identity(rep.dim)
    for s in word:
        if not 0 <= s < len(rep.generators):
            raise IndexError("generator index %d out of range" % s)
        M = M @ rep.generators[s]
    return M


def _order_check(P, m, identity):
    """(is P^m = Id, smallest k <= m with P^k = Id or None)."""
    Q = P
    first = None
    for k in range(1, m + 1):
        if first is None and Q == identity:
            first = k
        if k < m:
            Q = Q @ P
    return first


def verify_relations(rep, cap=50):
    """Check the Coxeter relations exactly.

    Returns a dict with lists of failures; `ok` is True when all pass.
    For finite labels the order of rho(s)rho(t) must be exactly M_st;
    for inf labels no power up to `cap` may be the identity.
    """
    d = rep.diagram
    labels = [m for _, _, m in d.edges() if m != INF]
    if labels and cap < max(labels):
        raise ValueError("cap must be at least the largest finite label")
    I = Matrix.identity(rep.dim)
    report = {"involutions": [], "finite": [], "infinite": [], "checked_pairs": 0}
    for s, g in enumerate(rep.generators):
        if not (g @ g) == I:
            report["involutions"].append(s + 1)
    for s in range(d.rank):
        for t in range(s + 1, d.rank):
            m = d.label(s, t)
            P = rep.generators[s] @ rep.generators[t]
            report["checked_pairs"] += 1
            if m == INF:
                if _order_check(P, cap, I) is not None:
                    report["infinite"].append((s + 1, t + 1))
            else:
                if _order_check(P, m, I) != m:
                    report["finite"].append((s + 1, t + 1, m))
    report["ok"] = not (report["involutions"] or report["finite"] or report["infinite"])
    report["cap"] = cap
    return report


def verify_invariance(rep):
    """rho(s)^T gram rho(s) = gram for every generator."""
    G = rep.gram
    return all(g.transpose() @ G @ g == G for g in rep.generators)


def verify_basis_consistency(rep):
    """Every kernel relation sum c_s b_s = 0 of A holds in the working basis."""
    from .exactla import rank_and_kernel
    _, kernel = rank_and_kernel(rep.cartan)
    X = rep.coords
    for c in kernel:
        v = X.apply(c)
        if not all(x.is_zero() for x in v):
            return False
    return True
