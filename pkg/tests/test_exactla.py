import random
from fractions import Fraction

import mpmath
import pytest
from flint import fmpq, fmpq_mat
from hypothesis import given, strategies as st

from coxlab import catalog
from coxlab.diagram import INF, CoxeterDiagram, cosine_matrix, lambda_cosine_matrix
from coxlab.exactla import (Matrix, Signature, SymMatrix, block_diag, det_sign, determinant,
                            find_nonzero_minor, inertia, principal_minor, rank_and_kernel)
from coxlab.scalar import AlgScalar, sign, two_cos_pi_over

from conftest import diagrams, mp_matrix


def sym(rows):
    return SymMatrix([[AlgScalar(x) for x in r] for r in rows])


def test_determinant_examples():
    assert determinant(cosine_matrix(catalog.spherical("A", 2))) == 3
    c5 = two_cos_pi_over(5)
    sqrt5 = 2 * c5 - 1
    d8 = catalog.catalog_get("examples_dim8", 2)
    assert determinant(cosine_matrix(d8)) == (25 - 11 * sqrt5) / 2
    assert determinant(cosine_matrix(catalog.spherical("I2", 5))) == (5 - sqrt5) / 2


def test_inertia_examples():
    assert inertia(sym([[2, 0], [0, 2]])) == Signature(2, 0, 0)
    assert inertia(sym([[2, -2], [-2, 2]])) == Signature(1, 0, 1)
    d = catalog.catalog_get("examples_dim5", 1, p=7)
    assert inertia(cosine_matrix(d)) == Signature(5, 2, 0)
    # zero diagonal forces the 2x2 block step
    assert inertia(sym([[0, 1, 0], [1, 0, 0], [0, 0, -3]])) == Signature(1, 2, 0)
    assert inertia(sym([[0, 0], [0, 0]])) == Signature(0, 0, 2)


def test_rank_and_kernel_examples():
    r, ker = rank_and_kernel(sym([[2, -2], [-2, 2]]))
    assert r == 1 and ker == [[1, 1]]
    r, ker = rank_and_kernel(cosine_matrix(catalog.affine("A", 2)))
    assert r == 2 and len(ker) == 1 and len(set(ker[0])) == 1


def test_principal_minor_examples():
    A = cosine_matrix(catalog.spherical("A", 2))
    assert principal_minor(A, [0, 1]) == A
    assert principal_minor(A, [0]).rows == [[2]]
    with pytest.raises(ValueError):
        principal_minor(A, [])


def _rational_matrix(rng, n, sym_=False):
    rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
    if sym_:
        for i in range(n):
            for j in range(i):
                rows[i][j] = rows[j][i]
    return rows


def test_determinant_matches_flint_on_rationals():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 7)
        rows = _rational_matrix(rng, n)
        if rng.random() < 0.3 and n > 1:
            rows[-1] = list(rows[0])  # singular
        oracle = fmpq_mat([[fmpq(x.numerator, x.denominator) for x in r] for r in rows]).det()
        got = determinant(Matrix([[AlgScalar(x) for x in r] for r in rows]))
        assert got.to_fraction() == Fraction(int(oracle.p), int(oracle.q))
        assert det_sign(Matrix([[AlgScalar(x) for x in r] for r in rows])) == sign(got)


def _catalog_matrices():
    out = []
    for table in ("examples_dim4", "examples_dim6", "Hexamples_dim4", "esselmann",
                  "disconnected_ads_dim4"):
        for e in catalog.entries(table):
            for ps in e.test_parameters()[:1]:
                d = e.instantiate(**ps)
                out.append(cosine_matrix(d) if not d.infinite_edges()
                           else lambda_cosine_matrix(d, 1))
    for table in ("spherical", "affine", "lanner"):
        out += [cosine_matrix(d) for _, d in catalog.classification_tables()[table][:12]]
    return out


def test_inertia_matches_high_precision_eigenvalues():
    # eigenvalue signs from a 100-digit symmetric eigensolver; the number of
    # zero eigenvalues is taken from the exact rank
    for A in _catalog_matrices():
        if A.nrows > 10:
            continue
        with mpmath.workdps(100):
            ev, _ = mpmath.eigsy(mp_matrix(A))
            r, _ = rank_and_kernel(A)
            vals = sorted(ev, key=abs)
            nonzero = vals[A.nrows - r:]
            oracle = Signature(sum(1 for v in nonzero if v > 0), sum(1 for v in nonzero if v < 0),
                               A.nrows - r)
        assert inertia(A) == oracle


@given(diagrams(max_rank=6, max_inf=1), st.randoms(use_true_random=False))
def test_inertia_permutation_invariant(d, rnd):
    A = lambda_cosine_matrix(d, 1)
    perm = list(range(d.rank))
    rnd.shuffle(perm)
    P = SymMatrix([[A[perm[i], perm[j]] for j in range(d.rank)] for i in range(d.rank)])
    assert inertia(P) == inertia(A)
    sig = inertia(A)
    det = determinant(A)
    assert (sign(det) == 0) == (sig.null > 0)
    if sig.null == 0:
        assert sign(det) == (-1) ** sig.neg
    assert det_sign(A) == sign(det)


@given(diagrams(max_rank=4), diagrams(max_rank=4))
def test_block_additivity(d1, d2):
    A, B = cosine_matrix(d1), cosine_matrix(d2)
    M = block_diag(A, B)
    s, a, b = inertia(M), inertia(A), inertia(B)
    assert tuple(s) == tuple(x + y for x, y in zip(a, b))
    assert determinant(M) == determinant(A) * determinant(B)


def test_find_nonzero_minor():
    A = sym([[2, -2], [-2, 2]])
    assert find_nonzero_minor(A, 2) is None
    assert find_nonzero_minor(A, 1) is not None
