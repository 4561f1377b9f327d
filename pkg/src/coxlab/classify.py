"""Classification of diagrams and Cartan matrices.

* irreducible diagrams: spherical / affine / Lannér / other, from the
  definition (positive definite (s,s)-minors, sign of the determinant),
  with a name looked up in the built-in catalogs;
* Cartan matrices: positive / zero / negative type of each component;
* the subset conditions H0 and H- on a Cartan matrix;
* Moussong's hyperbolicity criterion.

Subset scans work on bitmasks and only visit connected subsets, which is
enough: a matrix restricted to T has a zero-type (negative-type)
component iff some connected subset of T is of zero (negative) type.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from . import catalog
from .diagram import (INF, CapacityError, DiagramError, cosine_matrix, is_isomorphic,
                      mask_to_set, set_to_mask)
from .exactla import det_sign, inertia, principal_minor
from .scalar import sign

MAX_SCAN_RANK = 16


class Kind(str, Enum):
    SPHERICAL = "Spherical"
    AFFINE = "Affine"
    LANNER = "Lanner"
    OTHER = "OtherLarge"


class CartanKind(str, Enum):
    POSITIVE = "Positive"
    ZERO = "Zero"
    NEGATIVE = "Negative"


@dataclass(frozen=True)
class IrreducibleClass:
    kind: Kind
    catalog_name: Optional[str] = None


@dataclass(frozen=True)
class HyperbolicityVerdict:
    hyperbolic: bool
    witness: Optional[tuple] = None
    reason: Optional[str] = None


class NotCartan(ValueError):
    pass


class SubsetOracle:
    """Cached inertia and determinant signs of principal submatrices."""

    def __init__(self, A):
        self.A = A
        self.n = A.nrows
        self._inertia = {}
        self._det = {}

    def inertia(self, mask):
        sig = self._inertia.get(mask)
        if sig is None:
            sig = inertia(principal_minor(self.A, mask_to_set(mask)))
            self._inertia[mask] = sig
        return sig

    def det_sign(self, mask):
        s = self._det.get(mask)
        if s is None:
            sig = self._inertia.get(mask)
            if sig is not None:
                s = 0 if sig.null else (-1) ** sig.neg
            else:
                s = det_sign(principal_minor(self.A, mask_to_set(mask)))
            self._det[mask] = s
        return s

    def positive_definite(self, mask):
        if mask == 0:
            return True
        sig = self.inertia(mask)
        return sig.neg == 0 and sig.null == 0

    def cartan_kind(self, mask):
        """Type of the restriction to a connected subset."""
        sig = self.inertia(mask)
        k = bin(mask).count("1")
        if sig.pos == k:
            return CartanKind.POSITIVE
        if sig.neg == 0 and sig.null == 1:
            return CartanKind.ZERO
        return CartanKind.NEGATIVE


def _drop_each(mask):
    m = mask
    while m:
        low = m & -m
        yield mask ^ low
        m ^= low


def definition_kind(oracle, mask):
    """Spherical/affine/Lannér kind of a connected subset, from the definition."""
    if not all(oracle.positive_definite(sub) for sub in _drop_each(mask)):
        return Kind.OTHER
    s = oracle.det_sign(mask)
    return {1: Kind.SPHERICAL, 0: Kind.AFFINE, -1: Kind.LANNER}[s]


# ---------------------------------------------------------------------
# irreducible classification

def classify_irreducible(d):
    """Kind of a connected diagram, with its catalog name when known.

    The definition is applied literally, also to inf labels (entry -2).
    The only diagram with an inf label that passes the minor test is the
    rank-2 one, which then comes out affine.
    """
    if d.is_parametric():
        raise DiagramError("instantiate the parameters first")
    if not d.is_connected():
        raise DiagramError("diagram is not connected")
    oracle = SubsetOracle(cosine_matrix(d))
    kind = definition_kind(oracle, (1 << d.rank) - 1)
    name = recognize(d, kind) if kind != Kind.OTHER else None
    return IrreducibleClass(kind, name)


def _series_candidates(kind, d):
    n = d.rank
    if kind == Kind.SPHERICAL:
        yield "A_%d" % n, catalog.spherical("A", n)
        if n >= 2:
            yield "B_%d" % n, catalog.spherical("B", n)
        if n >= 4:
            yield "D_%d" % n, catalog.spherical("D", n)
        if n == 2:
            m = d.label(0, 1)
            if isinstance(m, int) and m >= 5:
                yield "I_2(%d)" % m, catalog.spherical("I2", m)
    elif kind == Kind.AFFINE:
        t = catalog.TILDE
        yield catalog.unicodedata_nfc("A%s_%d" % (t, n - 1)), catalog.affine("A", n - 1)
        if n >= 4:
            yield "B%s_%d" % (t, n - 1), catalog.affine("B", n - 1)
        if n >= 3:
            yield "C%s_%d" % (t, n - 1), catalog.affine("C", n - 1)
        if n >= 5:
            yield "D%s_%d" % (t, n - 1), catalog.affine("D", n - 1)
    elif kind == Kind.LANNER and n == 3:
        labels = sorted(m for _, _, m in d.edges())
        if len(labels) == 3 and INF not in labels:
            try:
                yield "Lanner-triangle(%d,%d,%d)" % tuple(labels), catalog.lanner_triangle(*labels)
            except catalog.CatalogError:
                pass
        if len(labels) == 2 and INF not in labels:
            try:
                yield "Lanner-path(%d,%d)" % tuple(labels), catalog.lanner_path(*labels)
            except catalog.CatalogError:
                pass


def recognize(d, kind):
    """Catalog name of an irreducible diagram of the given kind, or None."""
    table = {Kind.SPHERICAL: "spherical", Kind.AFFINE: "affine", Kind.LANNER: "lanner"}[kind]
    for name, ref in _series_candidates(kind, d):
        if ref.rank == d.rank and is_isomorphic(d, ref) is not None:
            return name
    for name, ref in catalog.classification_tables()[table]:
        if ref.rank == d.rank and is_isomorphic(d, ref) is not None:
            return name
    return None


def subset_class(d, T):
    """{'spherical', 'affine', 'lanner'} flags of the special subgroup W_T."""
    T = frozenset(T)
    if not T:
        raise DiagramError("empty subset")
    oracle = SubsetOracle(cosine_matrix(d))
    return _subset_flags(d, oracle, set_to_mask(T))


def _subset_flags(d, oracle, mask):
    comps = [set_to_mask(c) for c in d.components(mask_to_set(mask))]
    kinds = [definition_kind(oracle, c) for c in comps]
    return {
        "spherical": all(k == Kind.SPHERICAL for k in kinds),
        "affine": all(k == Kind.AFFINE for k in kinds),
        "lanner": len(comps) == 1 and kinds[0] == Kind.LANNER,
    }


# ---------------------------------------------------------------------
# Cartan matrices

def check_cartan(A):
    n = A.nrows
    for i in range(n):
        if A[i, i] != 2:
            raise NotCartan("diagonal entry %d is not 2" % (i + 1))
        for j in range(n):
            if i != j and sign(A[i, j]) > 0:
                raise NotCartan("positive off-diagonal entry at (%d, %d)" % (i + 1, j + 1))


def support_components(A, T=None):
    """Connected components of the graph {i ~ j : A_ij != 0}."""
    n = A.nrows
    left = set(range(n)) if T is None else set(T)
    comps = []
    while left:
        start = min(left)
        seen, stack = {start}, [start]
        while stack:
            i = stack.pop()
            for j in list(left):
                if j not in seen and not A[i, j].is_zero():
                    seen.add(j)
                    stack.append(j)
        comps.append(frozenset(seen))
        left -= seen
    return comps


def cartan_type(A, partition=None):
    """Per-component type (positive, zero or negative) of a symmetric Cartan matrix."""
    check_cartan(A)
    parts = partition if partition is not None else support_components(A)
    oracle = SubsetOracle(A)
    return [oracle.cartan_kind(set_to_mask(p)) for p in parts]


def _check_compatible(A, d):
    if A.nrows != d.rank:
        raise DiagramError("matrix and diagram sizes differ")
    for i in range(d.rank):
        for j in range(i + 1, d.rank):
            if (d.label(i, j) == 2) != A[i, j].is_zero():
                raise DiagramError("matrix is not compatible with the diagram at (%d, %d)"
                                   % (i + 1, j + 1))


def _connected_masks(d):
    if d.rank > MAX_SCAN_RANK:
        raise CapacityError("subset scans are limited to rank %d" % MAX_SCAN_RANK)
    return d.connected_subsets(MAX_SCAN_RANK)


def check_H0(A, d):
    """H0: no principal submatrix has a zero-type component.

    Returns (holds, witness); the witness is a smallest connected
    subset of zero type.
    """
    check_cartan(A)
    _check_compatible(A, d)
    oracle = SubsetOracle(A)
    for mask in _connected_masks(d):
        if oracle.cartan_kind(mask) == CartanKind.ZERO:
            return False, mask_to_set(mask)
    return True, None


def _closed_nbhd(d, mask):
    out = mask
    for t in mask_to_set(mask):
        for u in d.neighbors(t):
            out |= 1 << u
    return out


def _orthogonal_pair(d, masks):
    """First pair (T, U) of disjoint orthogonal masks, or None."""
    nb = {m: _closed_nbhd(d, m) for m in masks}
    for a, T in enumerate(masks):
        for U in masks[a + 1:]:
            if not (U & nb[T]):
                return T, U
    return None


def _minimal(masks):
    masks = sorted(masks, key=lambda m: (bin(m).count("1"), m))
    out = []
    for m in masks:
        if not any((o & m) == o for o in out):
            out.append(m)
    return out


def check_Hminus(A, d):
    """H-: no two orthogonal subsets both of negative type.

    Returns (holds, witness pair).  It suffices to look at
    inclusion-minimal connected negative-type subsets.
    """
    check_cartan(A)
    _check_compatible(A, d)
    oracle = SubsetOracle(A)
    neg = [m for m in _connected_masks(d) if oracle.cartan_kind(m) == CartanKind.NEGATIVE]
    pair = _orthogonal_pair(d, _minimal(neg))
    if pair is None:
        return True, None
    return False, (mask_to_set(pair[0]), mask_to_set(pair[1]))


def moussong(d):
    """Moussong's criterion for Gromov hyperbolicity.

    Not hyperbolic iff there is an irreducible affine subset of rank >= 3
    or two orthogonal non-spherical subsets.  Reducible affine subsets
    of rank >= 3 always contain two orthogonal non-spherical subsets,
    so they are caught by the second condition.
    """
    if d.is_parametric():
        raise DiagramError("instantiate the parameters first")
    oracle = SubsetOracle(cosine_matrix(d))
    masks = _connected_masks(d)
    for m in masks:
        if bin(m).count("1") >= 3 and definition_kind(oracle, m) == Kind.AFFINE:
            return HyperbolicityVerdict(False, (mask_to_set(m),), "affine subset of rank >= 3")
    nonsph = [m for m in masks if not oracle.positive_definite(m)]
    pair = _orthogonal_pair(d, _minimal(nonsph))
    if pair is not None:
        return HyperbolicityVerdict(False, (mask_to_set(pair[0]), mask_to_set(pair[1])),
                                    "orthogonal non-spherical subsets")
    return HyperbolicityVerdict(True)


def spherical_subsets(d):
    """All nonempty spherical subsets as bitmasks."""
    if d.rank > MAX_SCAN_RANK:
        raise CapacityError("subset scans are limited to rank %d" % MAX_SCAN_RANK)
    oracle = SubsetOracle(cosine_matrix(d))
    conn_sph = {m for m in d.connected_subsets(MAX_SCAN_RANK) if oracle.positive_definite(m)}
    out = []
    for mask in range(1, 1 << d.rank):
        comps = d.components(mask_to_set(mask))
        if all(set_to_mask(c) in conn_sph for c in comps):
            out.append(mask)
    return out
