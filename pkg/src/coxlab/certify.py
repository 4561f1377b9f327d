"""Certification pipelines.

* certify_ghc / certify_quasi_fuchsian check the hypotheses of the
  convex-cocompactness criteria for the Tits representation of the
  Cosine matrix (signature (d,2,0), resp. (d+1,1,0));
* the determinant identities used to control one- and two-parameter
  families;
* the lambda-Cosine quadratic f(lam) = det C^lam of a diagram with a
  single inf edge, its discriminant identity, the disconnectedness
  conditions and the root signatures;
* parameter sweeps and the region scan.

Every verdict carries the exact values it was derived from.
"""
from dataclasses import dataclass, field
from typing import Optional

from flint import arb_mat, ctx

from . import catalog
from .classify import check_H0, check_Hminus, moussong
from .diagram import (INF, CoxeterDiagram, DiagramError, bucket_at, cosine_matrix,
                      is_isomorphic, lambda_cosine_matrix)
from .exactla import Signature, det_sign, determinant, inertia, principal_minor
from .nerve import complexes_isomorphic, join_sphere_certificate, nerve
from .scalar import (AlgScalar, QuadExt, as_scalar, cos_squared_pi_over, expression, sign,
                     to_float, to_json)
from . import tits


class PreconditionError(ValueError):
    pass


def exact_evidence(x, digits=6):
    return {"exact": expression(x), "float": to_float(x, digits), "value": to_json(x)}


@dataclass
class Check:
    name: str
    passed: bool
    evidence: object = None

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "evidence": self.evidence}


@dataclass
class Certificate:
    diagram: str
    kind: str
    checks: list = field(default_factory=list)
    theorem: str = ""
    statement: str = ""

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self):
        return {
            "diagram": self.diagram,
            "kind": self.kind,
            "pass": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "conclusion": ({"theorem": self.theorem, "statement": self.statement}
                           if self.passed else None),
        }


def _nodes(T):
    return sorted(t + 1 for t in T)


def _diagram_id(d, diagram_id):
    if diagram_id:
        return diagram_id
    from .diagram import serialize
    return serialize(d).strip().replace("\n", "; ")


# ---------------------------------------------------------------------
# hypothesis pipelines

def _pipeline(d, target, kind, diagram_id, theorem, statement, cap=50):
    cert = Certificate(_diagram_id(d, diagram_id), kind, theorem=theorem, statement=statement)
    inf_edges = d.infinite_edges()
    cert.checks.append(Check("no_infinite_label", not inf_edges,
                             {"infinite_edges": [_nodes(e) for e in inf_edges]}))

    verdict = moussong(d)
    cert.checks.append(Check("moussong", verdict.hyperbolic, {
        "witness": [_nodes(w) for w in verdict.witness] if verdict.witness else None,
        "reason": verdict.reason}))

    join = join_sphere_certificate(d)
    join_ok = join is not None and join.d == d.rank - 2
    cert.checks.append(Check("join_sphere", join_ok, join.to_json() if join else None))

    C = cosine_matrix(d)
    sig = inertia(C)
    det = determinant(C)
    cert.checks.append(Check("signature", tuple(sig) == tuple(target), {
        "signature": list(sig), "expected": list(target), "det": exact_evidence(det)}))

    h0, w0 = check_H0(C, d)
    cert.checks.append(Check("H0", h0, {"witness": _nodes(w0) if w0 else None}))
    hm, wm = check_Hminus(C, d)
    cert.checks.append(Check("Hminus", hm, {"witness": [_nodes(w) for w in wm] if wm else None}))

    try:
        rep = tits.build(C, d)
        rel = tits.verify_relations(rep, cap=max([cap] + d.finite_labels()))
        inv = tits.verify_invariance(rep)
        cert.checks.append(Check("tits_relations", rel["ok"], {
            k: rel[k] for k in ("involutions", "finite", "infinite", "checked_pairs", "cap")}))
        cert.checks.append(Check("tits_invariance", inv, {"basis_mode": rep.basis_mode,
                                                          "dim": rep.dim}))
    except (tits.ZeroTypeComponent, DiagramError) as exc:
        cert.checks.append(Check("tits_relations", False, {"error": str(exc)}))
        cert.checks.append(Check("tits_invariance", False, {"error": str(exc)}))
    return cert


def certify_ghc(d, diagram_id=None):
    """Hypotheses for a strictly GHC-regular Tits representation in O(d,2)."""
    n = d.rank
    return _pipeline(
        d, Signature(n - 2, 2, 0), "GHC", diagram_id,
        "GHC-regularity criterion for reflection groups",
        "W is Gromov-hyperbolic, its nerve is a (d-1)-sphere, and the Cosine matrix satisfies "
        "H0, H- with signature (d,2,0); hence the Tits representation into O(d,2) is "
        "strictly GHC-regular (d = %d)." % (n - 2))


def certify_quasi_fuchsian(d, diagram_id=None):
    """Hypotheses for a quasi-Fuchsian Tits representation in O(d+1,1)."""
    n = d.rank
    return _pipeline(
        d, Signature(n - 1, 1, 0), "QuasiFuchsian", diagram_id,
        "quasi-Fuchsian criterion for reflection groups",
        "W is Gromov-hyperbolic, its nerve is a (d-1)-sphere, and the Cosine matrix satisfies "
        "H0, H- with signature (d+1,1,0); hence the Tits representation into O(d+1,1) is "
        "quasi-Fuchsian (d = %d)." % (n - 2))


# ---------------------------------------------------------------------
# determinant identities

def _det(C, T):
    T = sorted(T)
    if not T:
        return AlgScalar(1)
    return determinant(principal_minor(C, T))


def _reachable(d, start, banned_edges):
    seen, stack = {start}, [start]
    while stack:
        i = stack.pop()
        for j in d.neighbors(i):
            if (min(i, j), max(i, j)) in banned_edges or j in seen:
                continue
            seen.add(j)
            stack.append(j)
    return frozenset(seen)


def single_edge_split(d, s, t):
    """(S1, S2) for the bridge s-t, checking the precondition."""
    if d.label(s, t) in (2, INF) or isinstance(d.label(s, t), str):
        raise PreconditionError("s-t must be an edge with a finite label")
    S1 = _reachable(d, s, {(min(s, t), max(s, t))})
    if t in S1:
        raise PreconditionError("s-t is not the only edge between the two sides")
    S2 = frozenset(d.nodes) - S1
    return S1, S2


def vinberg_single_edge_sides(d, s, t):
    S1, S2 = single_edge_split(d, s, t)
    C = cosine_matrix(d)
    lhs = determinant(C)
    rhs = (_det(C, S1) * _det(C, S2)
           - 4 * _det(C, S1 - {s}) * _det(C, S2 - {t}) * cos_squared_pi_over(d.label(s, t)))
    return lhs, rhs


def vinberg_single_edge_identity(d, s, t):
    """det C_S = det C_S1 det C_S2 - 4 det C_{S1-s} det C_{S2-t} cos^2(pi/M_st)."""
    lhs, rhs = vinberg_single_edge_sides(d, s, t)
    return (lhs - rhs).is_zero()


def two_edge_split(d, r, s, t):
    banned = {(min(r, t), max(r, t)), (min(s, t), max(s, t))}
    for a in (r, s):
        if d.label(a, t) in (2, INF) or isinstance(d.label(a, t), str):
            raise PreconditionError("r-t and s-t must be edges with finite labels")
    S1 = _reachable(d, r, banned) | _reachable(d, s, banned)
    if t in S1:
        raise PreconditionError("t is joined to the r, s side by other edges")
    S2 = frozenset(d.nodes) - S1
    crossing = [(a, b) for a in S1 for b in S2 if d.label(a, b) != 2]
    if sorted(crossing) != sorted([(r, t), (s, t)]):
        raise PreconditionError("exactly two edges r-t, s-t must join the two sides")
    return S1, S2


def two_edge_ratio(d, r, s, t):
    """det C_{S1 + t} / det C_{S1}."""
    S1, _ = two_edge_split(d, r, s, t)
    C = cosine_matrix(d)
    return _det(C, S1 | {t}) / _det(C, S1)


def vinberg_two_edge_sides(d, r, s, t):
    S1, S2 = two_edge_split(d, r, s, t)
    C = cosine_matrix(d)
    d1 = _det(C, S1)
    if d1.is_zero():
        raise PreconditionError("det C_S1 vanishes")
    ratio = _det(C, S1 | {t}) / d1
    lhs = determinant(C)
    rhs = d1 * _det(C, S2) + d1 * _det(C, S2 - {t}) * (ratio - 2)
    return lhs, rhs


def vinberg_two_edge_identity(d, r, s, t):
    """det C_S = det C_S1 det C_S2 + det C_S1 det C_{S2-t} (det C_{S1+t}/det C_S1 - 2)."""
    lhs, rhs = vinberg_two_edge_sides(d, r, s, t)
    return (lhs - rhs).is_zero()


# ---------------------------------------------------------------------
# families

def widen(template, **ranges):
    """Copy of a parametric diagram with some parameter ranges replaced."""
    params = dict(template.params)
    for k, v in ranges.items():
        if k not in params:
            raise DiagramError("unknown parameter %r" % k)
        params[k] = v
    return CoxeterDiagram(template.rank, template.edges(), template.names, params)


@dataclass
class SweepRow:
    params: dict
    det: AlgScalar
    signature: Signature
    hyperbolic: bool
    kind: str


@dataclass
class SweepResult:
    rows: list
    increasing: Optional[bool]
    limit: Optional[AlgScalar]


def certificate_kind(d):
    """'GHC', 'QuasiFuchsian' or 'none' from the full pipelines."""
    sig = inertia(cosine_matrix(d))
    n = d.rank
    if tuple(sig) == (n - 2, 2, 0):
        return "GHC" if certify_ghc(d).passed else "none"
    if tuple(sig) == (n - 1, 1, 0):
        return "QuasiFuchsian" if certify_quasi_fuchsian(d).passed else "none"
    return "none"


def sweep_family(template, values, certify=True):
    """Tabulate a parametric family over the given parameter values.

    `values` is an iterable of dicts (or of ints for one-parameter
    families).  Rows come out in the given order; `increasing` compares
    consecutive exact determinants and `limit` is the determinant with
    every parameter label replaced by inf (entry -2).
    """
    names = sorted(template.params)
    rows = []
    for v in values:
        if not isinstance(v, dict):
            if len(names) != 1:
                raise DiagramError("give a dict of values for a multi-parameter family")
            v = {names[0]: v}
        d = template.instantiate(**v)
        C = cosine_matrix(d)
        det = determinant(C)
        sig = inertia(C)
        hyp = moussong(d).hyperbolic
        kind = certificate_kind(d) if certify else "-"
        rows.append(SweepRow(dict(v), det, sig, hyp, kind))
    increasing = None
    if len(rows) > 1:
        increasing = all(sign(b.det - a.det) > 0 for a, b in zip(rows, rows[1:]))
    limit = determinant(cosine_matrix(template.instantiate(**{n: INF for n in names}))) \
        if names else None
    return SweepResult(rows, increasing, limit)


# ---------------------------------------------------------------------
# the lambda quadratic

@dataclass
class LambdaQuadratic:
    a0: AlgScalar
    a1: AlgScalar
    a2: AlgScalar
    delta: AlgScalar
    roots: Optional[tuple] = None      # (lam1, lam2) as QuadExt, lam1 < lam2
    double_root: Optional[AlgScalar] = None

    def __call__(self, lam):
        lam = as_scalar(lam)
        return self.a2 * lam * lam + self.a1 * lam + self.a0

    def to_json(self, digits=6):
        out = {k: exact_evidence(getattr(self, k), digits) for k in ("a0", "a1", "a2", "delta")}
        out["roots"] = [exact_evidence(r, digits) for r in self.roots] if self.roots else None
        out["double_root"] = (exact_evidence(self.double_root, digits)
                              if self.double_root is not None else None)
        return out


def infinite_edge(d):
    edges = d.infinite_edges()
    if len(edges) != 1:
        raise PreconditionError("need exactly one inf edge, found %d" % len(edges))
    return edges[0]


def default_parts(d, dark=None, light=None):
    """S1 = S - {light}, S2 = S - {dark}; by default light is the larger endpoint."""
    u, v = infinite_edge(d)
    if dark is None or light is None:
        dark, light = u, v
    if {dark, light} != {u, v}:
        raise PreconditionError("dark and light must be the endpoints of the inf edge")
    S = frozenset(d.nodes)
    return S - {light}, S - {dark}


def lambda_polynomial(d):
    """f(lam) = det C^lam by exact interpolation at lam = 0, 1, 2."""
    infinite_edge(d)
    f0, f1, f2 = (determinant(lambda_cosine_matrix(d, k)) for k in (0, 1, 2))
    a0 = f0
    a2 = (f2 - 2 * f1 + f0) / 2
    a1 = f1 - f0 - a2
    delta = a1 * a1 - 4 * a0 * a2
    q = LambdaQuadratic(a0, a1, a2, delta)
    if a2.is_zero():
        return q
    s = sign(delta)
    if s > 0:
        c = -a1 / (2 * a2)
        w = 1 / (2 * a2)
        r1, r2 = QuadExt(c, -w, delta), QuadExt(c, w, delta)
        q.roots = (r1, r2) if sign(r2 - r1) > 0 else (r2, r1)
    elif s == 0:
        q.double_root = -a1 / (2 * a2)
    return q


def discriminant_sides(d, dark=None, light=None):
    q = lambda_polynomial(d)
    S1, S2 = default_parts(d, dark, light)
    C = cosine_matrix(d)
    return q.delta, 16 * _det(C, S1) * _det(C, S2)


def discriminant_identity(d, dark=None, light=None):
    """a1^2 - 4 a0 a2 = 16 det C_S1 det C_S2."""
    lhs, rhs = discriminant_sides(d, dark, light)
    return (lhs - rhs).is_zero()


def _find_reference(d):
    """A lattice diagram of the same shape (labels >= 7 identified)."""
    key = bucket_at(7)
    for table in ("Tumarkin_dim4", "Tumarkin_dim6"):
        for e in catalog.entries(table):
            ref = e.instantiate()
            if ref.rank == d.rank and is_isomorphic(d, ref, key) is not None:
                return e.key, ref
    return None, None


def disconnected_check(d, dark=None, light=None, diagram_id=None, reference=None):
    """Certify two isolated representations from the lambda quadratic.

    Conditions: det C_S1 det C_S2 > 0, a1 a2 < 0 and a0 a2 > 0.  Then
    f has two positive roots lam1 < lam2, and each C^lam_i must have
    inertia (m, n, 1) where (m, n) is the signature of C_S1; nullity one
    is shown by a nonzero minor of size rank - 1.
    """
    S1, S2 = default_parts(d, dark, light)
    C = cosine_matrix(d)
    d1, d2 = _det(C, S1), _det(C, S2)
    q = lambda_polynomial(d)
    cert = Certificate(_diagram_id(d, diagram_id), "Disconnected")
    conds = {
        "detS1_detS2_positive": sign(d1) * sign(d2) > 0,
        "a1_a2_negative": sign(q.a1) * sign(q.a2) < 0,
        "a0_a2_positive": sign(q.a0) * sign(q.a2) > 0,
    }
    cert.checks.append(Check("sign_conditions", all(conds.values()), dict(
        conds, det_S1=exact_evidence(d1), det_S2=exact_evidence(d2),
        S1=_nodes(S1), S2=_nodes(S2), quadratic=q.to_json())))
    ident = (q.delta - 16 * d1 * d2).is_zero()
    cert.checks.append(Check("discriminant_identity", ident, None))
    if not all(conds.values()) or q.roots is None:
        cert.checks.append(Check("roots", False, {"reason": "sign conditions fail"}))
        return cert

    sig1 = inertia(principal_minor(C, S1))
    target = Signature(sig1.pos, sig1.neg, 1)
    root_ev = []
    roots_ok = sign(q.roots[0]) > 0 and sign(q.roots[1] - q.roots[0]) > 0
    u, v = infinite_edge(d)
    n = d.rank
    for lam in q.roots:
        fval = q(lam)
        Ci = lambda_cosine_matrix(d, lam)
        sig = inertia(Ci)
        # a nonzero minor of size n-1, trying to delete an inf endpoint first
        minor = None
        for drop in [u, v] + [k for k in range(n) if k not in (u, v)]:
            keep = [k for k in range(n) if k != drop]
            if not determinant(principal_minor(Ci, keep)).is_zero():
                minor = drop
                break
        ok = fval.is_zero() and tuple(sig) == tuple(target) and minor is not None
        roots_ok = roots_ok and ok
        root_ev.append({"lambda": exact_evidence(lam), "f_lambda_zero": fval.is_zero(),
                        "signature": list(sig), "nonzero_minor_drops": minor + 1
                        if minor is not None else None})
    cert.checks.append(Check("roots", roots_ok, {"target_signature": list(target),
                                                 "roots": root_ev}))

    verdict = moussong(d)
    cert.checks.append(Check("moussong", verdict.hyperbolic, {"reason": verdict.reason}))
    if reference is None:
        ref_key, ref = _find_reference(d)
    else:
        ref_key, ref = "given", reference
    iso = complexes_isomorphic(nerve(d), nerve(ref)) if ref is not None else None
    cert.checks.append(Check("nerve_isomorphic_to_reference", iso is not None,
                             {"reference": ref_key}))
    if target.neg == 2:
        cert.theorem = "isolated GHC-regular representations"
        cert.statement = ("The character variety of W into O(%d,2) contains two distinct "
                          "isolated points given by the Tits representations of C^lam1 and "
                          "C^lam2, both strictly GHC-regular." % target.pos)
    else:
        cert.theorem = "isolated quasi-Fuchsian representations"
        cert.statement = ("The character variety of W into O(%d,1) contains two distinct "
                          "isolated points given by the Tits representations of C^lam1 and "
                          "C^lam2, both quasi-Fuchsian." % target.pos)
    return cert


# ---------------------------------------------------------------------
# region scan

REGION_D, REGION_L, NEITHER = "R_D", "R_L", "Neither"


@dataclass
class RegionVerdict:
    membership: str
    signs: tuple          # (det S1, det S2, a0, a1, a2)
    boundary: bool = False


def _ball_sign(ball):
    if ball > 0:
        return 1
    if ball < 0:
        return -1
    return None


def lambda_signs(d, dark=None, light=None):
    """Signs of (det C_S1, det C_S2, a0, a1, a2).

    Determinants are enclosed with interval arithmetic; a sign is only
    read off a ball that excludes zero, otherwise the exact value is
    computed.
    """
    S1, S2 = default_parts(d, dark, light)
    C = cosine_matrix(d)
    s1 = det_sign(principal_minor(C, S1))
    s2 = det_sign(principal_minor(C, S2))
    mats = [lambda_cosine_matrix(d, k) for k in (0, 1, 2)]
    prec = 128
    signs = None
    while prec <= 2048:
        with ctx.workprec(prec):
            f = [arb_mat([[x.enclosure(prec) for x in r] for r in M.rows]).det() for M in mats]
            a0 = f[0]
            a2 = (f[2] - 2 * f[1] + f[0]) / 2
            a1 = f[1] - f[0] - a2
            signs = [_ball_sign(b) for b in (a0, a1, a2)]
        if None not in signs:
            break
        prec *= 4
    if None in signs:
        q = lambda_polynomial(d)
        signs = [sign(q.a0), sign(q.a1), sign(q.a2)]
    return (s1, s2) + tuple(signs)


def region_from_signs(signs):
    s1, s2, a0, a1, a2 = signs
    boundary = 0 in signs
    if s1 * s2 > 0 and a1 * a2 < 0 and a0 * a2 > 0:
        return RegionVerdict(REGION_D if s1 > 0 else REGION_L, signs, False)
    return RegionVerdict(NEITHER, signs, boundary)


def region_scan(pmax, qmax, pmin=7, qmin=7, entry=None, upper_triangle=False):
    """Map (p, q) -> RegionVerdict for the first two-parameter family."""
    if pmax < 7 or qmax < 7:
        raise ValueError("pmax and qmax must be >= 7")
    e = entry or catalog.get_entry("families_dim4", 1)
    out = {}
    for p in range(pmin, pmax + 1):
        for q in range(qmin, qmax + 1):
            if upper_triangle and q < p:
                continue
            d = e.template.instantiate(p=p, q=q)
            out[(p, q)] = region_from_signs(lambda_signs(d, e.dark, e.light))
    return out
