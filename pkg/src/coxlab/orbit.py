"""Floating-point exploration of a Tits representation.

Everything here is numerical evidence, not proof: Cayley-ball
enumeration, attracting fixed points of proximal elements, sampling of
the cone P n P* and of the fundamental chamber.  Reports are plain dicts
and are reproducible for a fixed seed.
"""
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass, field

import numpy as np

from .classify import CartanKind, SubsetOracle, check_H0, support_components
from .diagram import CapacityError, set_to_mask

MAX_LENGTH = 12
MAX_ELEMENTS = 200_000
EVIDENCE = "numerical evidence"


class PreconditionError(ValueError):
    pass


@dataclass
class FloatRep:
    """Float copy of an exact representation."""
    generators: list
    gram: np.ndarray
    alpha: np.ndarray       # row s = the linear form alpha_s in working coordinates
    coords: np.ndarray      # column s = b_s in working coordinates
    cartan: np.ndarray


def float_rep(rep, dtype=np.float64):
    gens = [np.array(g.to_floats(), dtype=dtype) for g in rep.generators]
    G = np.array(rep.gram.to_floats(), dtype=dtype)
    X = np.array(rep.coords.to_floats(), dtype=dtype)
    A = np.array(rep.cartan.to_floats(), dtype=dtype)
    # alpha_s(v) = B(b_s, v) since A is symmetric
    return FloatRep(gens, G, X.T @ G, X, A)


@dataclass
class OrbitBall:
    rep: object
    max_length: int
    elements: list = field(default_factory=list)    # (word, matrix)
    tol: float = 1e-9
    sizes: list = field(default_factory=list)       # |ball(L)| for L = 0..max_length

    def __len__(self):
        return len(self.elements)


def _probe(dim):
    # a fixed generic vector for the sort key
    return np.array([1.0 / (i + np.pi) for i in range(dim)])


def enumerate_ball(rep, L, tol=1e-9, dtype=np.float64):
    """All group elements of word length <= L, deduplicated in max-norm."""
    if L > MAX_LENGTH:
        raise CapacityError("ball radius is limited to %d" % MAX_LENGTH)
    fr = float_rep(rep, dtype)
    k = rep.dim
    v = _probe(k)
    window = tol * np.abs(v).sum()
    ident = np.eye(k, dtype=dtype)
    elements = [((), ident)]
    keys = [(float((ident @ v)[0]), 0)]
    sizes = [1]
    frontier = [0]
    for _ in range(L):
        nxt = []
        for idx in frontier:
            word, M = elements[idx]
            for s, g in enumerate(fr.generators):
                if word and word[-1] == s:
                    continue
                N = M @ g
                key = float((N @ v)[0])
                lo = bisect_left(keys, (key - window, -1))
                hi = bisect_right(keys, (key + window, len(elements)))
                if any(np.max(np.abs(elements[j][1] - N)) <= tol for _, j in keys[lo:hi]):
                    continue
                elements.append((word + (s,), N))
                insort(keys, (key, len(elements) - 1))
                nxt.append(len(elements) - 1)
                if len(elements) > MAX_ELEMENTS:
                    raise CapacityError("more than %d elements" % MAX_ELEMENTS)
        frontier = nxt
        sizes.append(len(elements))
    ball = OrbitBall(rep, L, elements, tol, sizes)
    ball.float_rep = fr
    return ball


# ---------------------------------------------------------------------
# reference point and limit set

def perron_cone_point(A):
    """c > 0 on a negative-type component with A c < 0 there, 0 elsewhere."""
    n = A.shape[0]
    for comp in support_components_float(A):
        idx = sorted(comp)
        sub = A[np.ix_(idx, idx)]
        w, V = np.linalg.eigh(2 * np.eye(len(idx)) - sub)
        rho, vec = w[-1], V[:, -1]
        if rho > 2 + 1e-12:
            vec = np.abs(vec)
            c = np.zeros(n)
            c[idx] = vec / np.linalg.norm(vec)
            return c
    return None


def support_components_float(A):
    n = A.shape[0]
    left, comps = set(range(n)), []
    while left:
        start = min(left)
        seen, stack = {start}, [start]
        while stack:
            i = stack.pop()
            for j in list(left):
                if j not in seen and A[i, j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(seen)
        left -= seen
    return comps


def reference_point(fr):
    c = perron_cone_point(fr.cartan)
    if c is None:
        return None
    return fr.coords @ c


@dataclass
class LimitSample:
    points: list
    words: list
    isotropy: float = 0.0


def _dominant(M, max_squarings=60, threshold=1e-12):
    """Attracting eigenvector of M by power iteration on repeated squares."""
    ev = np.linalg.eigvals(M)
    mods = np.sort(np.abs(ev))[::-1]
    if len(mods) < 2 or mods[0] <= mods[1] * (1 + 1e-6):
        return None
    top = ev[np.argmax(np.abs(ev))]
    if abs(top.imag) > 1e-9 * abs(top):
        return None
    P = M / np.max(np.abs(M))
    x = np.ones(M.shape[0]) / np.sqrt(M.shape[0])
    for _ in range(max_squarings):
        y = P @ x
        ny = np.linalg.norm(y)
        if ny == 0:
            return None
        y /= ny
        Mx = M @ y
        mu = y @ Mx
        if np.linalg.norm(Mx - mu * y) <= threshold * abs(mu):
            return y
        x = y
        P = P @ P
        P /= np.max(np.abs(P))
    return None


def sample_limit_set(rep, ball, min_separation=1e-9):
    """Attracting fixed points of the proximal elements of the ball."""
    fr = getattr(ball, "float_rep", None) or float_rep(rep)
    ref = reference_point(fr)
    G = fr.gram
    points, words = [], []
    for word, M in ball.elements:
        if not word:
            continue
        x = _dominant(M)
        if x is None:
            continue
        if ref is not None and x @ G @ ref > 0:
            x = -x
        elif ref is None and x[np.flatnonzero(np.abs(x) > 1e-12)[0]] < 0:
            x = -x
        if any(np.max(np.abs(p - x)) < min_separation for p in points):
            continue
        points.append(x)
        words.append(word)
    iso = max((abs(p @ G @ p) for p in points), default=0.0)
    return LimitSample(points, words, float(iso))


def pairwise_inner(sample, G, separation=1e-6):
    """Largest B(x_i, x_j) over noncollinear pairs, or None if there are none."""
    if len(sample.points) < 2:
        return None
    P = np.array(sample.points)
    B = P @ G @ P.T
    best = None
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            if min(np.linalg.norm(P[i] - P[j]), np.linalg.norm(P[i] + P[j])) <= separation:
                continue
            best = B[i, j] if best is None else max(best, B[i, j])
    return None if best is None else float(best)


# ---------------------------------------------------------------------
# sampling checks

def _zero_type_witness(rep):
    """c >= 0 supported on a zero-type subset with A c = 0 there."""
    holds, U = check_H0(rep.cartan, rep.diagram)
    if holds:
        return None
    idx = sorted(U)
    A = np.array(rep.cartan.to_floats())
    w, V = np.linalg.eigh(A[np.ix_(idx, idx)])
    c = np.zeros(A.shape[0])
    c[idx] = np.abs(V[:, 0])
    return c


def check_lemma_light(rep, n_samples=1000, seed=0, tol=1e-9, require_H0=True):
    """Sample c >= 0 with A c <= 0 and test B(x, x) < 0 for x = sum c_s b_s.

    Samples are rejection-sampled perturbations of the Perron vector of a
    negative-type component.  With require_H0=False and H0 failing, the
    kernel vector of a zero-type subset is added as the first sample.
    """
    oracle = SubsetOracle(rep.cartan)
    if not any(oracle.cartan_kind(set_to_mask(c)) == CartanKind.NEGATIVE
               for c in support_components(rep.cartan)):
        raise PreconditionError("no negative-type component")
    witness = _zero_type_witness(rep)
    if witness is not None and require_H0:
        raise PreconditionError("the matrix does not satisfy H0")
    A = np.array(rep.cartan.to_floats())
    seedc = perron_cone_point(A)
    rng = np.random.default_rng(seed)
    samples = [] if witness is None else [witness]
    tries = 0
    while len(samples) < n_samples and tries < 200 * n_samples:
        tries += 1
        eps = rng.uniform(0, 1)
        c = seedc + eps * rng.uniform(-1, 1, size=len(seedc))
        if np.all(c >= 0) and np.all(A @ c <= 0) and np.any(c > 0):
            samples.append(c / np.linalg.norm(c))
    values = [float(c @ A @ c) for c in samples]
    violations = sum(1 for v in values if v >= -tol)
    return {
        "label": EVIDENCE,
        "seed": seed,
        "n_samples": len(samples),
        "requested": n_samples,
        "cone_found": len(samples) > 0,
        "max_B": max(values) if values else None,
        "violations": violations,
        "tolerances": {"B": tol},
        "ok": bool(samples) and violations == 0,
    }


def check_tiling_disjoint(rep, ball, n_samples=200, seed=0, tol=1e-9, margin=1e-3):
    """Images of interior chamber points under non-identity elements leave the chamber."""
    fr = getattr(ball, "float_rep", None) or float_rep(rep)
    rng = np.random.default_rng(seed)
    ref = reference_point(fr)
    if ref is None:
        # finite or affine groups: any point with all alpha_s < 0
        ref = np.linalg.lstsq(fr.alpha, -np.ones(fr.alpha.shape[0]), rcond=None)[0]
    ref = ref / np.linalg.norm(ref)
    pts = []
    tries = 0
    while len(pts) < n_samples and tries < 200 * n_samples:
        tries += 1
        x = ref + rng.uniform(0, 1) * rng.normal(size=len(ref))
        x /= np.linalg.norm(x)
        if np.all(fr.alpha @ x < -margin):
            pts.append(x)
    violations = 0
    worst = None
    X = np.array(pts).T if pts else np.zeros((len(ref), 0))
    for word, M in ball.elements:
        if not word or not pts:
            continue
        vals = fr.alpha @ (M @ X)
        # max over facets of alpha_s(gamma x), normalized by the image size
        scale = np.linalg.norm(M @ X, axis=0)
        outside = np.max(vals, axis=0) / scale
        m = float(np.min(outside))
        worst = m if worst is None else min(worst, m)
        violations += int(np.sum(outside < -tol))
    return {
        "label": EVIDENCE,
        "seed": seed,
        "n_samples": len(pts),
        "images": max(len(ball.elements) - 1, 0),
        "violations": violations,
        "min_max_alpha": worst,
        "tolerances": {"tiling": tol, "margin": margin},
        "ok": bool(pts) and violations == 0,
    }


def orbit_report(rep, L=6, n_samples=1000, n_tiling=200, seed=0, tol=1e-9):
    """Everything above in one deterministic dict."""
    ball = enumerate_ball(rep, L, tol)
    sample = sample_limit_set(rep, ball)
    inner = pairwise_inner(sample, ball.float_rep.gram)
    light = check_lemma_light(rep, n_samples, seed)
    tiling = check_tiling_disjoint(rep, ball, n_tiling, seed, tol)
    return {
        "label": EVIDENCE,
        "ball_size": len(ball),
        "ball_sizes": ball.sizes,
        "n_proximal": len(sample.points),
        "max_isotropy": sample.isotropy,
        "min_pairwise_inner": inner,
        "lemma_light": light,
        "tiling": tiling,
        "violations": light["violations"] + tiling["violations"],
        "seed": seed,
        "tolerances": {"dedup": tol, "tiling": tol, "B": 1e-9},
    }


def limit_points_csv(sample):
    lines = []
    for word, p in zip(sample.words, sample.points):
        lines.append(" ".join(str(s + 1) for s in word) + "," +
                     ",".join("%.17g" % x for x in p))
    return "\n".join(lines) + ("\n" if lines else "")
