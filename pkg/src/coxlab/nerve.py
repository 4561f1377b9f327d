"""Nerves of Coxeter groups and the Lannér-join sphere criterion."""
from dataclasses import dataclass
from itertools import combinations

from .classify import MAX_SCAN_RANK, Kind, SubsetOracle, definition_kind, spherical_subsets
from .diagram import CapacityError, cosine_matrix, mask_to_set, set_to_mask


@dataclass(frozen=True)
class SimplicialComplex:
    """Abstract simplicial complex stored by its maximal faces."""
    vertices: tuple
    facets: tuple

    @classmethod
    def from_faces(cls, vertices, faces):
        faces = sorted({frozenset(f) for f in faces}, key=lambda f: (-len(f), sorted(f)))
        maximal = []
        for f in faces:
            if not any(f <= g for g in maximal):
                maximal.append(f)
        maximal.sort(key=lambda f: (len(f), sorted(f)))
        return cls(tuple(vertices), tuple(maximal))

    def faces(self):
        out = set()
        for f in self.facets:
            items = sorted(f)
            for k in range(1, len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, k))
        return out

    @property
    def dimension(self):
        return max((len(f) for f in self.facets), default=0) - 1

    def f_vector(self):
        counts = [0] * (self.dimension + 1)
        for f in self.faces():
            counts[len(f) - 1] += 1
        return tuple(counts)

    def euler_characteristic(self):
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def to_json(self, names=None):
        name = (lambda v: names[v]) if names else (lambda v: v + 1)
        return {"vertices": [name(v) for v in self.vertices],
                "facets": [[name(v) for v in sorted(f)] for f in self.facets]}

    def to_dot(self, names=None):
        name = (lambda v: names[v]) if names else (lambda v: v + 1)
        edges = sorted({tuple(sorted(e)) for f in self.facets
                        for e in combinations(sorted(f), 2)})
        out = ["graph nerve {"]
        out += ['  v%d [label="%s"];' % (v + 1, name(v)) for v in self.vertices]
        out += ["  v%d -- v%d;" % (a + 1, b + 1) for a, b in edges]
        out.append("}")
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class JoinCertificate:
    s1: frozenset
    s2: frozenset
    d: int
    another_exists: bool = False

    def to_json(self):
        return {"S1": sorted(v + 1 for v in self.s1), "S2": sorted(v + 1 for v in self.s2),
                "d": self.d, "another_bipartition": self.another_exists}


def nerve(d):
    """Nerve: simplices are the nonempty spherical subsets."""
    if d.rank > MAX_SCAN_RANK:
        raise CapacityError("nerve computation is limited to rank %d" % MAX_SCAN_RANK)
    faces = [mask_to_set(m) for m in spherical_subsets(d)]
    return SimplicialComplex.from_faces(tuple(range(d.rank)), faces)


def join_complex(s1, s2):
    """The join of the boundaries of the simplices on s1 and on s2."""
    facets = [(frozenset(s1) - {a}) | (frozenset(s2) - {b}) for a in s1 for b in s2]
    return SimplicialComplex.from_faces(tuple(sorted(set(s1) | set(s2))), facets)


def join_sphere_certificate(d, find_all=False):
    """Search a bipartition S = S1 u S2 into Lannér subsets such that
    T is spherical iff T contains neither S1 nor S2.

    S1 is the part containing the first node; parts are tried by
    increasing size of S1.  The returned certificate flags whether a
    second valid bipartition exists.
    """
    n = d.rank
    if n > MAX_SCAN_RANK:
        raise CapacityError("join search is limited to rank %d" % MAX_SCAN_RANK)
    if n < 2:
        return None
    oracle = SubsetOracle(cosine_matrix(d))
    sph = set(spherical_subsets(d))
    full = (1 << n) - 1
    found = []
    for k in range(1, n):
        for rest in combinations(range(1, n), k - 1):
            m1 = set_to_mask((0,) + rest)
            m2 = full ^ m1
            if not _is_lanner(d, oracle, m1) or not _is_lanner(d, oracle, m2):
                continue
            if all((T in sph) == ((T & m1) != m1 and (T & m2) != m2) for T in range(1, full + 1)):
                found.append((m1, m2))
                if len(found) == 2:
                    break
        if len(found) == 2:
            break
    if not found:
        return None
    m1, m2 = found[0]
    s1, s2 = mask_to_set(m1), mask_to_set(m2)
    return JoinCertificate(s1, s2, len(s1) + len(s2) - 2, len(found) > 1)


def _is_lanner(d, oracle, mask):
    return d.is_connected(mask_to_set(mask)) and definition_kind(oracle, mask) == Kind.LANNER


def complexes_isomorphic(c1, c2):
    """Vertex bijection carrying the facets of c1 onto those of c2, or None."""
    v1, v2 = list(c1.vertices), list(c2.vertices)
    if len(v1) != len(v2) or sorted(map(len, c1.facets)) != sorted(map(len, c2.facets)):
        return None

    def profile(c, v):
        return tuple(sorted(len(f) for f in c.facets if v in f))

    p1 = {v: profile(c1, v) for v in v1}
    p2 = {v: profile(c2, v) for v in v2}
    if sorted(p1.values()) != sorted(p2.values()):
        return None
    target = set(c2.facets)
    order = sorted(v1, key=lambda v: (sum(1 for f in c1.facets if v in f), v), reverse=True)
    image = {}
    used = set()
    f1 = [set(f) for f in c1.facets]

    def consistent():
        # every facet whose vertices are all mapped must land on a facet
        for f in f1:
            if f <= image.keys():
                if frozenset(image[v] for v in f) not in target:
                    return False
        return True

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in v2:
            if w in used or p2[w] != p1[v]:
                continue
            image[v] = w
            used.add(w)
            if consistent() and extend(i + 1):
                return True
            del image[v]
            used.discard(w)
        return False

    if not extend(0):
        return None
    return {v: image[v] for v in v1}
