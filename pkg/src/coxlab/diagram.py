"""Coxeter diagrams: data model, text format, matrices and structure.

A diagram on n nodes stores only the labels >= 3 (and infinity);
every other pair carries the implicit label 2.  Nodes are 0-based
internally and 1-based in the text format.

Text format::

    # comment
    rank 7
    param p 7
    edge 1 2 4
    edge 6 7 $p
    edge 3 4 inf
"""
import math
import re
from itertools import combinations

from .exactla import SymMatrix
from .scalar import ZERO, as_scalar, sign, two_cos_pi_over

INF = math.inf


class DiagramError(ValueError):
    pass


class DiagramSyntaxError(DiagramError):
    def __init__(self, message, line, column=1):
        super().__init__("line %d, column %d: %s" % (line, column, message))
        self.line = line
        self.column = column


def check_label(m):
    if m == INF:
        return INF
    if isinstance(m, str):
        return m
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise DiagramError("invalid label %r (labels are integers >= 2 or inf)" % (m,))
    return m


def label_text(m):
    return "inf" if m == INF else str(m)


class CoxeterDiagram:
    """Labeled graph on nodes 0..rank-1.

    Parameters
    ----------
    rank : int
        Number of nodes.
    edges : iterable of (i, j, m)
        0-based node pairs with labels m >= 2, `INF`, or a parameter
        name (str) declared in `params`.  Pairs with label 2 may be
        given and are dropped.
    names : sequence of str, optional
        Display names; default "1", "2", ...
    params : dict, optional
        Parameter name -> (min, max or None).
    """

    def __init__(self, rank, edges=(), names=None, params=None):
        if not isinstance(rank, int) or rank < 1:
            raise DiagramError("rank must be a positive integer")
        self.rank = rank
        self.params = dict(params or {})
        self.names = tuple(names) if names is not None else tuple(str(i + 1) for i in range(rank))
        if len(self.names) != rank:
            raise DiagramError("need one name per node")
        labels = {}
        for i, j, m in edges:
            if not (0 <= i < rank and 0 <= j < rank):
                raise DiagramError("node index out of range: (%d, %d)" % (i + 1, j + 1))
            if i == j:
                raise DiagramError("diagonal labels are implicit")
            m = check_label(m)
            if isinstance(m, str) and m not in self.params:
                raise DiagramError("undeclared parameter %r" % m)
            key = (min(i, j), max(i, j))
            if key in labels and labels[key] != m:
                raise DiagramError("conflicting labels for edge (%d, %d)" % (key[0] + 1, key[1] + 1))
            if m != 2:
                labels[key] = m
        self._labels = labels

    # -- basic access ----------------------------------------------------
    def label(self, i, j):
        if i == j:
            raise DiagramError("label(s, s) is undefined")
        return self._labels.get((min(i, j), max(i, j)), 2)

    def edges(self):
        """Sorted list of (i, j, label) with label >= 3 or inf."""
        return [(i, j, m) for (i, j), m in sorted(self._labels.items())]

    @property
    def nodes(self):
        return range(self.rank)

    def neighbors(self, i):
        return [j for j in self.nodes if j != i and self.label(i, j) != 2]

    def is_parametric(self):
        return any(isinstance(m, str) for m in self._labels.values())

    def infinite_edges(self):
        return [(i, j) for i, j, m in self.edges() if m == INF]

    def finite_labels(self):
        return sorted({m for _, _, m in self.edges() if isinstance(m, int)})

    def coxeter_matrix(self):
        return [[1 if i == j else self.label(i, j) for j in self.nodes] for i in self.nodes]

    def instantiate(self, **values):
        """Substitute parameter values, checking declared ranges."""
        for name, (lo, hi) in self.params.items():
            if name not in values:
                raise DiagramError("missing value for parameter %r" % name)
            v = values[name]
            if v != INF and (not isinstance(v, int) or v < lo or (hi is not None and v > hi)):
                raise DiagramError("parameter %s=%r outside its range" % (name, v))
        edges = [(i, j, values[m] if isinstance(m, str) else m) for i, j, m in self.edges()]
        return CoxeterDiagram(self.rank, edges, self.names)

    def __eq__(self, other):
        return (isinstance(other, CoxeterDiagram) and self.rank == other.rank
                and self._labels == other._labels and self.params == other.params)

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self._labels.items(), key=str))))

    def __repr__(self):
        body = ", ".join("%d-%d:%s" % (i + 1, j + 1, label_text(m)) for i, j, m in self.edges())
        return "CoxeterDiagram(rank=%d, edges=[%s])" % (self.rank, body)

    # -- structure -----------------------------------------------------
    def _check_nodes(self, T):
        T = frozenset(T)
        for t in T:
            if not (isinstance(t, int) and 0 <= t < self.rank):
                raise DiagramError("node %r out of range" % (t,))
        return T

    def restrict(self, T):
        """The diagram of the special subgroup W_T (nodes renumbered in order)."""
        idx = sorted(self._check_nodes(T))
        if not idx:
            raise DiagramError("empty subset")
        pos = {t: k for k, t in enumerate(idx)}
        edges = [(pos[i], pos[j], m) for i, j, m in self.edges() if i in pos and j in pos]
        used = {m for _, _, m in edges if isinstance(m, str)}
        params = {k: v for k, v in self.params.items() if k in used}
        return CoxeterDiagram(len(idx), edges, [self.names[t] for t in idx], params)

    def components(self, T=None):
        """Connected components (as frozensets) of the diagram restricted to T."""
        T = set(self.nodes) if T is None else set(self._check_nodes(T))
        comps = []
        while T:
            start = min(T)
            seen = {start}
            stack = [start]
            while stack:
                i = stack.pop()
                for j in self.neighbors(i):
                    if j in T and j not in seen:
                        seen.add(j)
                        stack.append(j)
            comps.append(frozenset(seen))
            T -= seen
        return comps

    def is_connected(self, T=None):
        return len(self.components(T)) == 1

    def orthogonal(self, T, U):
        T, U = self._check_nodes(T), self._check_nodes(U)
        if T & U:
            raise DiagramError("orthogonality is defined for disjoint subsets")
        return all(self.label(t, u) == 2 for t in T for u in U)

    def connected_subsets(self, max_rank=16):
        """All nonempty connected subsets, as bitmasks (ascending)."""
        if self.rank > max_rank:
            raise CapacityError("rank %d exceeds the subset-scan limit %d" % (self.rank, max_rank))
        nbr = [sum(1 << j for j in self.neighbors(i)) for i in self.nodes]
        found = set()
        # grow from each smallest element, only adding larger nodes
        for root in self.nodes:
            stack = [1 << root]
            seen = {1 << root}
            while stack:
                mask = stack.pop()
                found.add(mask)
                frontier = 0
                m = mask
                while m:
                    low = m & -m
                    frontier |= nbr[low.bit_length() - 1]
                    m ^= low
                frontier &= ~mask
                frontier &= ~((1 << root) - 1)
                while frontier:
                    low = frontier & -frontier
                    frontier ^= low
                    nxt = mask | low
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        return sorted(found, key=lambda m: (bin(m).count("1"), m))


class CapacityError(ValueError):
    pass


def mask_to_set(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def set_to_mask(T):
    return sum(1 << t for t in T)


# ---------------------------------------------------------------------
# matrices

def cosine_entry(m):
    if m == INF:
        return as_scalar(-2)
    if m == 2:
        return ZERO
    return -two_cos_pi_over(m)


def cosine_matrix(d):
    """Cosine matrix: 2 on the diagonal, -2cos(pi/m) off it, -2 for inf."""
    return lambda_cosine_matrix(d, 0)


def lambda_cosine_matrix(d, lam):
    """Cosine matrix with every inf entry replaced by -2(1 + lam)."""
    if d.is_parametric():
        raise DiagramError("instantiate the parameters first")
    lam = as_scalar(lam)
    if sign(lam) < 0:
        raise DiagramError("lambda must be nonnegative")
    inf_entry = -2 * (1 + lam)
    n = d.rank
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = as_scalar(2)
    for i, j, m in d.edges():
        e = inf_entry if m == INF else cosine_entry(m)
        rows[i][j] = rows[j][i] = e
    return SymMatrix(rows)


# ---------------------------------------------------------------------
# isomorphism

def is_isomorphic(d1, d2, coarsen=None):
    """Label-preserving bijection d1 -> d2, or None.

    Returns the lexicographically least bijection as a tuple f with
    f[i] the image of node i.  `coarsen` maps labels to classes before
    comparison (e.g. lambda m: min(m, 7) buckets every label >= 7).
    """
    if d1.rank != d2.rank:
        return None
    key = coarsen or (lambda m: m)
    n = d1.rank
    L1 = [[None if i == j else key(d1.label(i, j)) for j in range(n)] for i in range(n)]
    L2 = [[None if i == j else key(d2.label(i, j)) for j in range(n)] for i in range(n)]

    def profile(L, i):
        return sorted((str(m) for j, m in enumerate(L[i]) if j != i))

    p1 = [profile(L1, i) for i in range(n)]
    p2 = [profile(L2, i) for i in range(n)]
    if sorted(map(tuple, p1)) != sorted(map(tuple, p2)):
        return None
    cand = [[j for j in range(n) if p2[j] == p1[i]] for i in range(n)]
    image = [None] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for j in cand[i]:
            if used[j]:
                continue
            if all(L1[i][k] == L2[j][image[k]] for k in range(i)):
                image[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return tuple(image) if extend(0) else None


def bucket_at(threshold):
    """Label coarsening that identifies every finite label >= threshold."""
    def key(m):
        if isinstance(m, int) and m >= threshold:
            return ">=%d" % threshold
        return m
    return key


# ---------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"\S+")


def parse(text):
    """Parse the line-oriented diagram format."""
    rank = None
    params = {}
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]
        if not toks:
            continue
        word, col = toks[0]
        args = toks[1:]
        if rank is None and word != "rank":
            raise DiagramSyntaxError("the first directive must be 'rank'", lineno, col)
        if word == "rank":
            if rank is not None:
                raise DiagramSyntaxError("repeated 'rank'", lineno, col)
            if len(args) != 1:
                raise DiagramSyntaxError("usage: rank <n>", lineno, col)
            rank = _int(args[0], lineno)
            if rank < 1:
                raise DiagramSyntaxError("rank must be positive", lineno, args[0][1])
        elif word == "param":
            if len(args) not in (2, 3) or not re.fullmatch(r"[A-Za-z_]\w*", args[0][0]):
                raise DiagramSyntaxError("usage: param <name> <min> [<max>]", lineno, col)
            lo = _int(args[1], lineno)
            hi = _int(args[2], lineno) if len(args) == 3 else None
            if lo < 2 or (hi is not None and hi < lo):
                raise DiagramSyntaxError("bad parameter range", lineno, args[1][1])
            params[args[0][0]] = (lo, hi)
        elif word == "edge":
            if len(args) != 3:
                raise DiagramSyntaxError("usage: edge <i> <j> <m>", lineno, col)
            i, j = _int(args[0], lineno), _int(args[1], lineno)
            for tok, v in ((args[0], i), (args[1], j)):
                if not 1 <= v <= rank:
                    raise DiagramSyntaxError("node index %d out of range" % v, lineno, tok[1])
            if i == j:
                raise DiagramSyntaxError("an edge needs two distinct nodes", lineno, args[0][1])
            mtok, mcol = args[2]
            if mtok == "inf":
                m = INF
            elif mtok.startswith("$"):
                m = mtok[1:]
                if m not in params:
                    raise DiagramSyntaxError("undeclared parameter %r" % m, lineno, mcol)
            else:
                m = _int(args[2], lineno)
                if m < 2:
                    raise DiagramSyntaxError("label must be >= 2", lineno, mcol)
            key = (min(i, j), max(i, j))
            if key in seen and seen[key] != m:
                raise DiagramSyntaxError("conflicting labels for edge %d-%d" % key, lineno, col)
            seen[key] = m
            edges.append((i - 1, j - 1, m))
        else:
            raise DiagramSyntaxError("unknown directive %r" % word, lineno, col)
    if rank is None:
        raise DiagramSyntaxError("missing 'rank' directive", 1)
    return CoxeterDiagram(rank, edges, params=params)


def _int(tok, lineno):
    text, col = tok
    try:
        return int(text)
    except ValueError:
        raise DiagramSyntaxError("expected an integer, got %r" % text, lineno, col) from None


def serialize(d):
    lines = ["rank %d" % d.rank]
    for name in sorted(d.params):
        lo, hi = d.params[name]
        lines.append("param %s %d" % (name, lo) + ("" if hi is None else " %d" % hi))
    for i, j, m in d.edges():
        text = "$" + m if isinstance(m, str) else label_text(m)
        lines.append("edge %d %d %s" % (i + 1, j + 1, text))
    return "\n".join(lines) + "\n"


def to_dot(d, name="W"):
    """Graphviz export; label 3 is left unlabeled as in the usual pictures."""
    out = ["graph %s {" % name]
    for i in d.nodes:
        out.append('  n%d [label="%s"];' % (i + 1, d.names[i]))
    for i, j, m in d.edges():
        attr = "" if m == 3 else ' [label="%s"]' % ("∞" if m == INF else m)
        out.append("  n%d -- n%d%s;" % (i + 1, j + 1, attr))
    out.append("}")
    return "\n".join(out) + "\n"


def subsets(n):
    """Nonempty subsets of range(n) as frozensets, by size then lexicographically."""
    for k in range(1, n + 1):
        for c in combinations(range(n), k):
            yield frozenset(c)
