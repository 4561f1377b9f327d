import random

import mpmath
import pytest
from hypothesis import settings, strategies as st

from coxlab.diagram import INF, CoxeterDiagram
from coxlab.scalar import QuadExt

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

FINITE_LABELS = [3, 4, 5, 6]


def mp_value(x):
    """Independent high-precision value of an exact scalar from its coordinates."""
    if isinstance(x, QuadExt):
        return mp_value(x.a) + mp_value(x.b) * mpmath.sqrt(mp_value(x.radicand))
    c = 2 * mpmath.cos(mpmath.pi / x.conductor)
    return sum(mpmath.mpf(f.numerator) / f.denominator * c ** k for k, f in enumerate(x.coords))


def mp_matrix(A, dps=100):
    with mpmath.workdps(dps):
        return mpmath.matrix([[mp_value(x) for x in r] for r in A.rows])


@st.composite
def diagrams(draw, max_rank=6, labels=(2, 2, 3, 4, 5, 6), max_inf=0):
    n = draw(st.integers(1, max_rank))
    edges = []
    n_inf = 0
    for i in range(n):
        for j in range(i + 1, n):
            m = draw(st.sampled_from(labels + ((INF,) if n_inf < max_inf else ())))
            if m == INF:
                n_inf += 1
            if m != 2:
                edges.append((i, j, m))
    return CoxeterDiagram(n, edges)


def random_diagram(rng, max_rank=6, labels=(2, 2, 3, 4, 5, 6), max_inf=0):
    n = rng.randint(1, max_rank)
    edges, n_inf = [], 0
    for i in range(n):
        for j in range(i + 1, n):
            pool = list(labels) + ([INF] if n_inf < max_inf else [])
            m = rng.choice(pool)
            if m == INF:
                n_inf += 1
            if m != 2:
                edges.append((i, j, m))
    return CoxeterDiagram(n, edges)


def random_tree(rng, n, labels=(3, 4, 5, 6, 7)):
    return [(rng.randrange(k), k, rng.choice(labels)) for k in range(1, n)]


def random_bridge_diagram(rng, max_rank=7, labels=(3, 4, 5, 6, 7)):
    """Two random connected sides joined by a single edge s-t."""
    n = rng.randint(2, max_rank)
    k = rng.randint(1, n - 1)
    edges = random_tree(rng, k, labels)
    edges += [(a + k, b + k, m) for a, b, m in random_tree(rng, n - k, labels)]
    # extra edges inside each side keep the split
    for side in (range(k), range(k, n)):
        side = list(side)
        for a in side:
            for b in side:
                if a < b and rng.random() < 0.2 and not any(e[:2] == (a, b) for e in edges):
                    edges.append((a, b, rng.choice(labels)))
    s, t = rng.randrange(k), rng.randrange(k, n)
    edges.append((s, t, rng.choice(labels)))
    return CoxeterDiagram(n, edges), s, t


def random_two_edge_diagram(rng, max_rank=7, labels=(3, 4, 5, 6, 7)):
    """A side containing r != s and a side containing t, joined by r-t and s-t."""
    n = rng.randint(3, max_rank)
    k = rng.randint(2, n - 1)
    edges = [e for e in random_tree(rng, k, labels) if rng.random() < 0.8]
    edges += [(a + k, b + k, m) for a, b, m in random_tree(rng, n - k, labels)]
    r, s = rng.sample(range(k), 2)
    t = rng.randrange(k, n)
    edges += [(min(r, t), max(r, t), rng.choice(labels)),
              (min(s, t), max(s, t), rng.choice(labels))]
    return CoxeterDiagram(n, edges), r, s, t


@pytest.fixture
def rng():
    return random.Random(20240531)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
