"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

The lines are printed at the end of the pytest run by the terminal-summary hook
in conftest.py, and also when this file is run directly as a script.
"""
import filecmp
import os
import random
import tempfile
import time
from fractions import Fraction

import pytest

from coxlab import catalog, tits
from coxlab.cli import main as cli_main
from coxlab.certify import (NEITHER, REGION_D, REGION_L, certify_ghc, certify_quasi_fuchsian,
                            disconnected_check, discriminant_sides, lambda_polynomial,
                            region_scan, sweep_family, two_edge_ratio,
                            vinberg_single_edge_identity, vinberg_two_edge_identity, widen,
                            PreconditionError)
from coxlab.classify import (CartanKind, Kind, cartan_type, check_H0, check_Hminus,
                             classify_irreducible, moussong)
from coxlab.diagram import INF, CoxeterDiagram, cosine_matrix, lambda_cosine_matrix
from coxlab.exactla import Signature, determinant, inertia
from coxlab.orbit import (check_lemma_light, check_tiling_disjoint, enumerate_ball,
                          orbit_report, pairwise_inner, sample_limit_set)
from coxlab.scalar import sign, to_float, two_cos_pi_over

from conftest import random_bridge_diagram, random_diagram, random_two_edge_diagram

RESULTS = {}

GHC_TABLES = ("examples_dim4", "examples_dim5", "examples_dim6", "examples_dim7",
              "examples_dim8")
QF_TABLE = "Hexamples_dim4"


def record(number, limit=None):
    """Run the body, time it, and store a PASS/FAIL line under the criterion number."""
    def wrap(fn):
        def test():
            t0 = time.perf_counter()
            status, note = "FAIL", ""
            try:
                fn()
                status = "PASS"
            except Exception as exc:
                note = "%s: %s" % (type(exc).__name__, str(exc)[:120])
                raise
            finally:
                dt = time.perf_counter() - t0
                if status == "PASS" and limit is not None and dt > limit:
                    status, note = "FAIL", "over the %gs limit" % limit
                RESULTS[number] = "criterion %2d: %s (%.2fs)%s" % (
                    number, status, dt, " " + note if note else "")
            assert dt <= (limit or float("inf")), "runtime %.1fs over %gs" % (dt, limit)
        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test
    return wrap


def sqrt5():
    return 2 * two_cos_pi_over(5) - 1


def cos_2pi_over(p):
    return (two_cos_pi_over(p) ** 2 - 2) / 2


def instantiations(tables):
    for table in tables:
        for e in catalog.entries(table):
            for ps in e.test_parameters():
                yield e, ps, e.instantiate(**ps)


@record(1, limit=5)
def test_criterion_01_exact_determinant():
    d = catalog.catalog_get("examples_dim8", 2)
    det = determinant(cosine_matrix(d))
    assert det == (25 - 11 * sqrt5()) / 2
    assert to_float(det, 6) == "0.201626"


@record(2, limit=10)
def test_criterion_02_e6_family():
    t = widen(catalog.get_entry("examples_dim4", "E6").template, p=(10, None))
    res = sweep_family(t, range(10, 21), certify=False)
    for row in res.rows:
        p = row.params["p"]
        assert row.det == -4 * (3 + sqrt5()) + 8 * (1 + sqrt5()) * cos_2pi_over(p)
    assert res.rows[0].det.is_zero()
    assert to_float(res.rows[1].det) == "0.834557"
    assert res.increasing
    assert all(sign(b.det - a.det) > 0 for a, b in zip(res.rows, res.rows[1:]))


@record(3, limit=120)
def test_criterion_03_signatures():
    failures = []
    for e, ps, d in instantiations(GHC_TABLES):
        if inertia(cosine_matrix(d)) != Signature(d.rank - 2, 2, 0):
            failures.append((e.key, ps))
    for e, ps, d in instantiations([QF_TABLE]):
        if inertia(cosine_matrix(d)) != Signature(5, 1, 0):
            failures.append((e.key, ps))
    assert not failures, failures


@record(4)
def test_criterion_04_pipelines():
    failures = [(e.key, ps) for e, ps, d in instantiations(GHC_TABLES)
                if not certify_ghc(d).passed]
    failures += [(e.key, ps) for e, ps, d in instantiations([QF_TABLE])
                 if not certify_quasi_fuchsian(d).passed]
    assert not failures, failures
    # negative controls
    a2 = catalog.affine("A", 2)
    cert = certify_ghc(a2)
    assert not cert.passed
    assert cert.check("moussong").evidence["witness"] == [[1, 2, 3]]
    assert not cert.check("H0").passed
    square = CoxeterDiagram(4, [(0, 1, INF), (2, 3, INF)])
    for cert in (certify_ghc(square), certify_quasi_fuchsian(square)):
        assert not cert.passed
        assert cert.check("no_infinite_label").evidence["infinite_edges"] == [[1, 2], [3, 4]]
    v = moussong(square)
    assert not v.hyperbolic and set(v.witness) == {frozenset({0, 1}), frozenset({2, 3})}


LAMBDA_TABLES = {"disconnected_ads_dim4": (4, 2, 1), "disconnected_ads_dim6": (6, 2, 1),
                 "disconnected_qf_dim4": (5, 1, 1), "disconnected_qf_dim6": (7, 1, 1)}


@record(5, limit=300)
def test_criterion_05_lambda_quadratic():
    fam = catalog.get_entry("families_dim4", 1)
    for p, q in [(7, 7), (8, 13), (9, 11), (12, 12), (17, 30)]:
        f = lambda_polynomial(fam.instantiate(p=p, q=q))
        x, y = cos_2pi_over(p), cos_2pi_over(q)
        assert f.a0 == 8 * (2 * x + 2 * y - 3)
        assert f.a1 == -16 * (2 * x - 1) * (2 * y - 1)
        assert f.a2 == 8 * (1 - (2 * x - 1) * (2 * y - 1))
    for table in ("families_dim4", "families_dim6") + tuple(LAMBDA_TABLES):
        for e in catalog.entries(table):
            for ps in e.sample_parameters(extra=2)[:3]:
                lhs, rhs = discriminant_sides(e.instantiate(**ps), e.dark, e.light)
                assert lhs == rhs, (e.key, ps)
    for table, target in LAMBDA_TABLES.items():
        for e in catalog.entries(table):
            for ps in e.test_parameters():
                d = e.instantiate(**ps)
                f = lambda_polynomial(d)
                l1, l2 = f.roots
                assert sign(l1) > 0 and sign(l2 - l1) > 0
                for lam in f.roots:
                    assert f(lam).is_zero()
                    assert inertia(lambda_cosine_matrix(d, lam)) == Signature(*target)
                assert disconnected_check(d, e.dark, e.light).passed, (e.key, ps)


@record(6, limit=60)
def test_criterion_06_regions():
    scan = region_scan(40, 40, upper_triangle=True)
    r_l = {k for k, v in scan.items() if v.membership == REGION_L}
    r_d = {k for k, v in scan.items() if v.membership == REGION_D}
    assert r_l == {(7, 13), (8, 10), (8, 11), (9, 9), (9, 10)}
    excluded = {(9, q) for q in range(9, 19)} | {(10, 10)}
    expected = {(p, q) for p in range(9, 41) for q in range(p, 41)} - excluded
    assert r_d == expected
    assert all(v.membership == NEITHER for k, v in scan.items() if k not in r_l | r_d)
    assert all(0 not in v.signs for k, v in scan.items() if k in r_l | r_d)


def _positive_iff_spherical(d):
    for c in d.components():
        sub = d.restrict(sorted(c))
        kind = classify_irreducible(sub).kind
        ck = cartan_type(cosine_matrix(sub))[0]
        assert (ck == CartanKind.POSITIVE) == (kind == Kind.SPHERICAL)
        if kind == Kind.AFFINE:
            assert ck == CartanKind.ZERO


@record(7)
def test_criterion_07_classification():
    tables = catalog.classification_tables()
    expect = {"spherical": Kind.SPHERICAL, "affine": Kind.AFFINE, "lanner": Kind.LANNER}
    count = 0
    for table, kind in expect.items():
        for name, d in tables[table]:
            assert classify_irreducible(d).kind == kind, (table, name)
            _positive_iff_spherical(d)
            count += 1
    assert count >= 30
    for p in (5, 7, 12):
        assert classify_irreducible(catalog.spherical("I2", p)).kind == Kind.SPHERICAL
    # triangle groups (p, q, r): hyperbolic when 1/p + 1/q + 1/r < 1
    for p, q, r in [(2, 3, 7), (3, 3, 4), (2, 4, 5), (4, 4, 4), (2, 3, 6), (3, 3, 3),
                    (2, 4, 4), (2, 3, 5)]:
        d = CoxeterDiagram(3, [e for e in [(0, 1, p), (1, 2, q), (0, 2, r)] if e[2] != 2])
        total = Fraction(1, p) + Fraction(1, q) + Fraction(1, r)
        want = Kind.LANNER if total < 1 else Kind.AFFINE if total == 1 else Kind.SPHERICAL
        assert classify_irreducible(d).kind == want, (p, q, r)
    rng = random.Random(7)
    for _ in range(200):
        _positive_iff_spherical(random_diagram(rng, 6))


def _possible(label):
    return CoxeterDiagram(4, [(0, 2, 5), (0, 1, label), (1, 3, 3), (2, 3, 3)])


@record(8)
def test_criterion_08_vinberg_identities():
    rng = random.Random(8)
    for _ in range(200):
        d, s, t = random_bridge_diagram(rng)
        assert vinberg_single_edge_identity(d, s, t)
    done = 0
    while done < 200:
        d, r, s, t = random_two_edge_diagram(rng)
        try:
            ok = vinberg_two_edge_identity(d, r, s, t)
        except PreconditionError:
            continue
        assert ok
        done += 1
    s2, s5 = two_cos_pi_over(4), sqrt5()
    assert two_edge_ratio(_possible(4), 1, 2, 3) == (5 + 2 * s5 + 3 * s2 + s2 * s5) / 2
    assert two_edge_ratio(_possible(5), 1, 2, 3) == 3 + s5


def _catalog_diagrams():
    for table in catalog.table_names():
        if table in catalog.classification_tables():
            for _, d in catalog.classification_tables()[table]:
                yield d
        else:
            for e in catalog.entries(table):
                for ps in e.minimal_parameters():
                    yield e.instantiate(**ps)


@record(9)
def test_criterion_09_lambda_cross_check():
    rng = random.Random(9)
    ds = list(_catalog_diagrams())
    ds += [random_diagram(rng, 6, max_inf=2) for _ in range(100)]
    lams = [Fraction(1, 2), 1, 3]
    mismatches = []
    for d in ds:
        hyp = moussong(d).hyperbolic
        for lam in lams:
            A = lambda_cosine_matrix(d, lam)
            if (check_H0(A, d)[0] and check_Hminus(A, d)[0]) != hyp:
                mismatches.append((d, lam))
    assert not mismatches, mismatches[:3]


@record(10, limit=180)
def test_criterion_10_orbit_evidence():
    d = catalog.catalog_get("examples_dim4", "E1", p=11)
    rep = tits.build(cosine_matrix(d), d)
    ball = enumerate_ball(rep, 6)
    assert all(a < b for a, b in zip(ball.sizes, ball.sizes[1:]))
    sample = sample_limit_set(rep, ball)
    assert len(sample.points) >= 20
    assert pairwise_inner(sample, ball.float_rep.gram) < -1e-6
    light = check_lemma_light(rep, 1000, seed=0)
    assert light["n_samples"] == 1000 and light["violations"] == 0
    tiling = check_tiling_disjoint(rep, ball, 200, seed=0, tol=1e-9)
    assert tiling["n_samples"] == 200 and tiling["violations"] == 0
    assert repr(orbit_report(rep, 6, 1000, 200, seed=0)) == \
        repr(orbit_report(rep, 6, 1000, 200, seed=0))


@record(11)
def test_criterion_11_tables_stable():
    with tempfile.TemporaryDirectory() as tmp:
        a, b = os.path.join(tmp, "a"), os.path.join(tmp, "b")
        assert cli_main(["tables", "all", "--outdir", a]) == 0
        assert cli_main(["tables", "all", "--outdir", b]) == 0
        names = sorted(os.listdir(a))
        assert names and names == sorted(os.listdir(b))
        match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        assert match == names and not mismatch and not errors


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
