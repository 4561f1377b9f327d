import random

import pytest

from coxlab import catalog
from coxlab.certify import (NEITHER, REGION_D, REGION_L, PreconditionError, certify_ghc,
                            certify_quasi_fuchsian, default_parts, disconnected_check,
                            discriminant_identity, discriminant_sides, lambda_polynomial,
                            region_from_signs, region_scan, sweep_family, two_edge_ratio,
                            vinberg_single_edge_identity, vinberg_single_edge_sides,
                            vinberg_two_edge_identity, vinberg_two_edge_sides, widen)
from coxlab.classify import Kind, classify_irreducible
from coxlab.diagram import INF, CoxeterDiagram, DiagramError, cosine_matrix, lambda_cosine_matrix
from coxlab.exactla import Signature, determinant, inertia, principal_minor
from coxlab.scalar import QuadExt, sign, to_float, two_cos_pi_over

from conftest import mp_value, random_bridge_diagram, random_two_edge_diagram


def sqrt5():
    return 2 * two_cos_pi_over(5) - 1


def cos_2pi_over(p):
    return (two_cos_pi_over(p) ** 2 - 2) / 2


def possible_diagram(label):
    # white nodes 1, 2, 3 and the black node t = 4
    return CoxeterDiagram(4, [(0, 2, 5), (0, 1, label), (1, 3, 3), (2, 3, 3)])


# --- certification pipelines --------------------------------------------

def test_ghc_examples():
    cert = certify_ghc(catalog.catalog_get("examples_dim4", "E1", p=11))
    assert cert.passed
    assert cert.check("signature").evidence["signature"] == [4, 2, 0]
    js = cert.to_json()
    assert set(js) >= {"diagram", "kind", "checks", "conclusion"}
    assert js["conclusion"]["theorem"]
    assert {c["name"] for c in js["checks"]} >= {"no_infinite_label", "moussong", "join_sphere",
                                                 "signature", "H0", "Hminus"}
    cert = certify_ghc(catalog.catalog_get("examples_dim8", 2))
    assert cert.passed
    assert cert.check("signature").evidence["det"]["float"] == "0.201626"


def test_ghc_negative_control():
    cert = certify_ghc(catalog.affine("A", 2))
    assert not cert.passed
    assert not cert.check("moussong").passed and not cert.check("signature").passed
    assert cert.to_json()["conclusion"] is None


def test_quasi_fuchsian_examples():
    cert = certify_quasi_fuchsian(catalog.catalog_get("Hexamples_dim4", "Q1",
                                                      **_min("Hexamples_dim4", "Q1")))
    assert cert.passed
    assert cert.check("signature").evidence["signature"] == [5, 1, 0]
    cert = certify_quasi_fuchsian(catalog.catalog_get("examples_dim4", "E1", p=11))
    assert not cert.check("signature").passed
    assert not certify_quasi_fuchsian(catalog.spherical("A", 4)).passed


def _min(table, item):
    return catalog.get_entry(table, item).minimal_parameters()[0]


def test_pipelines_fail_on_classification_tables():
    for table in ("spherical", "affine"):
        for _, d in catalog.classification_tables()[table]:
            assert not certify_ghc(d).passed
            assert not certify_quasi_fuchsian(d).passed


# --- determinant identities ---------------------------------------------

def test_two_edge_ratio_constants():
    s2 = two_cos_pi_over(4)
    s5 = sqrt5()
    assert two_edge_ratio(possible_diagram(4), 1, 2, 3) == (5 + 2 * s5 + 3 * s2 + s2 * s5) / 2
    assert two_edge_ratio(possible_diagram(5), 1, 2, 3) == 3 + s5


def test_single_edge_identity_small():
    a3 = catalog.spherical("A", 3)
    lhs, rhs = vinberg_single_edge_sides(a3, 0, 1)
    assert lhs == rhs == 4
    d = catalog.catalog_get("examples_dim5", 1, p=7)
    assert vinberg_single_edge_identity(d, 3, 4)
    with pytest.raises(PreconditionError):
        vinberg_single_edge_identity(catalog.affine("A", 2), 0, 1)


def test_two_edge_identity_on_last_row():
    for item in (25, 26, 27, 28):
        e = catalog.get_entry("examples_dim4", item)
        for ps in e.test_parameters():
            lhs, rhs = vinberg_two_edge_sides(e.instantiate(**ps), 1, 2, 3)
            assert lhs == rhs


def test_identities_random(rng):
    for _ in range(60):
        d, s, t = random_bridge_diagram(rng)
        assert vinberg_single_edge_identity(d, s, t)
    done = 0
    while done < 60:
        d, r, s, t = random_two_edge_diagram(rng)
        try:
            ok = vinberg_two_edge_identity(d, r, s, t)
        except PreconditionError:
            continue  # det C_S1 = 0
        assert ok
        done += 1


# --- sweeps ---------------------------------------------------------------

def test_sweep_e6():
    e = catalog.get_entry("examples_dim4", "E6")
    with pytest.raises(DiagramError):
        sweep_family(e.template, [10])
    t = widen(e.template, p=(10, None))
    res = sweep_family(t, range(10, 21), certify=False)
    assert res.rows[0].det.is_zero()
    assert to_float(res.rows[1].det) == "0.834557"
    assert res.increasing
    s5 = sqrt5()
    for row in res.rows:
        p = row.params["p"]
        assert row.det == -4 * (3 + s5) + 8 * (1 + s5) * cos_2pi_over(p)
    assert res.rows[0].signature == Signature(4, 1, 1)
    assert all(r.signature == Signature(4, 2, 0) for r in res.rows[1:])
    assert res.limit == -4 * (3 + s5) + 8 * (1 + s5)
    assert sign(res.limit) > 0


def test_sweep_kinds():
    e = catalog.get_entry("examples_dim4", "E6")
    res = sweep_family(e.template, [11, 12])
    assert [r.kind for r in res.rows] == ["GHC", "GHC"]


# --- the lambda quadratic -------------------------------------------------

@pytest.mark.parametrize("p, q", [(7, 7), (9, 11), (11, 11), (12, 13), (20, 9)])
def test_lambda_closed_forms(p, q):
    e = catalog.get_entry("families_dim4", 1)
    d = e.instantiate(p=p, q=q)
    f = lambda_polynomial(d)
    x, y = cos_2pi_over(p), cos_2pi_over(q)
    assert f.a0 == 8 * (2 * x + 2 * y - 3)
    assert f.a1 == -16 * (2 * x - 1) * (2 * y - 1)
    assert f.a2 == 8 * (1 - (2 * x - 1) * (2 * y - 1))
    S1, _ = default_parts(d, e.dark, e.light)
    assert determinant(principal_minor(cosine_matrix(d), S1)) == 4 * (4 * x * y - 2 * x - 1)
    assert f.a0 == determinant(cosine_matrix(d))


def test_lambda_rank_two():
    f = lambda_polynomial(catalog.affine("A", 1))
    assert (f.a0, f.a1, f.a2) == (0, -8, -4)
    lams = sorted(float(r) for r in f.roots)
    assert lams == [-2.0, 0.0]
    assert not disconnected_check(catalog.affine("A", 1)).passed


def test_lambda_needs_one_inf_edge():
    with pytest.raises(PreconditionError):
        lambda_polynomial(catalog.spherical("A", 3))
    with pytest.raises(PreconditionError):
        lambda_polynomial(CoxeterDiagram(4, [(0, 1, INF), (2, 3, INF)]))


LAMBDA_TABLES = ["families_dim4", "families_dim6", "disconnected_ads_dim4",
                 "disconnected_ads_dim6", "disconnected_qf_dim4", "disconnected_qf_dim6"]


@pytest.mark.parametrize("table", LAMBDA_TABLES)
def test_discriminant_identity_on_tables(table):
    for e in catalog.entries(table):
        for ps in e.sample_parameters(extra=2)[:3]:
            d = e.instantiate(**ps)
            lhs, rhs = discriminant_sides(d, e.dark, e.light)
            assert lhs == rhs
            assert discriminant_identity(d)  # symmetric in the two endpoints


def test_roots_vanish_exactly():
    d = catalog.catalog_get("disconnected_ads_dim4", 1, p=11, q=11)
    f = lambda_polynomial(d)
    l1, l2 = f.roots
    assert isinstance(l1, QuadExt) and sign(l2 - l1) > 0 and sign(l1) > 0
    for lam in f.roots:
        assert f(lam).is_zero()
        assert determinant(lambda_cosine_matrix(d, lam)).is_zero()
        assert abs(mp_value(lam) - float(lam)) < 1e-12


def test_disconnected_examples():
    e = catalog.get_entry("disconnected_ads_dim4", 1)
    cert = disconnected_check(e.instantiate(p=11, q=11), e.dark, e.light)
    assert cert.passed
    assert [r["signature"] for r in cert.check("roots").evidence["roots"]] == [[4, 2, 1]] * 2
    e = catalog.get_entry("disconnected_qf_dim4", 1)
    cert = disconnected_check(e.instantiate(p=9, q=9), e.dark, e.light)
    assert cert.passed
    assert cert.check("roots").evidence["target_signature"] == [5, 1, 1]
    fam = catalog.get_entry("families_dim4", 1)
    cert = disconnected_check(fam.instantiate(p=7, q=7), fam.dark, fam.light)
    assert not cert.passed and not cert.check("sign_conditions").passed


@pytest.mark.parametrize("table, target", [
    ("disconnected_ads_dim4", (4, 2, 1)), ("disconnected_ads_dim6", (6, 2, 1)),
    ("disconnected_qf_dim4", (5, 1, 1)), ("disconnected_qf_dim6", (7, 1, 1))])
def test_disconnected_tables(table, target):
    for e in catalog.entries(table):
        for ps in e.test_parameters():
            cert = disconnected_check(e.instantiate(**ps), e.dark, e.light)
            assert cert.passed, (e.key, ps)
            assert cert.check("roots").evidence["target_signature"] == list(target)


def test_reference_lattice_parameters():
    # at the lattice parameters both side determinants vanish, f has a
    # double root lam0 > 0 and C^lam0 is singular; f(0) itself is not zero
    for table in ("Tumarkin_dim4", "Tumarkin_dim6"):
        for e in catalog.entries(table):
            d = e.instantiate()
            f = lambda_polynomial(d)
            assert f.delta.is_zero() and f.roots is None
            lam0 = f.double_root
            assert sign(lam0) > 0
            M = lambda_cosine_matrix(d, lam0)
            assert determinant(M).is_zero()
            n = d.rank
            assert inertia(M) == Signature(n - 3, 1, 2)
            assert not f.a0.is_zero()


def test_reference_matches_family_at_p0_q0():
    fam = catalog.get_entry("families_dim4", 1)
    ref = catalog.get_entry("Tumarkin_dim4", 1).instantiate()
    assert fam.instantiate(**fam.reference) == ref


# --- region scan ----------------------------------------------------------

def test_region_examples():
    scan = region_scan(11, 11)
    assert scan[(9, 9)].membership == REGION_L
    assert scan[(11, 11)].membership == REGION_D
    assert scan[(7, 7)].membership == NEITHER
    assert scan[(10, 10)].membership == NEITHER and scan[(10, 10)].boundary
    with pytest.raises(ValueError):
        region_scan(6, 10)


def test_region_from_signs_only():
    assert region_from_signs((1, 1, 1, -1, 1)).membership == REGION_D
    assert region_from_signs((-1, -1, -1, 1, -1)).membership == REGION_L
    v = region_from_signs((0, 1, 1, -1, 1))
    assert v.membership == NEITHER and v.boundary


def test_region_signs_match_exact_values():
    e = catalog.get_entry("families_dim4", 1)
    scan = region_scan(14, 14)
    for (p, q), v in scan.items():
        d = e.instantiate(p=p, q=q)
        f = lambda_polynomial(d)
        C = cosine_matrix(d)
        S1, S2 = default_parts(d, e.dark, e.light)
        exact = (sign(determinant(principal_minor(C, S1))),
                 sign(determinant(principal_minor(C, S2))), sign(f.a0), sign(f.a1), sign(f.a2))
        assert v.signs == exact


# --- registry -------------------------------------------------------------

def test_catalog_examples():
    d = catalog.catalog_get("examples_dim8", 2)
    assert d.rank == 10
    d = catalog.catalog_get("Hexamples_dim4", "Q7", p=7, q=8)
    assert d.rank == 6
    with pytest.raises(catalog.CatalogError):
        catalog.catalog_get("Hexamples_dim4", "Q7", p=8, q=8)
    with pytest.raises(catalog.CatalogError):
        catalog.catalog_get("nope", 1)
    d = catalog.catalog_get("lanner", 1)
    assert classify_irreducible(d).kind == Kind.LANNER
