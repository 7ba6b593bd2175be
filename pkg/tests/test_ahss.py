import json

import pytest
from hypothesis import given, settings, strategies as st

from etalecob.ahss import (AbutmentReport, analyze_differentials, assemble_abutment, build_e2, convergence_check,
                           run_ahss)
from etalecob.cochains import CohomologyTable, cohomology
from etalecob.coefficients import GradedCoefficients, mu_rank
from etalecob.em import build_K
from etalecob.errors import CertificateError, ParameterError
from etalecob.finab import FinAb
from etalecob.simplicial import boundary_simplex, moore_space, point, product, sphere

Z = FinAb.cyclic


def projective_table(n, m):
    groups = {i: (Z(m) if i % 2 == 0 and i <= 2 * n else FinAb()) for i in range(2 * n + 1)}
    return CohomologyTable(Z(m), groups, False, "hand table", 2 * n, 2 * n)


def test_e2_of_point_with_mu():
    C = GradedCoefficients("MU", 2, 3)
    page = build_e2(cohomology(point(4), 8), C, (-8, 0))
    for (p, q), g in page.entries.items():
        if p > 0:
            assert g.is_trivial()
        else:
            assert g == FinAb.free(8, mu_rank(q))


def test_e2_of_circle_with_hz():
    page = build_e2(cohomology(sphere(1, 4), 3), GradedCoefficients("HZ", 3), (0, 1))
    assert page.nonzero_cells() == [(0, 0), (1, 0)]


def test_e2_checkerboard_for_projective_type():
    page = build_e2(projective_table(3, 5), GradedCoefficients("MU", 5), (-6, 6))
    for p, q in page.nonzero_cells():
        assert p % 2 == 0 and q % 2 == 0


def test_e2_errors():
    with pytest.raises(ParameterError):
        build_e2(cohomology(point(3), 4), GradedCoefficients("MU", 3), (0, 0))
    base = cohomology(sphere(1, 4), 2)
    with pytest.raises(ParameterError):
        build_e2(base, GradedCoefficients("MU", 2), (-4, 4), window=(0, -4, 4))


@pytest.mark.parametrize("base", [
    lambda: cohomology(point(4), 4),
    lambda: cohomology(sphere(1, 4), 4),
    lambda: projective_table(2, 4),
    lambda: CohomologyTable(Z(4), {0: Z(4), 1: FinAb.free(4, 2), 2: Z(4)}, False, "cd 2", 2, 2),
])
@pytest.mark.parametrize("theory", ["MU", "KU", "HZ"])
def test_collapse_cases(base, theory):
    page = build_e2(base(), GradedCoefficients(theory, 2, 2), (-6, 6))
    cert = analyze_differentials(page, (-6, 6))
    assert cert.collapses and not cert.undetermined


def test_nonzero_pattern_is_not_certified():
    base = CohomologyTable(Z(2), {0: Z(2), 1: Z(2), 2: Z(2), 3: Z(2)}, False, "dense", 3, 3)
    page = build_e2(base, GradedCoefficients("MU", 2), (-4, 4))
    cert = analyze_differentials(page, (-4, 4))
    assert not cert.collapses
    (p, q), why = cert.first_undetermined()
    assert why.startswith("d_")
    report = assemble_abutment(page, cert, (-4, 4))
    assert report.status == "UNDETERMINED"
    assert cert.to_json()["kind"] == "unknown"


def test_missing_certificate():
    page = build_e2(cohomology(point(3), 2), GradedCoefficients("MU", 2), (0, 0))
    with pytest.raises(CertificateError):
        assemble_abutment(page, None, (0, 0))


def test_point_abutment():
    C = GradedCoefficients("MU", 3, 2)
    report = run_ahss(cohomology(point(4), 9), C, (-8, 0))
    for n in range(-8, 1):
        d = report[n]
        assert d.status == "RESOLVED"
        assert d.group == FinAb.free(9, mu_rank(n))
        assert len(d.pieces) == (1 if mu_rank(n) else 0)


def test_reduced_circle_abutment():
    C = GradedCoefficients("MU", 2, 2)
    report = run_ahss(cohomology(sphere(1, 4), 4, reduced=True), C, (-5, 1))
    assert report.reduced
    for n in range(-5, 2):
        assert report[n].status == "RESOLVED"
        assert report.group(n) == FinAb.free(4, mu_rank(n - 1))
        assert all(p == 1 for p, _, _ in report[n].pieces)


def test_projective_type_needs_splitting():
    C = GradedCoefficients("MU", 3)
    base = projective_table(2, 3)
    graded = run_ahss(base, C, (-4, 0))
    assert graded[-4].status == "GRADED" and graded.group(-4) is None
    split = run_ahss(base, C, (-4, 0), splitting="projective bundle formula")
    assert split[-4].status == "RESOLVED"
    # pieces at p = 0, 2, 4 with ranks mu(-4), mu(-6), mu(-8)
    assert [p for p, _, _ in split[-4].pieces] == [0, 2, 4]
    assert split.group(-4).order == 3 ** (mu_rank(-4) + mu_rank(-6) + mu_rank(-8))
    assert split.splitting == "projective bundle formula"


def test_splitting_flag_ignored_for_non_elementary_pieces():
    base = projective_table(1, 4)
    report = run_ahss(base, GradedCoefficients("MU", 2, 2), (-2, 0), splitting="yes")
    assert report[-2].status == "GRADED"


def test_convergence_certificates():
    assert convergence_check(cohomology(sphere(2, 4), 2)) == ["finite-groups", "bounded-support"]
    K = cohomology(build_K(2, 1, 3).carrier, 2)
    assert convergence_check(K) == ["finite-groups"]
    assert "bounded-support" in convergence_check(projective_table(3, 2))


def test_unbounded_base_gives_undetermined_tail():
    K = cohomology(build_K(2, 1, 3).carrier, 2)
    report = run_ahss(K, GradedCoefficients("MU", 2), (-2, 2))
    assert report[2].status == "UNDETERMINED"
    assert any("undetermined" in n for n in report.notes)


SPACES = [lambda: point(4), lambda: sphere(1, 4), lambda: sphere(2, 4), lambda: moore_space(2, 4),
          lambda: moore_space(3, 4), lambda: boundary_simplex(2, 4), lambda: product(sphere(1, 3), sphere(1, 3)),
          lambda: build_K(2, 1, 4).carrier]


@pytest.mark.parametrize("i", range(len(SPACES)))
@pytest.mark.parametrize("ell,nu", [(2, 1), (2, 2), (3, 1)])
def test_hz_is_the_identity_transform(i, ell, nu):
    X = SPACES[i]()
    base = cohomology(X, ell ** nu)
    top = max(base.groups)
    report = run_ahss(base, GradedCoefficients("HZ", ell, nu), (0, top))
    for n in range(top + 1):
        assert report[n].status == "RESOLVED"
        assert report.group(n) == base.group(n)


table_strategy = st.tuples(
    st.sampled_from([(2, 1), (2, 2), (3, 1), (5, 1)]),
    st.lists(st.integers(0, 2), min_size=1, max_size=4),
    st.sampled_from(["MU", "KU", "HZ", "MoravaK"]),
)


def _random_table(data):
    (ell, nu), ranks, theory = data
    C = GradedCoefficients(theory, ell, nu)
    m = C.modulus  # Morava K forces nu = 1
    groups = {p: FinAb.free(m, r) for p, r in enumerate(ranks)}
    groups[0] = Z(m).direct_sum(groups[0])
    base = CohomologyTable(Z(m), groups, False, "random", len(ranks) - 1, len(ranks) - 1)
    return base, C


@settings(max_examples=60, deadline=None)
@given(table_strategy, st.booleans())
def test_order_bookkeeping(data, split):
    base, C = _random_table(data)
    report = run_ahss(base, C, (-6, 4), splitting="flag" if split else None)
    for n, d in report.degrees.items():
        if d.status == "RESOLVED":
            prod = 1
            for _, _, g in d.pieces:
                prod *= g.order
            assert d.group.order == prod == report.order(n)


@settings(max_examples=40, deadline=None)
@given(table_strategy, st.integers(0, 3), st.integers(0, 4))
def test_window_independence(data, extra_p, extra_q):
    base, C = _random_table(data)
    degrees = (-4, 2)
    page = build_e2(base, C, degrees)
    small = assemble_abutment(page, analyze_differentials(page, degrees), degrees)
    big_page = build_e2(base, C, degrees, window=(page.pmax + extra_p, page.qmin - extra_q, page.qmax + extra_q))
    big = assemble_abutment(big_page, analyze_differentials(big_page, degrees), degrees)
    for n in range(degrees[0], degrees[1] + 1):
        assert small[n].status == big[n].status
        assert small[n].pieces == big[n].pieces


@settings(max_examples=30, deadline=None)
@given(table_strategy)
def test_report_json_round_trip(data):
    base, C = _random_table(data)
    report = run_ahss(base, C, (-3, 3))
    text = report.dumps()
    assert AbutmentReport.from_json(text).dumps() == text
    for d in json.loads(text)["degrees"]:
        assert set(d) >= {"degree", "pieces", "resolved", "group", "certificates"}
