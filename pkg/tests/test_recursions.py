import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from expected import G_TABLE, H_TABLE, matches
from qeis import families as fam
from qeis import recursions as rec
from qeis.series import QExpansion, TruncationError


def test_ramanujan_first_coefficient():
    G2, G4 = fam.eisenstein_G(2, 3), fam.eisenstein_G(4, 3)
    lhs = G2.D()[1]
    rhs = -2 * 2 * G2[0] * G2[1] + Fraction(5, 6) * G4[1]
    assert lhs == rhs == 1


@pytest.mark.parametrize("N", [1, 25])
def test_ramanujan(N):
    assert rec.verify_ramanujan(N).passed


def test_g_recursion_reproduces_table():
    series, report = rec.g_recursion(6, 8)
    assert report.passed
    assert all(matches(s, G_TABLE[k]) for k, s in enumerate(series, 1))


def test_h_recursion_reproduces_table():
    series, report = rec.h_recursion(6, 8)
    assert report.passed
    assert series[3][2] == 209
    assert all(matches(s, H_TABLE[k]) for k, s in enumerate(series, 1))


def test_h2_identity_at_q1():
    h1, h2 = fam.extract_coeffs("h", 2, 3)
    assert h2[1] == 6 * 1 + 2 * Fraction(-1, 2) * 2 == 4
    assert h2 == fam.eisenstein_G(2, 3) * 6 + h1 * h1


@pytest.mark.parametrize("fn", [rec.g_recursion, rec.h_recursion])
def test_recursions_long(fn):
    assert fn(8, 20)[1].passed


def test_recursions_need_three_terms():
    with pytest.raises(TruncationError):
        rec.g_recursion(2, 5)


def test_g1_identity():
    g1 = fam.extract_coeffs("g", 1, 1)[0]
    assert 2 * g1[0] * fam.partial_theta_zero(1)[0] == -1
    assert rec.g1_identity_check(25).passed


def test_eta_log_derivative():
    assert rec.eta_log_derivative_check(20).passed


def test_u_first_is_zero():
    u, _ = rec.u_from_recursion(1, 10, "scaled")
    assert u[0].is_zero()


def test_u_scaled_variant_matches_extraction():
    u, report = rec.u_from_recursion(8, 15, "scaled")
    assert report.passed
    assert u[1] == fam.extract_coeffs("u", 2, 15)[1]


def test_u_literal_variant_fails():
    reports = rec.u_variant_reports(4, 8)
    assert reports["scaled"].passed
    assert not reports["literal"].passed


def test_u_variant_name_checked():
    with pytest.raises(ValueError):
        rec.u_recursion_rhs(2, [], 5, "other")


def test_odd_relations_vanish():
    assert rec.odd_u_relations([1, 3, 5, 7], 15).passed


def test_closure_witness():
    report = rec.closure_witness(15)
    assert report.passed and "10 monomials" in report.identity_name


@given(st.lists(st.integers(0, 2), min_size=1, max_size=4).filter(any))
@settings(max_examples=15, deadline=None)
def test_closure_on_random_monomials(exponents):
    assert rec.closure_witness(10, [tuple(exponents)]).passed


@pytest.mark.parametrize("which", ["g", "h"])
def test_route_agreement(which):
    assert rec.route_agreement(which, 8, 20).passed


def test_route_agreement_detects_tampering():
    series = list(fam.extract_coeffs("g", 8, 10))
    series[2] = series[2] + QExpansion.monomial(1, 10)
    report = rec.route_agreement("g", 8, 10, series)
    assert not report.passed
    assert "g_3" in report.detail


def test_report_json():
    report = rec.verify_ramanujan(5)
    data = json.loads(report.to_json())
    assert data == {"identity": "Ramanujan system", "order": 5, "residual": "0", "pass": True}
