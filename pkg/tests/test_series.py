import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qeis.series import (
    BiExpansion,
    DomainError,
    QExpansion,
    SingularDivisorError,
    TruncationError,
    format_rational,
    parse_rational,
)

ORDER = 12

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series(order=ORDER, unit=False, zero_constant=False):
    def build(cs):
        cs = list(cs)
        if unit:
            cs[0] = Fraction(1)
        if zero_constant:
            cs[0] = Fraction(0)
        return QExpansion(cs, order)
    return st.lists(fractions, min_size=order + 1, max_size=order + 1).map(build)


def brute_partition_counts(n_max):
    counts = [0] * (n_max + 1)

    def walk(remaining, largest):
        if remaining == 0:
            return 1
        return sum(walk(remaining - p, p) for p in range(1, min(remaining, largest) + 1))

    for n in range(n_max + 1):
        counts[n] = walk(n, n)
    return counts


def sigma1(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def euler(N, upto):
    out = QExpansion.constant(1, N)
    for n in range(1, upto + 1):
        out = out * (QExpansion.constant(1, N) - QExpansion.monomial(n, N))
    return out


# ---------------------------------------------------------------------------
# examples

def test_telescoping_product():
    geometric = QExpansion([1] * 16, 15)
    assert (QExpansion([1, -1], 15) * geometric) == QExpansion.constant(1, 15)


def test_inverse_of_euler_product_counts_partitions():
    inv = euler(10, 10).inverse()
    assert list(inv.coeffs) == brute_partition_counts(10)


def test_cancellation():
    N = 5
    assert QExpansion([1, 1], N) + QExpansion([1, -1], N) == QExpansion.constant(2, N)


def test_mercator():
    log = QExpansion([1, 1], 10).log()
    assert list(log.coeffs) == [0] + [Fraction((-1) ** (k + 1), k) for k in range(1, 11)]


def test_minus_log_euler_is_divisor_sum():
    N = 20
    got = -(euler(N, N).log())
    assert list(got.coeffs) == [0] + [Fraction(sigma1(m), m) for m in range(1, N + 1)]


def test_exp_log_round_trip_order_20():
    f = QExpansion([1, 3, -2, Fraction(1, 7)] + [0] * 17, 20)
    assert f.log().exp() == f


def test_D_on_monomial_and_constants():
    assert QExpansion.monomial(5, 9).D() == QExpansion.monomial(5, 9, 5)
    assert QExpansion.constant(Fraction(3, 4), 9).D().is_zero()


def test_D_uses_prefactor():
    eta_like = QExpansion([1, -1], 3, Fraction(1, 24))
    d = eta_like.D()
    assert d.prefactor == Fraction(1, 24)
    assert d[0] == Fraction(1, 24) and d[1] == -Fraction(25, 24)


def test_truncation_is_min_order():
    a = QExpansion([1, 2, 3], 5)
    b = QExpansion([1, 1], 3)
    assert (a * b).order == 3
    assert (a + b).order == 3


def test_getitem_beyond_order_raises():
    with pytest.raises(TruncationError):
        QExpansion([1], 4)[5]


def test_prefactor_mismatch_in_addition():
    with pytest.raises(DomainError):
        QExpansion([1], 3, Fraction(1, 8)) + QExpansion([1], 3)


def test_prefactors_add_under_multiplication():
    p = QExpansion([1], 3, Fraction(1, 8)) * QExpansion([1], 3, Fraction(1, 24))
    assert p.prefactor == Fraction(1, 6)


def test_division_by_zero_series():
    with pytest.raises(SingularDivisorError):
        QExpansion.constant(1, 4) / QExpansion.zero(4)


def test_exp_log_preconditions():
    with pytest.raises(DomainError):
        QExpansion([1, 1], 4).exp()
    with pytest.raises(DomainError):
        QExpansion([2, 1], 4).log()
    with pytest.raises(DomainError):
        QExpansion([1], 4, Fraction(1, 24)).log()


def test_rational_text_format():
    assert format_rational(Fraction(-1, 24)) == "-1/24"
    assert format_rational(Fraction(4)) == "4"
    assert parse_rational(" 7/3 ") == Fraction(7, 3)


def test_to_string():
    s = QExpansion([Fraction(-1, 2), 1, 2], 2).to_string()
    assert s == "-1/2 + q + 2*q^2 + O(q^3)"


def test_json_schema():
    data = json.loads(QExpansion([Fraction(-1, 24), 1, 0, 4], 3).to_json())
    assert data == {"prefactor": "0", "order": 3, "coeffs": [[0, "-1/24"], [1, "1"], [3, "4"]]}


# bivariate

def test_bi_coeff_x_of_exponential():
    e = BiExpansion.from_exponentials([(1, Fraction(1, 2), 0)], 4, 2)
    assert e.coeff_x(1)[0] == Fraction(1, 2)
    assert e.coeff_x(3)[0] == Fraction(1, 48)


def test_bi_coeff_x_out_of_range():
    e = BiExpansion.from_exponentials([(1, 1, 0)], 3, 2)
    with pytest.raises(TruncationError):
        e.coeff_x(4)
    with pytest.raises(TruncationError):
        e.coeff_x(-1)


def test_bi_inverse_has_simple_pole():
    # e^{x/2} - e^{-x/2} vanishes linearly at x = 0
    s = BiExpansion.from_exponentials([(1, Fraction(1, 2), 0), (-1, Fraction(-1, 2), 0)], 6, 3)
    inv = s.inverse()
    assert inv.x_pole_order == 1
    assert inv.coeff_x(-1)[0] == 1
    one = s * inv
    assert one.coeff_x(0) == QExpansion.constant(1, 3)
    for k in range(1, one.x_order + 1):
        assert one.coeff_x(k).is_zero()


def test_bi_exp_log_round_trip():
    f = BiExpansion.from_exponentials([(1, 0, 0), (3, 2, 1), (-1, Fraction(1, 3), 2)], 5, 6)
    g = f.log().exp()
    assert g == f


def test_bi_json_round_trip():
    f = BiExpansion.from_exponentials([(1, Fraction(1, 2), 0), (-2, Fraction(3, 2), 1)], 4, 3)
    assert BiExpansion.from_dict(json.loads(json.dumps(f.to_dict()))) == f


# ---------------------------------------------------------------------------
# properties

@given(series(), series(), series())
@settings(max_examples=40, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) - b == a


@given(series(), series(unit=True))
@settings(max_examples=40, deadline=None)
def test_mul_then_div_is_identity(a, b):
    assert (a * b) / b == a


@given(series(), series())
@settings(max_examples=40, deadline=None)
def test_leibniz(a, b):
    assert (a * b).D() == a.D() * b + a * b.D()


@given(series(zero_constant=True), series(zero_constant=True))
@settings(max_examples=30, deadline=None)
def test_exp_is_a_homomorphism(a, b):
    assert (a + b).exp() == a.exp() * b.exp()


@given(series(unit=True))
@settings(max_examples=30, deadline=None)
def test_log_exp_inverse_pair(f):
    assert f.log().exp() == f


@given(series(), st.fractions(min_value=-2, max_value=2, max_denominator=24))
@settings(max_examples=30, deadline=None)
def test_json_round_trip(a, rho):
    a = QExpansion(a.coeffs, ORDER, rho)
    text = a.to_json()
    assert QExpansion.from_json(text) == a
    assert QExpansion.from_json(text).to_json() == text


@given(st.lists(st.tuples(st.integers(-3, 3), st.fractions(-3, 3, max_denominator=4),
                          st.integers(0, 4)), min_size=1, max_size=5))
@settings(max_examples=30, deadline=None)
def test_bi_inverse_property(terms):
    f = BiExpansion.from_exponentials([(1, 0, 0)] + terms, 5, 4)
    if f.coeff(0, 0) == 0:
        return
    prod = f * f.inverse()
    assert prod.coeff_x(0) == QExpansion.constant(1, 4)
    assert all(prod.coeff_x(k).is_zero() for k in range(1, prod.x_order + 1))
