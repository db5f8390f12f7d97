import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qeis.partitions import (
    InvariantError,
    Partition,
    a_nm,
    a_row,
    a_threshold,
    b_nm,
    b_row,
    b_threshold,
    cycle_index_coefficients,
    g_to_triangular,
    h_to_pentagonal,
    lambda_nm,
    multinomial,
    omega_nm,
    partition_count,
    partition_trace,
    partitions_of,
    pentagonal_partitions,
    pentagonal_to_h,
    phi_weight,
    psi_weight,
    triangular_partitions,
    triangular_to_g,
)
from qeis.series import DomainError, QExpansion


def brute_partitions(n):
    """Parts lists, generated independently of the package."""
    def walk(rem, cap):
        if rem == 0:
            yield []
            return
        for p in range(min(rem, cap), 0, -1):
            for rest in walk(rem - p, p):
                yield [p] + rest
    return list(walk(n, n))


def mult(parts, j):
    return parts.count(j)


def is_lambda(parts, m):
    n = sum(parts)
    return len(parts) == m and all(mult(parts, j) >= mult(parts, j + 1) for j in range(1, n + 1))


def is_omega(parts, m):
    n = sum(parts)
    if any(p % 3 == 0 for p in parts):
        return False
    for j in range(1, n + 1):
        if mult(parts, 3 * j - 2) < mult(parts, 3 * j + 1):
            return False
        if mult(parts, 3 * j - 1) < mult(parts, 3 * j + 2):
            return False
    return 3 * len(parts) == m + mult(parts, 1)


def as_sets(partitions):
    return {tuple(sorted(p.parts(), reverse=True)) for p in partitions}


# ---------------------------------------------------------------------------

def test_empty_partition():
    assert [p.multiplicities for p in partitions_of(0)] == [()]


@pytest.mark.parametrize("n, count", [(5, 7), (10, 42)])
def test_partition_counts(n, count):
    assert len(list(partitions_of(n))) == count == len(brute_partitions(n))


def test_enumeration_order_is_descending():
    got = [p.parts() for p in partitions_of(5)]
    assert got == [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)]


def test_every_partition_exactly_once():
    for n in range(13):
        got = [p.parts() for p in partitions_of(n)]
        assert len(got) == len(set(got)) == partition_count(n)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, -1))
    assert Partition.from_parts([3, 1, 1]).multiplicities == (2, 0, 1, 0, 0)


def test_small_lambda_sets():
    assert as_sets(lambda_nm(1, 1)) == {(1,)}
    assert lambda_nm(2, 1) == ()
    assert as_sets(lambda_nm(2, 2)) == {(1, 1)}


def test_small_omega_sets():
    assert as_sets(omega_nm(1, 2)) == {(1,)}
    assert as_sets(omega_nm(3, 5)) == {(2, 1)}
    assert as_sets(omega_nm(3, 6)) == {(1, 1, 1)}
    assert omega_nm(3, 4) == ()


def test_lambda_and_omega_match_brute_filter():
    for n in range(1, 26):
        parts = brute_partitions(n)
        for m in range(1, n + 1):
            expect = {tuple(p) for p in parts if is_lambda(p, m)}
            assert as_sets(lambda_nm(n, m)) == expect, (n, m)
        for m in range(1, 2 * n + 1):
            expect = {tuple(p) for p in parts if is_omega(p, m)}
            assert as_sets(omega_nm(n, m)) == expect, (n, m)


def test_multinomial_examples():
    assert multinomial(4, [2, 1, 1]) == 12
    assert 12 % (4 // math.gcd(2, 1, 1)) == 0
    assert multinomial(7, [7]) == 1
    assert multinomial(3, [0, 3]) == 1


def test_multinomial_sum_mismatch():
    with pytest.raises(DomainError):
        multinomial(4, [1, 1])


@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
@settings(max_examples=60, deadline=None)
def test_multinomial_divisibility(blocks):
    top = sum(blocks)
    value = multinomial(top, blocks)
    expect = math.factorial(top)
    for b in blocks:
        expect //= math.factorial(b)
    assert value == expect
    if top:
        assert value % (top // math.gcd(*blocks)) == 0


def test_invariant_error_is_assertion():
    assert issubclass(InvariantError, AssertionError)


def test_a_values():
    assert a_nm(1, 1) == 1
    assert a_nm(3, 2) == -2 and a_nm(3, 3) == 1
    assert [sum(v * m ** (k - 1) for m, v in a_row(3).items()) for k in range(1, 5)] == [-1, -1, 1, 11]


def test_b_values():
    assert b_nm(1, 2) == 2
    assert b_nm(3, 5) == 5 and b_nm(3, 6) == 2
    assert [5 * 5 ** (k - 1) + 2 * 6 ** (k - 1) for k in (1, 2, 3)] == [
        sum(v * m ** (k - 1) for m, v in b_row(3).items()) for k in (1, 2, 3)] == [7, 37, 197]


def test_coefficient_ranges():
    with pytest.raises(DomainError):
        a_nm(3, 4)
    with pytest.raises(DomainError):
        b_nm(3, 7)


def test_thresholds_against_float_formula():
    for n in range(1, 200):
        assert a_threshold(n) == math.ceil((math.sqrt(8 * n + 1) - 1) / 2)
        assert b_threshold(n) == math.floor((math.sqrt(24 * n + 1) - 1) / 2)


def test_vanishing_below_thresholds():
    for n in range(1, 31):
        assert all(a_nm(n, m) == 0 for m in range(1, a_threshold(n)))
    for n in range(1, 21):
        assert all(b_nm(n, m) == 0 for m in range(1, b_threshold(n)))


def test_coefficients_are_integers():
    for n in range(1, 21):
        assert all(isinstance(v, int) for v in a_row(n).values())
        assert all(isinstance(v, int) for v in b_row(n).values())


def test_bijections_are_mutually_inverse():
    for n in range(26):
        tri = triangular_partitions(n)
        images = [triangular_to_g(c) for c in tri]
        assert all(g_to_triangular(lam) == c for lam, c in zip(images, tri))
        assert len(set(images)) == len(tri)
        pent = pentagonal_partitions(n)
        images = [pentagonal_to_h(c) for c in pent]
        assert all(h_to_pentagonal(lam) == c for lam, c in zip(images, pent))
        assert len(set(images)) == len(pent)


def test_bijection_images_cover_the_sets():
    for n in range(1, 16):
        parts = brute_partitions(n)
        g_set = {tuple(p) for p in parts if is_lambda(p, len(p))}
        h_set = {tuple(p) for p in parts if is_omega(p, 3 * len(p) - mult(p, 1))}
        assert as_sets(triangular_to_g(c) for c in triangular_partitions(n)) == g_set
        assert as_sets(pentagonal_to_h(c) for c in pentagonal_partitions(n)) == h_set


def test_trace_examples():
    N = 3
    f1, f2 = QExpansion([1, 2], N), QExpansion([0, 1, 5], N)
    assert partition_trace(phi_weight, [f1], 0, order=N) == QExpansion.constant(1, N)
    assert partition_trace(phi_weight, [f1], 1) == f1 * 2
    assert partition_trace(phi_weight, [f1, f2], 2) == f1 * f1 * 2 + f2


def test_trace_missing_member():
    with pytest.raises(DomainError):
        partition_trace(phi_weight, [QExpansion([1], 2)], 2)


def test_weights():
    assert phi_weight(Partition.from_parts([1, 1])) == 2
    assert phi_weight(Partition.from_parts([2])) == 1
    assert psi_weight(Partition.from_parts([2, 1, 1])) == Fraction(-1, 4)


@given(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=8, max_size=8))
@settings(max_examples=25, deadline=None)
def test_cycle_index_identity(xs):
    lhs = cycle_index_coefficients(xs, 8)
    rhs = QExpansion([0] + xs, 8).exp()
    assert lhs == list(rhs.coeffs)


@given(st.lists(st.fractions(-5, 5, max_denominator=5), min_size=6, max_size=6))
@settings(max_examples=20, deadline=None)
def test_phi_trace_is_exponential_coefficient(values):
    family = [QExpansion.constant(v, 0) for v in values]
    gen = QExpansion([0] + [2 * v / math.factorial(j) for j, v in enumerate(values, 1)], 6).exp()
    for n in range(7):
        assert partition_trace(phi_weight, family, n, order=0)[0] == gen[n]
