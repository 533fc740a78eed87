import math

import pytest
from hypothesis import given, settings, strategies as st

from khinchin.numbertheory import (BudgetExceeded, alternating_closed_forms, alternating_divisor_sum,
                                   bell_table, distinct_partition_table, divisor_profile, divisors,
                                   exact_count, omega, plane_partition_table, set_partitions, sigma,
                                   sigma_odd, sigma_table, two_adic_valuation)
from khinchin.series import builtin, exp_series


def test_profile_of_6():
    p = divisor_profile(6, 1)
    assert (p.sigma, p.sigma_odd, p.chi) == (12, 4, 1)


def test_profile_of_12():
    p = divisor_profile(12, 1)
    assert p.chi == 2 and p.omega == 1


def test_odd_m_has_unit_omega():
    for m in range(1, 200, 2):
        for c in range(4):
            p = divisor_profile(m, c)
            assert p.chi == 0 and p.omega == 1


def test_omega_at_c_zero_is_limit():
    # the closed form is 0/0 at c = 0; the alternating sum fixes the value 1 - chi
    for m in (1, 2, 4, 8, 12, 48):
        assert omega(m, 0) * sigma_odd(m, 0) == alternating_divisor_sum(m, 0)


def test_alternating_examples():
    assert alternating_divisor_sum(12, 1) == 4 == sigma(12, 1) - 2 * sigma(6, 1)
    for m in (1, 3, 15, 105):
        assert alternating_divisor_sum(m, 2) == sigma_odd(m, 2) == sigma(m, 2)
    for r in range(8):
        for c in range(4):
            assert alternating_divisor_sum(2**r, c) == omega(2**r, c)


def test_exact_count_examples():
    assert exact_count("partitions", 10) == 42
    assert exact_count("distinct_parts", 10) == 10
    assert exact_count("bell", 5) == 52


def test_bell_triangle_against_brute_force():
    assert bell_table(8) == [len(set_partitions(list(range(n)))) for n in range(9)]


def test_bell_triangle_against_exp_series():
    f = exp_series(builtin("sets_of_sets", N=60))
    assert [f.coeffs[n] * math.factorial(n) for n in range(61)] == bell_table(60)


def test_partition_oracle_matches_series_to_200():
    f = exp_series(builtin("partitions", N=200))
    assert [exact_count("partitions", n) for n in (0, 1, 50, 100, 200)] == \
        [f.coeffs[n] for n in (0, 1, 50, 100, 200)]
    assert exact_count("partitions", 100) == 190569292


def test_plane_partition_values():
    # OEIS A000219
    assert plane_partition_table(10) == [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]


def test_assembly_kind():
    assert exact_count("assembly", 6, g=builtin("sets_of_sets")) == 203
    with pytest.raises(ValueError):
        exact_count("assembly", 3)
    with pytest.raises(ValueError):
        exact_count("unknown", 3)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        exact_count("partitions", 10_000, budget=1000)


def test_sigma_table_matches_direct():
    for c in range(3):
        tab = sigma_table(300, c)
        odd = sigma_table(300, c, odd_only=True)
        for n in range(1, 301):
            assert tab[n] == sigma(n, c)
            assert odd[n] == sigma_odd(n, c)


def test_b_n_at_least_one_for_partitions():
    assert all(sigma(n, 1) >= n for n in range(1, 3000))


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=0, max_value=3))
def test_alternating_identity_property(m, c):
    direct = alternating_divisor_sum(m, c)
    odd_form, half_form = alternating_closed_forms(m, c)
    assert direct == odd_form == half_form


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=500), st.integers(min_value=1, max_value=500),
       st.integers(min_value=0, max_value=3))
def test_sigma_multiplicative(a, b, c):
    if math.gcd(a, b) == 1:
        assert sigma(a * b, c) == sigma(a, c) * sigma(b, c)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=0, max_value=3))
def test_profile_invariants(m, c):
    p = divisor_profile(m, c)
    assert p.sigma >= p.sigma_odd >= 1
    assert 2**p.chi * (m >> p.chi) == m and (m >> p.chi) & 1
    assert divisors(m)[0] == 1 and divisors(m)[-1] == m
    assert two_adic_valuation(m) == p.chi


def test_distinct_equals_odd_parts():
    # Euler: partitions into distinct parts = partitions into odd parts
    n = 60
    odd = [1] + [0] * n
    for part in range(1, n + 1, 2):
        for k in range(part, n + 1):
            odd[k] += odd[k - part]
    assert distinct_partition_table(n) == odd
