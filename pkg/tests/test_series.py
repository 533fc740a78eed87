import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from khinchin.numbertheory import bell_table, partition_table, set_partitions, sigma
from khinchin.series import (NegativeCoefficient, NonzeroConstantTerm, OgfSpec, Radius,
                             SeriesError, builtin, exp_series, from_coeffs, load_series_csv,
                             log_series, multiset_from_ogf, parse_series_spec, rescale,
                             selection_from_ogf, series_from_dict)
from khinchin.numbertheory import divisor_profile


def fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_exp_of_z_is_exponential():
    f = exp_series(builtin("monomial", {"k": 1}, N=12))
    assert list(f.coeffs) == [Fraction(1, fact(n)) for n in range(13)]


def test_exp_of_bell_series_counts_set_partitions():
    f = exp_series(builtin("sets_of_sets", N=7))
    brute = [len(set_partitions(list(range(n)))) for n in range(8)]
    assert [f.coeffs[n] * fact(n) for n in range(8)] == brute
    assert brute[:6] == [1, 1, 2, 5, 15, 52]


def test_exp_of_partition_series_matches_dp():
    f = exp_series(builtin("partitions", N=40))
    assert list(f.coeffs) == partition_table(40)
    assert list(f.coeffs[:6]) == [1, 1, 2, 3, 5, 7]


def test_log_of_exponential_is_z():
    f = from_coeffs([Fraction(1, fact(n)) for n in range(10)], "inf")
    g = log_series(f)
    assert list(g.coeffs) == [0, 1] + [0] * 8


def test_log_of_geometric_gives_cycles():
    f = from_coeffs([1] * 15, "1")
    assert list(log_series(f).coeffs) == [0] + [Fraction(1, n) for n in range(1, 15)]


def test_round_trip_partitions_N200():
    g = builtin("partitions", N=200)
    assert log_series(exp_series(g)).coeffs == g.coeffs


def test_exp_rejects_nonzero_constant_in_exact_mode():
    g = from_coeffs([1, 1, 0], "inf")
    with pytest.raises(NonzeroConstantTerm):
        exp_series(g)
    f = exp_series(g, exact=False)
    assert abs(float(f.coeffs[0]) - 2.718281828459045) < 1e-15


def test_negative_and_constant_series_rejected():
    with pytest.raises(SeriesError):
        from_coeffs([0, -1, 2])
    with pytest.raises(SeriesError):
        from_coeffs([3, 0, 0])


def test_log_needs_unit_constant():
    with pytest.raises(SeriesError):
        log_series(from_coeffs([0, 1, 1], "1"))


def test_builtin_examples():
    assert builtin("partitions", N=6).coeffs[6] == 2
    assert builtin("sets_of_sets").coeffs[3] == Fraction(1, 6)
    fn = builtin("functions", N=20)
    assert all(fn.coeffs[n] * fact(n) == n**n for n in range(1, 21))


def test_builtin_radii():
    assert not builtin("sets_of_sets").radius.finite
    assert float(builtin("partitions").radius.value()) == 1.0
    assert abs(float(builtin("functions").radius.value()) - 0.36787944117144233) < 1e-16
    assert abs(float(builtin("rooted_trees").radius.value()) - 0.36787944117144233) < 1e-16


def test_builtin_errors():
    with pytest.raises(SeriesError):
        builtin("no_such_series")
    with pytest.raises(SeriesError):
        builtin("lists_gamma", {"gamma": 0})


def test_lists_gamma_two_is_n():
    g = builtin("lists_gamma", {"gamma": 2}, N=30)
    assert list(g.coeffs[1:]) == list(range(1, 31))


def test_divisor_family_catalog():
    N = 60
    plane = builtin("plane_partitions", N=N)
    odd = builtin("distinct_parts", N=N)
    for n in range(1, N + 1):
        p = divisor_profile(n, 1)
        assert odd.coeffs[n] == Fraction(p.sigma_odd, n)
        assert plane.coeffs[n] == Fraction(sigma(n, 2), n)
    sq = builtin("square_partitions", N=N)
    for m in range(1, N + 1):
        want = Fraction(sum(j * j for j in range(1, m + 1) if m % (j * j) == 0), m)
        assert sq.coeffs[m] == want


def test_binary_partitions_counts():
    from khinchin.series import exp_series
    f = exp_series(builtin("binary_partitions", N=20))
    # partitions of n into powers of two (1, 2, 4, ...), by brute-force DP
    counts = [1] + [0] * 20
    for part in (1, 2, 4, 8, 16):
        for k in range(part, 21):
            counts[k] += counts[k - part]
    assert list(f.coeffs) == counts


def test_multiset_examples():
    N = 40
    assert multiset_from_ogf(OgfSpec.from_function(lambda j: 1, N), N).coeffs == builtin("partitions", N=N).coeffs
    only1 = multiset_from_ogf(OgfSpec([Fraction(1)] + [Fraction(0)] * (N - 1)), N)
    assert list(only1.coeffs) == [0] + [Fraction(1, m) for m in range(1, N + 1)]
    assert multiset_from_ogf(OgfSpec.from_function(lambda j: j, N), N).coeffs == \
        builtin("plane_partitions", N=N).coeffs


def test_selection_examples():
    N = 50
    assert selection_from_ogf(OgfSpec.from_function(lambda j: 1, N), N).coeffs == \
        builtin("distinct_parts", N=N).coeffs
    neg = selection_from_ogf(OgfSpec([Fraction(5), Fraction(1)] + [Fraction(0)] * 8), 10)
    assert isinstance(neg, NegativeCoefficient)
    assert neg.index == 2
    sel = selection_from_ogf(OgfSpec.from_function(lambda j: j, N), N)
    for m in range(1, N + 1):
        p = divisor_profile(m, 2)
        assert sel.coeffs[m] == p.sigma_odd * p.omega / m
        assert sel.coeffs[m] >= 0


def test_lazy_extension_and_rescale():
    g = builtin("partitions", N=10)
    assert g.extended(30).coeffs[:11] == g.coeffs
    r = rescale(builtin("lists", N=8), Fraction(1, 2))
    assert list(r.coeffs) == [0] + [Fraction(1, 2**n) for n in range(1, 9)]
    assert float(r.radius.value()) == 2.0


def test_series_file_formats(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"coeffs": ["0", "1", "1/2", "1/6"], "radius": "inf"}))
    s = parse_series_spec(str(p))
    assert s.coeffs == (0, 1, Fraction(1, 2), Fraction(1, 6))
    q = tmp_path / "s.csv"
    q.write_text("0\n1\n3/4\n")
    c = load_series_csv(q, "1")
    assert c.coeffs == (0, 1, Fraction(3, 4))
    b = series_from_dict({"name": "partitions", "N": 12})
    assert b.N == 12 and b.coeffs[12] == Fraction(28, 12)


def test_radius_parse():
    assert str(Radius.parse("inf")) == "inf"
    assert not Radius.parse("inf").finite
    assert abs(float(Radius.parse("1/e").value()) - 0.36787944117144233) < 1e-16
    assert float(Radius.parse("0.5").value()) == 0.5


nonneg = st.fractions(min_value=0, max_value=5, max_denominator=7)


@settings(max_examples=40, deadline=None)
@given(st.lists(nonneg, min_size=2, max_size=14).filter(lambda xs: any(x > 0 for x in xs)))
def test_exp_log_round_trip(tail):
    g = from_coeffs([Fraction(0)] + tail, "1")
    f = exp_series(g)
    assert f.coeffs[0] == 1
    assert all(a >= 0 for a in f.coeffs)
    assert log_series(f).coeffs == g.coeffs


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["sets_of_sets", "pointed_sets", "lists", "functions", "rooted_trees", "trees"]),
       st.integers(min_value=1, max_value=25))
def test_assemblies_give_integer_counts(name, n):
    f = exp_series(builtin(name, N=n))
    v = f.coeffs[n] * fact(n)
    assert v.denominator == 1 and v >= 0


def test_bell_series_factorial_scale():
    f = exp_series(builtin("sets_of_sets", N=30))
    assert [f.coeffs[n] * fact(n) for n in range(31)] == bell_table(30)
