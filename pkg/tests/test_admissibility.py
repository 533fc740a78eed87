import json
import math
from fractions import Fraction
from importlib.resources import files

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from khinchin.admissibility import (CoefficientRangeExceeded, CutOutsideWindow, FitOptions, GrowthFit,
                                    Inapplicable, NotAPolynomial, ReportOptions, central_limit_sup,
                                    cut_check, cut_window, fit_quasiexponential, fit_quasigeometric,
                                    full_report, geometric_lemma_constants, lemma_bound_check,
                                    major_arc_diagnostic, margin, minor_arc_diagnostic, omega_g,
                                    polynomial_gcd_check)
from khinchin.family import FamilyEvaluator, approach_grid
from khinchin.series import builtin, from_coeffs, rescale


def _schema(name):
    return json.loads(files("khinchin").joinpath("schemas", name).read_text())


# --- growth fits ---------------------------------------------------------------


def test_fit_lists_gamma():
    fit = fit_quasigeometric(builtin("lists_gamma", {"gamma": "3/2"}))
    assert isinstance(fit, GrowthFit) and fit.stable
    assert abs(fit.beta_hat - 0.5) < 1e-3 and abs(fit.lambda_hat - 0.5) < 1e-3
    assert abs(margin(fit) - 1.5) < 1e-2


def test_fit_exponential_bell():
    fit = fit_quasiexponential(builtin("sets_of_sets"))
    assert fit.beta_hat == pytest.approx(1.0) and fit.lambda_hat == pytest.approx(1.0)
    assert margin(fit) == pytest.approx(1.0)
    lo, hi = cut_window(fit)
    assert lo == pytest.approx(1 / 3) and hi == pytest.approx(1 / 2)


def test_fit_cycles_beta_minus_one():
    fit = fit_quasigeometric(builtin("cycles"))
    assert fit.beta_hat == pytest.approx(-1, abs=1e-6)
    assert abs(margin(fit)) < 1e-9


def test_sparse_lower_envelope_is_inapplicable():
    res = fit_quasigeometric(builtin("distinct_parts"))
    assert isinstance(res, Inapplicable)
    assert res.partial is not None and res.partial.lambda_hat > res.partial.beta_hat


def test_zero_coefficient_in_window():
    coeffs = [0] + [1 if n % 2 else 0 for n in range(1, 200)]
    res = fit_quasigeometric(from_coeffs(coeffs, "1"), window=(10, 199))
    assert isinstance(res, Inapplicable) and "b_10" in res.reason


def test_quasigeometric_needs_finite_radius():
    with pytest.raises(ValueError):
        fit_quasigeometric(builtin("sets_of_sets"))


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=-0.9, max_value=3.0), st.integers(min_value=1, max_value=3))
def test_synthetic_power_law_recovered(beta, wobble):
    # b_n = n^beta (1 + wobble [n odd]) has envelopes B = 1, L = 1 + wobble, exponent beta
    coeffs = [0] + [n**beta * (1 + wobble * (n % 2)) for n in range(1, 601)]
    fit = fit_quasigeometric(from_coeffs(coeffs, "1"), window=(150, 600))
    assert isinstance(fit, GrowthFit)
    assert abs(fit.beta_hat - beta) < 1e-6 and abs(fit.lambda_hat - beta) < 1e-6
    assert fit.B_hat == pytest.approx(1, rel=1e-6) and fit.L_hat == pytest.approx(1 + wobble, rel=1e-6)


@settings(max_examples=10, deadline=None)
@given(st.floats(min_value=0.2, max_value=4.0))
def test_synthetic_exponential_recovered(beta):
    coeffs = [0] + [Fraction(beta) ** n / math.factorial(n) for n in range(1, 161)]
    fit = fit_quasiexponential(from_coeffs(coeffs, "inf"), window=(40, 160))
    assert fit.beta_hat == pytest.approx(beta, rel=1e-9)
    assert margin(fit) == pytest.approx(beta, rel=1e-9)


def test_fit_options_control_stability():
    strict = FitOptions(stability_abs=1e-6, stability_rel=1e-9)
    res = fit_quasigeometric(builtin("partitions"), opts=strict)
    assert isinstance(res, Inapplicable)


def test_polynomial_gcd():
    assert polynomial_gcd_check(builtin("polynomial", {"coeffs": "0 1 1"})) == "hayman"
    assert polynomial_gcd_check(builtin("polynomial", {"coeffs": "0 0 1"})) == "fails_hypothesis"
    assert polynomial_gcd_check(builtin("polynomial", {"coeffs": "0 0 0 1 0 1"})) == "hayman"
    assert polynomial_gcd_check(builtin("polynomial", {"coeffs": "0 0 2 0 3"})) == "fails_hypothesis"
    with pytest.raises(NotAPolynomial):
        polynomial_gcd_check(builtin("lists"))


# --- rescaling --------------------------------------------------------------------


def test_geometric_fit_invariant_under_rescale():
    g = builtin("lists_gamma", {"gamma": "5/2"})
    a = fit_quasigeometric(g)
    b = fit_quasigeometric(rescale(g, "3"))
    assert b.beta_hat == pytest.approx(a.beta_hat, abs=1e-9)
    assert margin(b) == pytest.approx(margin(a), abs=1e-9)


def test_exponential_fit_scales_under_rescale():
    g = builtin("sets_of_sets")
    b = fit_quasiexponential(rescale(g, "3"))
    assert b.beta_hat == pytest.approx(3.0, rel=1e-12)
    assert margin(b) == pytest.approx(3.0, rel=1e-12)


def test_verdict_invariant_under_rescale():
    for name in ("lists", "cycles", "sets_of_sets"):
        g = builtin(name)
        opts = ReportOptions(diagnostics=False)
        assert full_report(rescale(g, "1/2"), opts).verdict == full_report(g, opts).verdict


# --- cut condition --------------------------------------------------------------


def test_omega_g_closed_forms():
    z = FamilyEvaluator(builtin("monomial", {"k": 1}))
    z2 = FamilyEvaluator(builtin("monomial", {"k": 2}))
    for t in (0.5, 3.0, 40.0):
        assert float(omega_g(z, t)) == pytest.approx(t / 6, rel=1e-14)
        assert float(omega_g(z2, t)) == pytest.approx(8 * t * t / 6, rel=1e-14)


def test_omega_g_bell():
    ev = FamilyEvaluator(builtin("sets_of_sets"))
    t = 2.0
    want = (t + 4 * t * t + 4.5 * t**3 * math.exp(t)) / 6
    assert float(omega_g(ev, t)) == pytest.approx(want, rel=1e-14)


def test_cut_check_bell():
    g = builtin("sets_of_sets")
    ev = FamilyEvaluator(g)
    fit = fit_quasiexponential(g)
    grid = approach_grid(g.radius, range(3, 9))
    with pytest.raises(CutOutsideWindow):
        cut_check(ev, 0.6, grid, fit=fit)
    assert cut_check(ev, 0.4, grid, fit=fit).verdict == "to_zero"


def test_cut_check_lists_slow_decay():
    g = builtin("lists")
    ev = FamilyEvaluator(g)
    tr = cut_check(ev, 1.45, approach_grid(g.radius, range(4, 10)), fit=fit_quasigeometric(g))
    # omega_g h^3 ~ (1-t)^0.35: decreasing but short of the 1e3 ratio on this grid
    assert tr.strictly_decreasing and tr.verdict == "decreasing"


# --- arcs ------------------------------------------------------------------------


def test_minor_arc_closed_form_for_z():
    ev = FamilyEvaluator(builtin("monomial", {"k": 1}))
    for t, h in ((4.0, 0.3), (50.0, 0.1), (200.0, 0.05)):
        r = minor_arc_diagnostic(ev, t, h)
        want = 0.5 * math.log(t) + t * (math.cos(h) - 1)
        assert r.log_value == pytest.approx(want, rel=1e-10)
        assert r.argmax_theta == pytest.approx(h)


def test_minor_arc_at_pi_single_point():
    ev = FamilyEvaluator(builtin("monomial", {"k": 1}))
    r = minor_arc_diagnostic(ev, 3.0, math.pi)
    assert r.grid_points == 1
    assert r.log_value == pytest.approx(0.5 * math.log(3.0) - 6.0, rel=1e-12)
    with pytest.raises(ValueError):
        minor_arc_diagnostic(ev, 3.0, 4.0)


def test_minor_arc_cycles_does_not_vanish():
    ev = FamilyEvaluator(builtin("cycles"))
    vals = []
    for k in range(4, 10):
        t = 1 - 2.0**-k
        r = minor_arc_diagnostic(ev, t, 1 - t)
        # sigma sup |f(z)|/f(t) = sqrt(t) / |1 - t e^{ih}|, attained at theta = h
        want = math.sqrt(t) / abs(1 - t * complex(math.cos(1 - t), math.sin(1 - t)))
        assert r.value == pytest.approx(want, rel=1e-10)
        vals.append(r.value)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_major_arc_for_z_decreases():
    ev = FamilyEvaluator(builtin("monomial", {"k": 1}))
    vals = [major_arc_diagnostic(ev, t, t ** (-5 / 12)).value for t in (25.0, 100.0, 400.0)]
    assert vals[0] > vals[1] > vals[2]
    # leading term is theta^3 / (6 sqrt t) at theta = h sigma = t^(1/12)
    for t, v in zip((25.0, 100.0, 400.0), vals):
        assert v == pytest.approx(t**0.25 / (6 * math.sqrt(t)), rel=0.15)


def test_major_arc_zero_at_origin():
    ev = FamilyEvaluator(builtin("sets_of_sets"))
    assert ev.gaussian_exponent(2.0, np.array([0.0]))[0] == 0


# --- central limit ---------------------------------------------------------------


def test_central_limit_for_poisson():
    ev = FamilyEvaluator(builtin("monomial", {"k": 1}))
    vals = [central_limit_sup(ev, t).value for t in (16.0, 64.0, 256.0)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[-1] < 0.05


def test_central_limit_budget():
    ev = FamilyEvaluator(builtin("monomial", {"k": 1}))
    with pytest.raises(CoefficientRangeExceeded):
        central_limit_sup(ev, 5000.0, max_n=1000)


# --- lemma bounds ----------------------------------------------------------------


def test_exponential_lemma_for_bell():
    g = builtin("sets_of_sets")
    viol, _ = lemma_bound_check(FamilyEvaluator(g), "exponential", 1.0, 1.0, approach_grid(g.radius, range(1, 6)))
    assert viol <= 0


def test_exponential_lemma_fails_with_too_large_constant():
    g = builtin("sets_of_sets")
    viol, where = lemma_bound_check(FamilyEvaluator(g), "exponential", 1.0, 2.0, [2.0])
    assert viol > 0 and where[0] == 2.0


def test_geometric_lemma_for_lists():
    g = builtin("lists")
    B, beta = geometric_lemma_constants(fit_quasigeometric(g))
    assert B == pytest.approx(1.0) and beta == pytest.approx(1.0, abs=1e-6)
    viol, _ = lemma_bound_check(FamilyEvaluator(g), "geometric", B, beta, approach_grid(g.radius, range(2, 8)))
    assert viol <= 0


def test_lemma_unknown_kind():
    with pytest.raises(ValueError):
        lemma_bound_check(FamilyEvaluator(builtin("lists")), "linear", 1, 1, [0.5])


# --- reports ----------------------------------------------------------------------


@pytest.mark.parametrize("name,params", [
    ("lists", {}), ("binary_partitions", {}), ("polynomial", {"coeffs": "0 1 1"}), ("cycles", {}),
])
def test_report_matches_schema(name, params):
    rep = full_report(builtin(name, params), ReportOptions(ks=(3, 4, 5), arc_points=64)).to_json()
    jsonschema.validate(rep, _schema("report.schema.json"))
    assert json.loads(json.dumps(rep)) == rep


def test_report_verdicts():
    opts = ReportOptions(diagnostics=False)
    assert full_report(builtin("lists"), opts).verdict == "hayman"
    assert full_report(builtin("cycles"), opts).verdict == "fails_hypothesis"
    rep = full_report(builtin("square_partitions"), opts)
    assert rep.verdict == "inapplicable" and rep.inapplicable_reason
    assert full_report(builtin("polynomial", {"coeffs": "0 0 1"}), opts).criterion == "polynomial_gcd"


def test_series_json_matches_schema():
    schema = _schema("series.schema.json")
    for g in (builtin("partitions"), builtin("polynomial", {"coeffs": "0 1 2"}),
              from_coeffs([0, 1, "1/2"], "2")):
        jsonschema.validate(g.to_json(), schema)


def test_lemma_monomial_equality_at_zero():
    ev = FamilyEvaluator(builtin("monomial", {"k": 1}))
    viol, where = lemma_bound_check(ev, "exponential", 0.7, 1.3, [0.5, 2.0], thetas=[0.0])
    assert viol == 0 and where[1] == 0.0


@pytest.mark.parametrize("name,params", [
    ("sets_of_sets", {}), ("pointed_sets", {}), ("lists", {}), ("cycles", {}), ("functions", {}),
    ("rooted_trees", {}), ("trees", {}), ("partitions", {}), ("distinct_parts", {}),
    ("plane_partitions", {}), ("square_partitions", {}), ("binary_partitions", {}),
    ("monomial", {"k": 2}),
])
def test_variance_condition_increases(name, params):
    g = builtin(name, params)
    ev = FamilyEvaluator(g)
    var = [float(ev.variance(t)) for t in approach_grid(g.radius, (4, 5, 6, 7, 8, 9))]
    assert all(b > a for a, b in zip(var, var[1:]))


@pytest.mark.parametrize("name", ["sets_of_sets", "plane_partitions"])
def test_arc_trends_for_hayman_fixtures(name):
    d = full_report(builtin(name)).diagnostics
    assert d["minor_arc"]["trend"]["strictly_decreasing"]
    assert d["major_arc"]["trend"]["strictly_decreasing"]
