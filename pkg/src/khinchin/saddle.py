"""Saddle equation m(t_n) = n and the coefficient formulas built on it."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import gmpy2
from gmpy2 import mpfr

from .family import FamilyEvaluator, TruncationInsufficient
from .numbertheory import DEFAULT_MEMORY_BUDGET, exact_table
from .series import CoefficientSeries, exp_series, precision
from .trend import Trend, TrendRule, classify


class MeanBounded(RuntimeError):
    def __init__(self, message: str, ceiling: float):
        super().__init__(message)
        self.ceiling = ceiling


class NoConvergence(RuntimeError):
    pass


class SchemeUndefined(ValueError):
    pass


@dataclass(frozen=True)
class SaddleSolution:
    n: int
    t: object
    m_at_t: object
    sigma_at_t: object
    log_f_at_t: object
    residual: object
    mode: str = "exact_saddle"
    iterations: int = 0


def _probe_next(t, R):
    return (t + R) / 2 if R is not None else 2 * t


def solve_saddle(ev: FamilyEvaluator, n, t0=None, max_probe: int = 40, rel_plateau: float = 1e-6,
                 max_iter: int = 200, tol: float = 1e-20) -> SaddleSolution:
    """Bracket toward R, bisect a few steps, then Newton with m'(t) = sigma^2(t)/t."""
    if n <= 0:
        raise ValueError("n must be positive")
    bits = ev.precision_bits
    with precision(bits):
        R = ev.radius.value() if ev.radius.finite else None
        target = mpfr(n)
        t = mpfr(t0) if t0 is not None else (R / 2 if R is not None else mpfr(1))
        lo, hi = mpfr(0), None
        m_prev = None
        probes = 0
        while True:
            try:
                m = ev.mean(t)
            except TruncationInsufficient:
                if m_prev is None and probes < max_probe:
                    # the starting point is already past the data; back off toward 0
                    probes += 1
                    t = t / 2
                    continue
                raise MeanBounded(
                    f"mean could not be evaluated beyond m={float(m_prev or 0):.6g} "
                    f"(truncation ceiling reached while probing toward R)", float(m_prev or 0)) from None
            if m >= target:
                hi = t
                break
            lo = t
            if m_prev is not None and m - m_prev <= rel_plateau * m:
                raise MeanBounded(f"mean plateaus near {float(m):.6g} < n={n}", float(m))
            probes += 1
            if probes > max_probe:
                raise MeanBounded(f"mean below n={n} after {max_probe} probes (m={float(m):.6g})", float(m))
            m_prev = m
            t = _probe_next(t, R)
        # lower end: shrink from hi if the initial guess overshot
        if lo == 0:
            t = hi / 2
            while ev.mean(t) >= target:
                hi = t
                t = t / 2
            lo = t
        for _ in range(10):
            mid = (lo + hi) / 2
            if ev.mean(mid) < target:
                lo = mid
            else:
                hi = mid
        t = (lo + hi) / 2
        thresh = tol * target
        for it in range(1, max_iter + 1):
            s = ev.sums(t)
            f = s.s1 - target
            if abs(f) <= thresh:
                return SaddleSolution(n, t, s.s1, gmpy2.sqrt(s.s2), s.s0, abs(f), "exact_saddle", it)
            if f < 0:
                lo = t
            else:
                hi = t
            step = f * t / s.s2
            t_new = t - step
            if not (lo < t_new < hi):
                t_new = (lo + hi) / 2
            if t_new == t:
                break
            t = t_new
        raise NoConvergence(f"saddle for n={n} did not converge in {max_iter} iterations")


# --- estimates ---------------------------------------------------------------------


@dataclass(frozen=True)
class EstimateComparison:
    n: int
    t: float
    log_estimate: float
    log_exact: float | None
    log_ratio: float | None
    scheme: str
    log_estimate_sigma_tilde: float | None = None
    log_ratio_sigma_tilde: float | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _compare(n, t, log_est, log_exact, scheme, alt=None) -> EstimateComparison:
    lr = None if log_exact is None else log_est - log_exact
    lr_alt = None if (log_exact is None or alt is None) else alt - log_exact
    return EstimateComparison(n, float(t), log_est, log_exact, lr, scheme, alt, lr_alt)


def _log_formula(ev, t, n, sigma=None):
    s = ev.sums(t)
    with precision(ev.precision_bits):
        sig = gmpy2.sqrt(s.s2) if sigma is None else mpfr(sigma)
        v = s.s0 - n * gmpy2.log(s.t) - gmpy2.log(gmpy2.sqrt(2 * gmpy2.const_pi()) * sig)
    return float(v)


def hayman_estimate(ev: FamilyEvaluator, n: int, oracle=None, t0=None) -> EstimateComparison:
    """log a_n ~ log f(t_n) - n log t_n - log(sqrt(2 pi) sigma(t_n))."""
    sol = solve_saddle(ev, n, t0=t0)
    log_est = _log_formula(ev, sol.t, n)
    return _compare(n, sol.t, log_est, _oracle_value(oracle, n), "saddle")


@dataclass(frozen=True)
class ApproxScheme:
    """m~(e^{-s}) = A / s^p and sigma~^2(e^{-s}) = C / s^q near R = 1, so that
    tau_n = exp(-(A/n)^(1/p)).  kind="identity" uses the exact saddle and
    kind="scaled" uses m~ = factor * m (for sanity checks)."""
    name: str
    kind: str = "power"
    A: float = 0.0
    p: float = 1.0
    C: float | None = None
    q: float | None = None
    factor: float = 1.0

    def m_tilde(self, ev: FamilyEvaluator, t) -> float:
        if self.kind == "identity":
            return float(ev.mean(t))
        if self.kind == "scaled":
            return self.factor * float(ev.mean(t))
        s = -math.log(float(t))
        return self.A / s**self.p

    def sigma_tilde(self, t) -> float | None:
        if self.kind != "power" or self.C is None:
            return None
        s = -math.log(float(t))
        return math.sqrt(self.C / s**self.q)

    def inverse(self, n, ev: FamilyEvaluator | None = None):
        if n <= 0:
            raise SchemeUndefined(f"tau_n undefined for n={n}")
        if self.kind == "identity":
            if ev is None:
                raise SchemeUndefined("identity scheme needs the evaluator")
            return solve_saddle(ev, n).t
        if self.kind != "power":
            raise SchemeUndefined(f"scheme kind {self.kind!r} has no closed-form inverse")
        return gmpy2.exp(-(mpfr(self.A) / n) ** (mpfr(1) / self.p))

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _zeta(k: int) -> float:
    return float(gmpy2.zeta(mpfr(k)))


ZETA2 = math.pi**2 / 6

BUILTIN_SCHEMES = {
    "partitions-euler": ApproxScheme("partitions-euler", "power", ZETA2, 2, 2 * ZETA2, 3),
    "plane-partitions-euler": ApproxScheme("plane-partitions-euler", "power",
                                           2 * _zeta(3), 3, 6 * _zeta(3), 4),
    "distinct-parts-euler": ApproxScheme("distinct-parts-euler", "power", ZETA2 / 2, 2, ZETA2, 3),
    "identity": ApproxScheme("identity", "identity"),
}


_TOKEN = re.compile(r"\s*(zeta\((\d+)\)|pi|[0-9.eE+-]+)\s*")


def parse_constant(text) -> float:
    """Evaluate products/quotients of numbers, pi and zeta(k), e.g. "2*zeta(3)"."""
    if isinstance(text, (int, float)):
        return float(text)
    value, op = 1.0, "*"
    for part in re.split(r"([*/])", str(text)):
        if part in ("*", "/"):
            op = part
            continue
        m = _TOKEN.fullmatch(part)
        if not m:
            raise ValueError(f"cannot parse constant {text!r}")
        tok = m.group(1)
        v = math.pi if tok == "pi" else _zeta(int(m.group(2))) if m.group(2) else float(tok)
        value = value * v if op == "*" else value / v
    return value


def load_scheme(spec: str) -> ApproxScheme:
    if spec in BUILTIN_SCHEMES:
        return BUILTIN_SCHEMES[spec]
    path = Path(spec[5:] if spec.startswith("file:") else spec)
    if not path.exists():
        raise SchemeUndefined(f"unknown scheme {spec!r}; builtin: {sorted(BUILTIN_SCHEMES)}")
    d = json.loads(path.read_text())
    kind = d.get("kind", "power")
    return ApproxScheme(
        d.get("name", path.stem), kind,
        parse_constant(d.get("A", 0)), float(d.get("p", 1)),
        parse_constant(d["C"]) if "C" in d else None,
        float(d["q"]) if "q" in d else None,
        float(d.get("factor", 1.0)))


def baez_duarte_estimate(ev: FamilyEvaluator, scheme: ApproxScheme, n: int, oracle=None) -> EstimateComparison:
    """The Hayman formula evaluated at tau_n = scheme.inverse(n) instead of t_n;
    when the scheme has sigma~, the variant with sigma~(tau_n) is reported too."""
    tau = scheme.inverse(n, ev)
    log_est = _log_formula(ev, tau, n)
    st = scheme.sigma_tilde(tau)
    alt = _log_formula(ev, tau, n, sigma=st) if st is not None else None
    return _compare(n, tau, log_est, _oracle_value(oracle, n), scheme.name, alt)


def hardy_ramanujan(n: int) -> float:
    """log of (1/(4 sqrt 3)) (1/n) exp(2 sqrt(zeta(2) n))."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return -math.log(4 * math.sqrt(3)) - math.log(n) + 2 * math.sqrt(ZETA2 * n)


@dataclass(frozen=True)
class SchemeCheck:
    values: tuple
    trend: Trend
    passed: bool

    def to_json(self) -> dict:
        return {"values": list(self.values), "trend": self.trend.to_json(), "passed": self.passed}


def scheme_condition_check(ev: FamilyEvaluator, scheme: ApproxScheme, t_grid,
                           rule: TrendRule = TrendRule()) -> SchemeCheck:
    """(m(t) - m~(t)) / sigma(t) along the grid."""
    vals = []
    for t in t_grid:
        m = float(ev.mean(t))
        vals.append((m - scheme.m_tilde(ev, t)) / float(ev.sigma(t)))
    tr = classify(vals, rule)
    return SchemeCheck(tuple(vals), tr, tr.verdict in ("to_zero", "decreasing"))


# --- exact oracles ---------------------------------------------------------------


_KIND_BY_BUILTIN = {
    "builtin:partitions": "partitions",
    "builtin:distinct_parts": "distinct_parts",
    "builtin:plane_partitions": "plane_partitions",
    "builtin:colored_partitions:c=1": "plane_partitions",
}


class Oracle:
    """Exact log a_n for f = exp(g), n <= n_max, from a counting table when the
    series is a known builtin, otherwise from the exact exponential recurrence."""

    def __init__(self, g: CoefficientSeries, n_max: int, budget: int = DEFAULT_MEMORY_BUDGET,
                 max_recurrence: int = 1000):
        self.n_max = n_max
        kind = _KIND_BY_BUILTIN.get(g.provenance)
        if kind is not None:
            self.source = kind
            self._vals = exact_table(kind, n_max, budget)
            self._scale = None
        elif g.provenance == "builtin:sets_of_sets":
            self.source = "bell"
            self._vals = exact_table("bell", n_max, budget)
            self._scale = "factorial"
        elif g.exact and g.coeffs[0] == 0 and n_max <= max_recurrence:
            self.source = "exp_series"
            gg = g.extended(n_max) if g.N < n_max else g
            self._vals = list(exp_series(gg).coeffs)
            self._scale = None
        else:
            raise ValueError(f"no exact oracle for {g.provenance} at n={n_max}")

    def log_value(self, n: int) -> float | None:
        if n > self.n_max:
            return None
        v = self._vals[n]
        if v == 0:
            return -math.inf
        with precision(128):
            lv = gmpy2.log(gmpy2.mpq(v.numerator, v.denominator) if hasattr(v, "denominator") and not
                           isinstance(v, int) else mpfr(v))
            if self._scale == "factorial":
                lv -= gmpy2.lgamma(n + 1)[0]
        return float(lv)

    def __call__(self, n: int) -> float | None:
        return self.log_value(n)


def make_oracle(g: CoefficientSeries, n_max: int, mode: str = "auto", budget: int = DEFAULT_MEMORY_BUDGET):
    if mode == "none":
        return None
    try:
        return Oracle(g, n_max, budget)
    except ValueError:
        if mode == "auto":
            return None
        raise


def _oracle_value(oracle, n):
    if oracle is None:
        return None
    return oracle(n) if callable(oracle) else oracle
