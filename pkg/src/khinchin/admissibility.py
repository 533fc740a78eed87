"""Hayman-class criteria for f = exp(g) and the numeric arc / central-limit
diagnostics that define the class."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import reduce

import gmpy2
import numpy as np
from gmpy2 import mpfr

from . import __version__
from .family import FamilyEvaluator, approach_grid
from .series import CoefficientSeries, precision
from .trend import Trend, TrendRule, classify

REPORT_VERSION = 1


class CutOutsideWindow(ValueError):
    pass


class CoefficientRangeExceeded(RuntimeError):
    pass


class NotAPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class FitOptions:
    blocks: int = 16
    stability_rel: float = 0.01
    stability_abs: float = 0.1
    spread_tol: float = 0.5


@dataclass(frozen=True)
class GrowthFit:
    scale: str  # "exponential" (b_n n! ~ beta^n) or "geometric" (b_n R^n ~ n^beta)
    window: tuple
    beta_hat: float
    lambda_hat: float
    B_hat: float
    L_hat: float
    residual: float
    stable: bool
    beta_half: float
    lambda_half: float

    def to_json(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d


@dataclass(frozen=True)
class Inapplicable:
    reason: str
    partial: GrowthFit | None = None

    def to_json(self) -> dict:
        return {"reason": self.reason, "partial_fit": self.partial.to_json() if self.partial else None}


# --- growth fits --------------------------------------------------------------


def default_window(g: CoefficientSeries, n_max: int = 1024) -> tuple[int, int]:
    top = n_max
    if not g.extendable:
        top = min(top, g.N)
    return max(1, top // 4), top


def _transformed(g, window, scale, bits=256):
    lo, hi = window
    if lo < 1 or hi <= lo:
        raise ValueError(f"bad window {window}")
    b = g.mp_coeffs(hi, bits)
    xs, ys = [], []
    with precision(bits):
        logR = None if scale == "exponential" else g.radius.log()
        for n in range(lo, hi + 1):
            if not b[n] > 0:
                return n, None, None
            y = gmpy2.log(b[n])
            if scale == "exponential":
                y += gmpy2.lgamma(n + 1)[0]
                xs.append(float(n))
            else:
                y += n * logR
                xs.append(math.log(n))
            ys.append(float(y))
    return None, np.array(xs), np.array(ys)


def _envelopes(x, y, blocks):
    edges = np.linspace(x[0], x[-1], blocks + 1)
    idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, blocks - 1)
    lo_pts, hi_pts = [], []
    for b in range(blocks):
        sel = np.nonzero(idx == b)[0]
        if len(sel) == 0:
            continue
        i_min = sel[np.argmin(y[sel])]
        i_max = sel[np.argmax(y[sel])]
        lo_pts.append((x[i_min], y[i_min]))
        hi_pts.append((x[i_max], y[i_max]))
    return np.array(lo_pts), np.array(hi_pts)


def _slope(pts):
    if len(pts) < 2:
        return 0.0, 0.0
    a, c = np.polyfit(pts[:, 0], pts[:, 1], 1)
    res = float(np.max(np.abs(pts[:, 1] - (a * pts[:, 0] + c))))
    return float(a), res


def _fit(g, window, scale, opts: FitOptions):
    bad, x, y = _transformed(g, window, scale)
    if bad is not None:
        return Inapplicable(f"b_{bad} = 0 inside window {list(window)}: no positive lower constant exists")
    lo_pts, hi_pts = _envelopes(x, y, opts.blocks)
    s_lo, r_lo = _slope(lo_pts)
    s_hi, r_hi = _slope(hi_pts)
    half = len(lo_pts) // 2
    s_lo_h, _ = _slope(lo_pts[half:])
    s_hi_h, _ = _slope(hi_pts[half:])
    if s_lo > s_hi:
        s_lo = s_hi = 0.5 * (s_lo + s_hi)

    def tol(v):
        return max(opts.stability_rel * abs(v), opts.stability_abs)

    stable = abs(s_lo - s_lo_h) <= tol(s_lo) and abs(s_hi - s_hi_h) <= tol(s_hi)
    if scale == "exponential":
        B = float(np.min(np.exp(y - s_lo * x)))
        L = float(np.max(np.exp(y - s_hi * x)))
        beta, lam, bh, lh = math.exp(s_lo), math.exp(s_hi), math.exp(s_lo_h), math.exp(s_hi_h)
    else:
        B = float(np.min(np.exp(y - s_lo * x)))
        L = float(np.max(np.exp(y - s_hi * x)))
        beta, lam, bh, lh = s_lo, s_hi, s_lo_h, s_hi_h
    fit = GrowthFit(scale, tuple(window), beta, lam, B, L, max(r_lo, r_hi), bool(stable), bh, lh)
    if s_hi - s_lo > opts.spread_tol:
        return Inapplicable(
            f"lower and upper envelopes grow at different rates (spread {s_hi - s_lo:.3f}); "
            "the lower bound is carried by a sparse subsequence", fit)
    if not stable:
        return Inapplicable("envelope exponents not stable between half and full window", fit)
    return fit


def fit_quasiexponential(g: CoefficientSeries, window=None, opts: FitOptions = FitOptions()):
    """Fit B beta^n/n! <= b_n <= L lambda^n/n! over the window."""
    return _fit(g, window or default_window(g), "exponential", opts)


def fit_quasigeometric(g: CoefficientSeries, window=None, opts: FitOptions = FitOptions()):
    """Fit B n^beta/R^n <= b_n <= L n^lambda/R^n over the window.

    Coherent envelopes with beta <= -1 still return a fit; the verdict layer
    turns that into fails_hypothesis.
    """
    if not g.radius.finite:
        raise ValueError("quasigeometric fit needs a finite radius")
    return _fit(g, window or default_window(g), "geometric", opts)


def polynomial_gcd_check(g: CoefficientSeries) -> str:
    if not g.polynomial:
        raise NotAPolynomial(f"{g.provenance} is not a polynomial")
    idx = [n for n in range(1, len(g.coeffs)) if g.coeffs[n] > 0]
    if not idx:
        return "fails_hypothesis"
    return "hayman" if reduce(math.gcd, idx) == 1 else "fails_hypothesis"


def margin(fit: GrowthFit) -> float:
    if fit.scale == "exponential":
        return 3 * fit.beta_hat - 2 * fit.lambda_hat
    return 3 * fit.beta_hat + 1 - 2 * fit.lambda_hat


def cut_window(fit: GrowthFit) -> tuple[float, float]:
    if fit.scale == "exponential":
        return fit.lambda_hat / 3, fit.beta_hat / 2
    return fit.lambda_hat / 3 + 4 / 3, fit.beta_hat / 2 + 1.5


# --- cut functions and omega_g --------------------------------------------------


@dataclass(frozen=True)
class Cut:
    form: str  # power_to_R | exponential | inverse_power
    alpha: float

    def __call__(self, t, radius) -> float:
        t = float(t)
        if self.form == "power_to_R":
            return (1 - t / float(radius.value())) ** self.alpha
        if self.form == "exponential":
            return math.exp(-self.alpha * t)
        return t ** (-self.alpha)

    def describe(self) -> str:
        return {"power_to_R": "(1-t/R)^alpha", "exponential": "exp(-alpha t)",
                "inverse_power": "t^(-alpha)"}[self.form]


def omega_g(ev: FamilyEvaluator, t):
    """(1/6)(b_1 t + 8 b_2 t^2 + (9/2) t^3 g'''(t))."""
    s = ev.sums(t)
    b = ev.g.mp_coeffs(2, ev.precision_bits)
    with precision(ev.precision_bits):
        t3g3 = s.s3 - 3 * s.s2 + 2 * s.s1
        return (b[1] * s.t + 8 * b[2] * s.t**2 + mpfr(4.5) * t3g3) / 6


def cut_check(ev: FamilyEvaluator, alpha: float, t_grid, fit: GrowthFit | None = None,
              window: tuple | None = None, form: str | None = None,
              rule: TrendRule = TrendRule()) -> Trend:
    """Trend of omega_g(t) h(t)^3 along the grid."""
    if window is None and fit is not None:
        window = cut_window(fit)
    if window is not None and not (window[0] < alpha < window[1]):
        raise CutOutsideWindow(f"alpha={alpha} outside ({window[0]:.6g}, {window[1]:.6g})")
    cut = Cut(form or default_cut_form(ev.g), alpha)
    vals = [float(omega_g(ev, t)) * cut(t, ev.radius) ** 3 for t in t_grid]
    return classify(vals, rule)


def default_cut_form(g: CoefficientSeries) -> str:
    if g.polynomial:
        return "inverse_power"
    return "power_to_R" if g.radius.finite else "exponential"


# --- arc diagnostics --------------------------------------------------------------


@dataclass(frozen=True)
class ArcResult:
    t: float
    h: float
    value: float
    log_value: float
    argmax_theta: float
    grid_points: int

    def to_json(self) -> dict:
        return {k: _jnum(v) for k, v in asdict(self).items()}


def _jnum(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _refine(fn, grid, vals, rounds=3, top=3, pts=48):
    grid, vals = list(grid), list(vals)
    for _ in range(rounds):
        order = np.argsort(grid)
        g_arr = np.asarray(grid)[order]
        v_arr = np.asarray(vals)[order]
        n = len(g_arr)
        peaks = [i for i in range(n)
                 if (i == 0 or v_arr[i] >= v_arr[i - 1]) and (i == n - 1 or v_arr[i] >= v_arr[i + 1])]
        peaks = sorted(peaks, key=lambda i: -v_arr[i])[:top]
        new = []
        for i in peaks:
            a = g_arr[max(i - 1, 0)]
            b = g_arr[min(i + 1, n - 1)]
            if b > a:
                new.extend(np.linspace(a, b, pts)[1:-1])
        if not new:
            break
        new = np.array(new)
        grid.extend(new.tolist())
        vals.extend(np.asarray(fn(new)).tolist())
    k = int(np.argmax(vals))
    return grid[k], vals[k], len(grid)


def minor_arc_diagnostic(ev: FamilyEvaluator, t, h: float, points: int = 512) -> ArcResult:
    """sigma(t) sup_{h <= |theta| <= pi} |f(t e^{i theta})| / f(t)."""
    if not (0 < h <= math.pi):
        raise ValueError(f"h must lie in (0, pi], got {h}")
    log_sigma = 0.5 * math.log(float(ev.variance(t)))
    if h == math.pi:
        grid = np.array([math.pi])
        vals = ev.delta_real(t, grid)
        th, v, npts = math.pi, float(vals[0]), 1
    else:
        half = points // 2
        grid = np.unique(np.concatenate([
            np.geomspace(h, math.pi, half), np.linspace(h, math.pi, points - half)]))
        vals = ev.delta_real(t, grid)
        th, v, npts = _refine(lambda x: ev.delta_real(t, x), grid, vals)
    lv = log_sigma + v
    return ArcResult(float(t), h, math.exp(lv) if lv > -745 else 0.0, lv, float(th), npts)


def _expm1_abs(z: np.ndarray) -> np.ndarray:
    x, y = z.real, z.imag
    re = np.expm1(x) * np.cos(y) - 2 * np.sin(y / 2) ** 2
    im = np.exp(x) * np.sin(y)
    return np.hypot(re, im)


def major_arc_diagnostic(ev: FamilyEvaluator, t, h: float, points: int = 512) -> ArcResult:
    """sup_{|theta| <= h sigma} |E exp(i theta Xn_t) e^{theta^2/2} - 1|."""
    if h <= 0:
        raise ValueError("h must be positive")
    H = h * float(ev.sigma(t))
    half = points // 2
    grid = np.unique(np.concatenate([
        np.linspace(0, H, points - half), np.geomspace(H * 1e-3, H, half)]))

    def fn(x):
        return _expm1_abs(ev.gaussian_exponent(t, x))

    vals = fn(grid)
    th, v, npts = _refine(fn, grid, vals)
    return ArcResult(float(t), h, float(v), math.log(v) if v > 0 else -math.inf, float(th), npts)


@dataclass(frozen=True)
class CLTResult:
    t: float
    value: float
    argmax_n: int
    n_hi: int

    def to_json(self) -> dict:
        return asdict(self)


def central_limit_sup(ev: FamilyEvaluator, t, max_n: int = 250_000) -> CLTResult:
    """sup_n |P(X_t = n) sqrt(2 pi) sigma - exp(-(n-m)^2 / (2 sigma^2))| over
    n in [-1, m + 12 sigma]."""
    m = float(ev.mean(t))
    s2 = float(ev.variance(t))
    sig = math.sqrt(s2)
    n_hi = int(math.ceil(m + 12 * sig))
    if n_hi > max_n:
        raise CoefficientRangeExceeded(f"needs masses up to n={n_hi}, budget {max_n}")
    lm = ev.log_mass_table(t, n_hi)
    n = np.arange(n_hi + 1, dtype=float)
    diff = np.abs(np.exp(lm + math.log(math.sqrt(2 * math.pi) * sig)) - np.exp(-((n - m) ** 2) / (2 * s2)))
    k = int(np.argmax(diff))
    v, arg = float(diff[k]), k
    boundary = math.exp(-((1 + m) ** 2) / (2 * s2))
    if boundary > v:
        v, arg = boundary, -1
    return CLTResult(float(t), v, arg, n_hi)


def lemma_bound_check(ev: FamilyEvaluator, kind: str, B: float, beta: float,
                      t_grid, thetas=None, slack: float = 1e-12):
    """max over the grid of [Re g(t e^{i theta}) - g(t)] - rhs, where rhs is
    B(e^{beta t cos theta} - e^{beta t}) (exponential) or
    B(|1 - z/R|^{-beta} - (1 - t/R)^{-beta}) (geometric).

    Returns (violation, (t, theta)); violation <= 0 certifies the bound on the
    grid up to a relative slack.
    """
    if thetas is None:
        thetas = np.linspace(-math.pi, math.pi, 513)
    thetas = np.asarray(thetas, dtype=float)
    worst, where = -math.inf, None
    R = float(ev.radius.value()) if ev.radius.finite else None
    for t in t_grid:
        tf = float(t)
        lhs = ev.delta_real(t, thetas)
        if kind == "exponential":
            rhs = B * (np.exp(beta * tf * np.cos(thetas)) - math.exp(beta * tf))
        elif kind == "geometric":
            u = tf / R
            rhs = B * (np.abs(1 - u * np.exp(1j * thetas)) ** (-beta) - (1 - u) ** (-beta))
        else:
            raise ValueError(f"unknown lemma kind {kind!r}")
        scale = np.maximum(np.abs(lhs), np.abs(rhs))
        viol = lhs - rhs - slack * scale
        i = int(np.argmax(viol))
        if viol[i] > worst:
            worst, where = float(viol[i]), (tf, float(thetas[i]))
    return max(worst, 0.0) if worst <= 0 else worst, where


def geometric_lemma_constants(fit: GrowthFit, n_max: int = 4096) -> tuple[float, float]:
    """(B_beta, beta + 1) such that B n^beta >= B_beta Gamma(n+beta+1)/(Gamma(beta+1) n!)
    for 1 <= n <= n_max; feeds the geometric form of lemma_bound_check."""
    b = fit.beta_hat
    n = np.arange(1, n_max + 1, dtype=float)
    lg = np.array([math.lgamma(k + b + 1) - math.lgamma(k + 1) for k in n]) - math.lgamma(b + 1)
    ratio = np.exp(b * np.log(n) - lg)
    return fit.B_hat * float(np.min(ratio)), b + 1


# --- full report --------------------------------------------------------------------


@dataclass(frozen=True)
class ReportOptions:
    n_fit: int = 1024
    window: tuple | None = None
    ks: tuple | None = None
    alpha: float | None = None
    diagnostics: bool = True
    arc_points: int = 512
    clt_max_n: int = 250_000
    fit: FitOptions = field(default_factory=FitOptions)
    trend: TrendRule = field(default_factory=TrendRule)


@dataclass
class AdmissibilityReport:
    series: dict
    criterion: str
    verdict: str
    fit: GrowthFit | None
    inapplicable_reason: str | None
    margin: float | None
    cut_exponent_window: tuple | None
    cut: dict | None
    diagnostics: dict | None
    notes: list
    config: dict

    def to_json(self) -> dict:
        return {
            "report_version": REPORT_VERSION,
            "artifact_version": __version__,
            "series": self.series,
            "criterion": self.criterion,
            "verdict": self.verdict,
            "fit": self.fit.to_json() if self.fit else None,
            "inapplicable_reason": self.inapplicable_reason,
            "margin": self.margin,
            "cut_exponent_window": list(self.cut_exponent_window) if self.cut_exponent_window else None,
            "cut": self.cut,
            "diagnostics": self.diagnostics,
            "notes": list(self.notes),
            "config": self.config,
        }


def default_ks(g: CoefficientSeries) -> tuple:
    return (4, 5, 6, 7, 8, 9) if g.radius.finite else (3, 4, 5, 6, 7, 8)


def _diagnostics(ev, cut: Cut, ks, opts: ReportOptions, notes: list) -> dict:
    grid = approach_grid(ev.radius, ks)
    tf = [float(t) for t in grid]
    var = [float(ev.variance(t)) for t in grid]
    cut_vals, minor, major, clt = [], [], [], []
    for t in grid:
        h = cut(t, ev.radius)
        cut_vals.append(float(omega_g(ev, t)) * h**3)
        hm = min(h, math.pi)
        if hm < h:
            notes.append(f"h({float(t):.6g}) = {h:.4g} > pi; minor arc taken at pi")
        minor.append(minor_arc_diagnostic(ev, t, hm, opts.arc_points))
        major.append(major_arc_diagnostic(ev, t, h, opts.arc_points))
        try:
            clt.append(central_limit_sup(ev, t, opts.clt_max_n))
        except CoefficientRangeExceeded:
            clt.append(None)
    rule = opts.trend
    clt_done = [c for c in clt if c is not None]
    return {
        "grid": {"k": list(ks), "t": tf},
        "variance": classify(var, rule).to_json(),
        "cut_condition": classify(cut_vals, rule).to_json(),
        "minor_arc": {
            "points": [a.to_json() for a in minor],
            "trend": classify([a.log_value for a in minor], rule, log_values=True).to_json(),
        },
        "major_arc": {
            "points": [a.to_json() for a in major],
            "trend": classify([a.value for a in major], rule).to_json(),
        },
        "central_limit": {
            "points": [c.to_json() if c else None for c in clt],
            "skipped_t": [tf[i] for i, c in enumerate(clt) if c is None],
            "trend": classify([c.value for c in clt_done], rule).to_json() if len(clt_done) >= 2 else None,
        },
    }


def full_report(g: CoefficientSeries, opts: ReportOptions = ReportOptions(),
                evaluator: FamilyEvaluator | None = None) -> AdmissibilityReport:
    notes: list = []
    fit = None
    reason = None
    mg = None
    win = None
    if g.polynomial:
        criterion = "polynomial_gcd"
        verdict = polynomial_gcd_check(g)
        d = g.degree
        alpha = opts.alpha if opts.alpha is not None else 5 * d / 12
        win = (d / 3, d / 2)
    else:
        window = opts.window or default_window(g, opts.n_fit)
        res = fit_quasigeometric(g, window, opts.fit) if g.radius.finite else fit_quasiexponential(g, window, opts.fit)
        criterion = "quasigeometric" if g.radius.finite else "quasiexponential"
        if isinstance(res, Inapplicable):
            verdict = "inapplicable"
            reason = res.reason
            fit = res.partial
            criterion = "inapplicable"
            alpha = opts.alpha if opts.alpha is not None else (17 / 12 if g.radius.finite else None)
        else:
            fit = res
            mg = margin(fit)
            if abs(mg) < 1e-9:
                mg = 0.0
            win = cut_window(fit)
            if fit.scale == "geometric" and fit.beta_hat <= -1 + 1e-9:
                verdict = "fails_hypothesis"
                notes.append(f"fitted beta = {fit.beta_hat:.4f} is not > -1")
            elif mg > 0:
                verdict = "hayman"
            else:
                verdict = "fails_hypothesis"
                if mg == 0:
                    notes.append("margin exactly 0: the criterion needs a strict inequality")
            alpha = opts.alpha if opts.alpha is not None else 0.5 * (win[0] + win[1])
            if win[0] >= win[1]:
                notes.append("cut exponent window is empty; diagnostics use its midpoint")
        if fit is not None and fit.scale == "geometric" and g.provenance.split(":")[1:2] and \
                any(g.provenance.startswith(f"builtin:{k}") for k in
                    ("partitions", "plane_partitions", "colored_partitions", "distinct_parts")):
            notes.append("upper envelope of a divisor-type series is ~log log n; the true bound is "
                         "D_eps n^eps for every eps > 0, the fitted lambda is reported as is")
    cut = None
    diag = None
    if alpha is not None:
        cut = Cut(default_cut_form(g), alpha)
    if opts.diagnostics and cut is not None:
        ev = evaluator or FamilyEvaluator(g)
        diag = _diagnostics(ev, cut, opts.ks or default_ks(g), opts, notes)
    elif opts.diagnostics:
        notes.append("no cut exponent available; diagnostics skipped")
    return AdmissibilityReport(
        series={"provenance": g.provenance, "radius": str(g.radius), "N": g.N},
        criterion=criterion,
        verdict=verdict,
        fit=fit,
        inapplicable_reason=reason,
        margin=mg,
        cut_exponent_window=win,
        cut={"form": cut.describe(), "alpha": cut.alpha} if cut else None,
        diagnostics=diag,
        notes=notes,
        config=_opts_json(opts),
    )


def _opts_json(opts: ReportOptions) -> dict:
    d = asdict(opts)
    for k in ("window", "ks"):
        if d[k] is not None:
            d[k] = list(d[k])
    return d
