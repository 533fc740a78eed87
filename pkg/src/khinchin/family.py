"""Khinchin family of f = exp(g): f(t), mean, variance, masses, characteristic
functions.

Real-axis quantities are computed at high precision (gmpy2) from the four
term-wise sums S_k(t) = sum n^k b_n t^n, k = 0..3.  Sweeps over theta use
numpy: every term of Re g(t e^{i theta}) - g(t) is nonpositive so double
precision is enough there.  The Gaussian-defect exponent is built from the
term-wise forms cos x - 1 + x^2/2 >= 0 and sin x - x, whose terms share a sign,
so double precision holds its relative accuracy there too.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .series import CoefficientSeries, SeriesError, precision


class DomainError(ValueError):
    pass


class TruncationInsufficient(RuntimeError):
    pass


class DegenerateSecondDerivative(ArithmeticError):
    pass


@dataclass(frozen=True)
class TailPolicy:
    eps: float = 1e-30
    K: int = 10
    max_terms: int = 1 << 18


@dataclass(frozen=True)
class RealSums:
    t: object
    s0: object
    s1: object
    s2: object
    s3: object
    n_terms: int


def _ld_log(v) -> float:
    return float(gmpy2.log(v)) if v > 0 else -math.inf


class FamilyEvaluator:
    def __init__(self, g: CoefficientSeries, precision_bits: int = 256, tail: TailPolicy = TailPolicy()):
        self.g = g
        self.precision_bits = precision_bits
        self.tail = tail
        self.radius = g.radius
        self._lock = threading.Lock()
        self._sums: dict = {}
        self._logb = np.empty(0)
        with precision(precision_bits):
            self._R = g.radius.value()

    # -- coefficient access --------------------------------------------------

    def _coeffs(self, n_max: int) -> list:
        try:
            return self.g.mp_coeffs(n_max, self.precision_bits)
        except SeriesError as exc:
            raise TruncationInsufficient(str(exc)) from None

    def _log_coeffs(self, n_max: int) -> np.ndarray:
        with self._lock:
            if len(self._logb) <= n_max:
                vals = self._coeffs(n_max)
                with precision(64):
                    self._logb = np.array([_ld_log(v) for v in vals], dtype=float)
            return self._logb[: n_max + 1]

    def t_value(self, t):
        with precision(self.precision_bits):
            tv = mpfr(str(t)) if isinstance(t, str) else mpfr(t)
            if not (tv > 0) or not (tv < self._R):
                raise DomainError(f"t={t} outside (0, {self.radius})")
        return tv

    # -- real sums -------------------------------------------------------------

    def sums(self, t) -> RealSums:
        tv = self.t_value(t)
        with self._lock:
            hit = self._sums.get(tv)
        if hit is not None:
            return hit
        res = self._compute_sums(tv)
        with self._lock:
            self._sums.setdefault(tv, res)
        return res

    def _compute_sums(self, t) -> RealSums:
        pol_deg = self.g.degree
        eps, K = self.tail.eps, self.tail.K
        with precision(self.precision_bits):
            s0 = s1 = s2 = s3 = mpfr(0)
            p = mpfr(1)
            run = 0
            n = 0
            limit = pol_deg if pol_deg is not None else None
            chunk = 512
            avail = self.g.max_index()
            while True:
                hi = n + chunk - 1
                if limit is not None:
                    hi = min(hi, limit)
                elif avail is not None and hi > avail:
                    hi = avail
                if hi > self.tail.max_terms:
                    raise TruncationInsufficient(
                        f"tail policy unmet after {self.tail.max_terms} terms at t={t}")
                if hi < n:
                    raise TruncationInsufficient(
                        f"series {self.g.provenance} exhausted at {n} terms before the tail was negligible")
                b = self._coeffs(hi)
                for k in range(n, hi + 1):
                    bk = b[k]
                    if bk:
                        x = bk * p
                        s0 += x
                        x2 = x * k
                        s1 += x2
                        x2 *= k
                        s2 += x2
                        x3 = x2 * k
                        s3 += x3
                        if limit is None and k and x2 < eps * s2 and x3 < eps * s3:
                            run += 1
                            if run >= K:
                                return RealSums(t, s0, s1, s2, s3, k + 1)
                        else:
                            run = 0
                    p *= t
                n = hi + 1
                if limit is not None and n > limit:
                    return RealSums(t, s0, s1, s2, s3, n)
                chunk *= 2

    # -- public real-axis API ------------------------------------------------

    def log_f(self, t):
        """log f(t) = g(t)."""
        return self.sums(t).s0

    def mean(self, t):
        return self.sums(t).s1

    def variance(self, t):
        return self.sums(t).s2

    def sigma(self, t):
        with precision(self.precision_bits):
            return gmpy2.sqrt(self.sums(t).s2)

    def g_derivatives(self, t):
        """(g'(t), g''(t), g'''(t)) from the term-wise sums."""
        s = self.sums(t)
        with precision(self.precision_bits):
            tv = s.t
            d1 = s.s1 / tv
            d2 = (s.s2 - s.s1) / tv**2
            d3 = (s.s3 - 3 * s.s2 + 2 * s.s1) / tv**3
        return d1, d2, d3

    def gaussianity_ratio(self, t):
        _, d2, d3 = self.g_derivatives(t)
        if d2 <= 0:
            raise DegenerateSecondDerivative(f"g''({t}) = 0")
        with precision(self.precision_bits):
            return d3 / d2 ** mpfr(1.5)

    def n_terms(self, t) -> int:
        return self.sums(t).n_terms

    # -- float weights for theta sweeps -----------------------------------------

    def weights(self, t) -> np.ndarray:
        """w_n = b_n t^n for n < n_terms(t)."""
        s = self.sums(t)
        n = s.n_terms
        logb = self._log_coeffs(n - 1)
        with precision(self.precision_bits):
            logt = float(gmpy2.log(s.t))
        lw = logb + np.arange(n, dtype=float) * logt
        return np.exp(lw)

    def _sweep(self, thetas, fn, n_w, dtype, block=1 << 22):
        thetas = np.atleast_1d(np.asarray(thetas, dtype=dtype))
        out = []
        rows = max(1, block // max(n_w, 1))
        for i in range(0, len(thetas), rows):
            out.append(fn(thetas[i: i + rows]))
        return np.concatenate(out) if out else np.empty(0, dtype=dtype)

    def delta_real(self, t, thetas) -> np.ndarray:
        """Re g(t e^{i theta}) - g(t) = -2 sum w_n sin^2(n theta / 2)."""
        w = self.weights(t)
        n = np.arange(len(w), dtype=float)

        def fn(th):
            s = np.sin(np.outer(th, n) / 2)
            return -2.0 * (s * s) @ w

        return self._sweep(thetas, fn, len(w), float)

    def delta(self, t, thetas) -> np.ndarray:
        """g(t e^{i theta}) - g(t), complex."""
        w = self.weights(t)
        n = np.arange(len(w), dtype=float)

        def fn(th):
            x = np.outer(th, n)
            s = np.sin(x / 2)
            re = (-2 * s * s) @ w
            im = np.sin(x) @ w
            return re + 1j * im

        return self._sweep(thetas, fn, len(w), float)

    def char_fn(self, t, theta):
        """E exp(i theta X_t) = f(t e^{i theta}) / f(t)."""
        d = self.delta(t, theta)
        out = np.exp(d)
        return complex(out[0]) if np.ndim(theta) == 0 else out

    def gaussian_exponent(self, t, thetas) -> np.ndarray:
        """log E exp(i theta Xn_t) + theta^2/2 for the normalized variable,
        computed term by term as sum w_n [(cos x - 1 + x^2/2) + i (sin x - x)],
        x = n theta / sigma(t)."""
        w = self.weights(t)
        n = np.arange(len(w), dtype=float)
        sig = float(self.sigma(t))

        def fn(th):
            x = np.outer(th / sig, n)
            re = _cos_m1_p_half_sq(x) @ w
            im = _sin_m_x(x) @ w
            return re + 1j * im

        return self._sweep(thetas, fn, len(w), float)

    def normalized_char(self, t, theta):
        """E exp(i theta (X_t - m)/sigma)."""
        th = np.atleast_1d(np.asarray(theta, dtype=float))
        e = self.gaussian_exponent(t, th) - th**2 / 2
        out = np.exp(e)
        return complex(out[0]) if np.ndim(theta) == 0 else out

    # -- masses ------------------------------------------------------------------

    def log_mass_table(self, t, n_max: int) -> np.ndarray:
        """log P(X_t = n) for n = 0..n_max, via the scaled recurrence
        n c_n = sum_k k w_k c_{n-k} with c_0 = 1."""
        s = self.sums(t)
        w = self.weights(t)
        if len(w) > n_max + 1:
            w = w[: n_max + 1]
        kw = np.arange(len(w), dtype=float) * w
        nw = len(kw) - 1
        c = np.zeros(n_max + 1)
        c[0] = 1.0
        log_scale = 0.0
        big, shrink = 1e200, 1e-200
        for n in range(1, n_max + 1):
            k = min(n, nw)
            if k == 0:
                break
            v = kw[1: k + 1] @ c[n - 1: n - k - 1 if n - k - 1 >= 0 else None: -1] / n
            c[n] = v
            if v > big:
                c[: n + 1] *= shrink
                log_scale -= math.log(shrink)
        with np.errstate(divide="ignore"):
            lc = np.log(c)
        with precision(self.precision_bits):
            b0 = self._coeffs(0)[0]
            offset = float(b0 - s.s0)
        return lc + log_scale + offset

    def mass_table_mp(self, t, n_max: int) -> list:
        """P(X_t = n), n = 0..n_max, at working precision (O(n_max * terms))."""
        s = self.sums(t)
        nw = min(n_max, s.n_terms - 1)
        b = self._coeffs(nw)
        with precision(self.precision_bits):
            kw = [mpfr(0)] + [k * b[k] * s.t**k for k in range(1, nw + 1)]
            c = [mpfr(1)] + [mpfr(0)] * n_max
            for n in range(1, n_max + 1):
                acc = mpfr(0)
                for k in range(1, min(n, nw) + 1):
                    if kw[k]:
                        acc += kw[k] * c[n - k]
                c[n] = acc / n
            scale = gmpy2.exp(b[0] - s.s0)
            return [x * scale for x in c]

    def mass(self, t, n: int) -> float:
        if n < 0:
            return 0.0
        return math.exp(self.log_mass_table(t, n)[n])


def _cos_m1_p_half_sq(x):
    """cos x - 1 + x^2/2 without cancellation."""
    small = np.abs(x) < 0.25
    x2 = x * x
    series = x2 * x2 * (1 / 24 - x2 * (1 / 720 - x2 * (1 / 40320 - x2 * (1 / 3628800 - x2 / 479001600))))
    s = np.sin(x / 2)
    direct = -2 * s * s + x2 / 2
    return np.where(small, series, direct)


def _sin_m_x(x):
    """sin x - x without cancellation."""
    small = np.abs(x) < 0.25
    x2 = x * x
    series = -x * x2 * (1 / 6 - x2 * (1 / 120 - x2 * (1 / 5040 - x2 * (1 / 362880 - x2 / 39916800))))
    return np.where(small, series, np.sin(x) - x)


# --- comparison sums used as sanity checks ---------------------------------------


def power_sum_ratio(beta: float, t: float) -> float:
    """(1-t)^beta sum_{n>=1} n^(beta-1) t^n / Gamma(beta); tends to 1 as t -> 1."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    s = -math.log(t)
    n_max = int((80 + abs(beta) * math.log(1 / s + 2)) / s) + 10
    n = np.arange(1, n_max + 1, dtype=float)
    lt = (beta - 1) * np.log(n) + n * math.log(t) + beta * math.log1p(-t) - math.lgamma(beta)
    return float(math.fsum(np.exp(lt)))


def factorial_power_sum_ratio(beta: float, t: float) -> float:
    """e^{-t} sum_n n^beta t^n / n! / t^beta; tends to 1 as t -> infinity."""
    width = 40 * math.sqrt(t) + 40
    lo, hi = max(0, int(t - width)), int(t + width) + 1
    n = np.arange(max(lo, 1), hi + 1, dtype=float)
    lt = beta * np.log(n) + n * math.log(t) - np.array([math.lgamma(k + 1) for k in n]) - t - beta * math.log(t)
    total = math.fsum(np.exp(lt))
    if lo == 0 and beta == 0:
        total += math.exp(-t)
    return float(total)


def approach_grid(radius, ks, base=None):
    """Points R(1 - 2^-k) for finite R, or 2^k (times base) for R = inf."""
    if radius.finite:
        R = radius.value()
        return [R * (1 - mpfr(2) ** -k) for k in ks]
    b = mpfr(base or 1)
    return [b * mpfr(2) ** k for k in ks]
