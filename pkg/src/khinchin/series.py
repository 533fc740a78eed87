"""Truncated power series with nonnegative exact coefficients.

A ``CoefficientSeries`` holds b_0..b_N.  Builtin catalog entries also carry a
lazy coefficient provider so that numerical code can ask for more terms than
were materialised at construction time.
"""
from __future__ import annotations

import csv
import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import gmpy2
from gmpy2 import mpfr, mpq

from . import numbertheory as nt

DEFAULT_PRECISION = 256


def precision(bits: int):
    """Context manager setting the gmpy2 working precision."""
    return gmpy2.context(gmpy2.get_context(), precision=bits)


class SeriesError(ValueError):
    pass


class NonzeroConstantTerm(SeriesError):
    pass


# --- radius -----------------------------------------------------------------


@dataclass(frozen=True)
class Radius:
    """Radius of convergence ``scale * e**e_power`` (or infinity).

    The e-power keeps 1/e (trees, functions) exact under rescaling.
    """

    scale: Fraction | None  # None means +infinity
    e_power: int = 0

    @classmethod
    def inf(cls) -> "Radius":
        return cls(None)

    @classmethod
    def parse(cls, text: str | int | float | Fraction) -> "Radius":
        if isinstance(text, (int, Fraction)):
            return cls(Fraction(text))
        if isinstance(text, float):
            return cls.inf() if math.isinf(text) else cls(Fraction(text))
        s = str(text).strip().lower()
        if s in {"inf", "+inf", "infinity"}:
            return cls.inf()
        if s in {"1/e", "exp(-1)"}:
            return cls(Fraction(1), -1)
        return cls(Fraction(s))

    @property
    def finite(self) -> bool:
        return self.scale is not None

    def value(self):
        if not self.finite:
            return mpfr("inf")
        v = mpfr(mpq(self.scale))
        return v * gmpy2.exp(mpfr(self.e_power)) if self.e_power else v

    def log(self):
        return gmpy2.log(mpfr(mpq(self.scale))) + self.e_power

    def divided(self, factor: "Radius") -> "Radius":
        if not factor.finite:
            raise SeriesError("cannot rescale by an infinite factor")
        if not self.finite:
            return self
        return Radius(self.scale / factor.scale, self.e_power - factor.e_power)

    def __str__(self) -> str:
        if not self.finite:
            return "inf"
        if self.e_power == 0:
            return str(self.scale)
        with precision(128):
            return format(self.value(), ".30g")

    def __post_init__(self):
        if self.scale is not None and self.scale <= 0:
            raise SeriesError(f"radius must be positive, got {self.scale}")


def _to_mpfr(v):
    return mpfr(mpq(v)) if isinstance(v, (Fraction, int)) else mpfr(v)


# --- lazy providers -----------------------------------------------------------


class Provider:
    """Grow-only lazy coefficient source for a catalog series."""

    exact = True
    polynomial_degree: int | None = None

    def __init__(self, name: str, params: dict, radius: Radius):
        self.name = name
        self.params = dict(params)
        self.radius = radius
        self._lock = threading.Lock()
        self._exact: list = []
        self._mp: dict[int, list] = {}

    # subclasses implement one of these
    def exact_value(self, n: int) -> Fraction:
        raise NotImplementedError

    def exact_block(self, n_max: int) -> list[Fraction]:
        return [self.exact_value(n) for n in range(n_max + 1)]

    def mp_value(self, n: int):
        return mpfr(mpq(self.exact_value(n)))

    def mp_block(self, lo: int, hi: int) -> list:
        return [self.mp_value(n) for n in range(lo, hi + 1)]

    def exact_list(self, n_max: int) -> list[Fraction]:
        if not self.exact:
            raise SeriesError(f"{self.name} has inexact coefficients")
        with self._lock:
            if len(self._exact) <= n_max:
                grow = max(n_max, 2 * len(self._exact))
                self._exact = self.exact_block(grow)
            return self._exact[: n_max + 1]

    def mp_list(self, n_max: int, bits: int) -> list:
        with self._lock:
            cur = self._mp.get(bits, [])
            if len(cur) <= n_max:
                grow = max(n_max, 2 * len(cur))
                with precision(bits):
                    cur = cur + self.mp_block(len(cur), grow)
                self._mp[bits] = cur
            return cur[: n_max + 1]

    def _exact_unlocked(self, n_max: int) -> list[Fraction]:
        if len(self._exact) <= n_max:
            self._exact = self.exact_block(max(n_max, 2 * len(self._exact)))
        return self._exact[: n_max + 1]

    def describe(self) -> dict:
        return {"name": self.name, "params": {k: str(v) for k, v in self.params.items()}}


class FormulaProvider(Provider):
    def __init__(self, name, params, radius, exact_fn=None, mp_fn=None, exact=True):
        super().__init__(name, params, radius)
        self._exact_fn = exact_fn
        self._mp_fn = mp_fn
        self.exact = exact

    def exact_value(self, n):
        return self._exact_fn(n)

    def mp_value(self, n):
        if self._mp_fn is not None:
            return self._mp_fn(n)
        return mpfr(mpq(self._exact_fn(n)))


class TableProvider(Provider):
    """Coefficients computed in bulk (divisor sieves)."""

    def __init__(self, name, params, radius, block_fn: Callable[[int], list[Fraction]]):
        super().__init__(name, params, radius)
        self._block_fn = block_fn

    def exact_block(self, n_max):
        return self._block_fn(n_max)

    def mp_block(self, lo, hi):
        vals = self._exact_unlocked(hi)
        return [_to_mpfr(v) for v in vals[lo: hi + 1]]


class PolynomialProvider(Provider):
    def __init__(self, name, params, coeffs: Sequence[Fraction]):
        super().__init__(name, params, Radius.inf())
        self._coeffs = [Fraction(c) for c in coeffs]
        while len(self._coeffs) > 1 and self._coeffs[-1] == 0:
            self._coeffs.pop()
        self.polynomial_degree = len(self._coeffs) - 1

    def exact_value(self, n):
        return self._coeffs[n] if n < len(self._coeffs) else Fraction(0)


class RescaledProvider(Provider):
    """Coefficients b_n * c^n of g(c z)."""

    def __init__(self, base: Provider, factor: Radius):
        super().__init__(base.name, {**base.params, "rescale": str(factor)}, base.radius.divided(factor))
        self.base = base
        self.factor = factor
        self.exact = base.exact and factor.e_power == 0
        self.polynomial_degree = base.polynomial_degree

    def exact_block(self, n_max):
        c = self.factor.scale
        return [b * c**n for n, b in enumerate(self.base.exact_list(n_max))]

    def mp_block(self, lo, hi):
        vals = self.base.mp_list(hi, gmpy2.get_context().precision)
        c = self.factor.value()
        return [vals[n] * c**n for n in range(lo, hi + 1)]

    def describe(self):
        d = self.base.describe()
        d["params"]["rescale"] = str(self.factor)
        return d


# --- the series type ----------------------------------------------------------


@dataclass(frozen=True)
class CoefficientSeries:
    coeffs: tuple
    radius: Radius
    provenance: str
    exact: bool = True
    polynomial: bool = False
    precision_bits: int = DEFAULT_PRECISION
    provider: Provider | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise SeriesError("truncation order must be at least 1")
        for n, b in enumerate(self.coeffs):
            if b < 0:
                raise SeriesError(f"coefficient {n} is negative ({b})")
        if not any(b > 0 for b in self.coeffs[1:]):
            raise SeriesError("series is constant up to its truncation order")

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def extendable(self) -> bool:
        return self.provider is not None and self.provider.polynomial_degree is None

    @property
    def degree(self) -> int | None:
        """Degree if the series is a declared polynomial."""
        if not self.polynomial:
            return None
        nz = [n for n, b in enumerate(self.coeffs) if b != 0]
        return nz[-1]

    def extended(self, N: int) -> "CoefficientSeries":
        if N <= self.N:
            return self._truncated(N)
        if self.provider is None:
            if self.polynomial:
                pad = (Fraction(0) if self.exact else mpfr(0),) * (N - self.N)
                return _replace(self, coeffs=self.coeffs + pad)
            raise SeriesError(f"series {self.provenance} has only {self.N} coefficients")
        if self.exact:
            coeffs = tuple(self.provider.exact_list(N))
        else:
            coeffs = tuple(self.provider.mp_list(N, self.precision_bits))
        return _replace(self, coeffs=coeffs)

    def _truncated(self, N):
        return _replace(self, coeffs=self.coeffs[: N + 1])

    def mp_coeffs(self, n_max: int, bits: int) -> list:
        """b_0..b_{n_max} as mpfr, extending through the provider if needed.

        Indices past a polynomial's degree are zero.  Raises if the data runs
        out and there is no provider.
        """
        if self.provider is not None:
            return self.provider.mp_list(n_max, bits)
        if n_max > self.N and not self.polynomial:
            raise SeriesError(f"series {self.provenance} has only {self.N} coefficients")
        with precision(bits):
            vals = [_to_mpfr(b) for b in self.coeffs[: n_max + 1]]
            vals += [mpfr(0)] * (n_max + 1 - len(vals))
        return vals

    def max_index(self) -> int | None:
        """Largest index with data, or None when the provider is unbounded."""
        if self.polynomial:
            return self.degree
        if self.extendable:
            return None
        return self.N

    def to_json(self) -> dict:
        if self.provider is not None and "rescale" not in self.provider.params:
            d = self.provider.describe()
            d["N"] = self.N
            return d
        return {
            "coeffs": [str(c) if isinstance(c, Fraction) else format(c, ".60g") for c in self.coeffs],
            "radius": str(self.radius),
            "polynomial": self.polynomial,
        }


def _replace(s: CoefficientSeries, **kw) -> CoefficientSeries:
    d = dict(coeffs=s.coeffs, radius=s.radius, provenance=s.provenance, exact=s.exact,
             polynomial=s.polynomial, precision_bits=s.precision_bits, provider=s.provider)
    d.update(kw)
    return CoefficientSeries(**d)


def from_coeffs(coeffs: Sequence, radius: Radius | str = "inf", provenance: str = "derived",
                polynomial: bool = False) -> CoefficientSeries:
    if not isinstance(radius, Radius):
        radius = Radius.parse(radius)
    vals = tuple(Fraction(c) for c in coeffs)
    return CoefficientSeries(vals, radius, provenance, polynomial=polynomial)


# --- exp / log ------------------------------------------------------------------


def exp_series(g: CoefficientSeries, exact: bool = True) -> CoefficientSeries:
    """Coefficients of f = e^g via n a_n = sum_k k b_k a_{n-k}."""
    N = g.N
    b = g.coeffs
    nonzero = [(k, k * b[k]) for k in range(1, N + 1) if b[k] != 0]
    if exact and g.exact:
        if b[0] != 0:
            raise NonzeroConstantTerm("exp of a series with b_0 != 0 is not rational; use exact=False")
        a = [Fraction(1)] + [Fraction(0)] * N
        for n in range(1, N + 1):
            s = Fraction(0)
            for k, kb in nonzero:
                if k > n:
                    break
                s += kb * a[n - k]
            a[n] = s / n
        return CoefficientSeries(tuple(a), g.radius, f"derived:exp({g.provenance})",
                                 polynomial=False, precision_bits=g.precision_bits)
    with precision(g.precision_bits):
        bm = g.mp_coeffs(N, g.precision_bits)
        nz = [(k, k * bm[k]) for k in range(1, N + 1) if bm[k] != 0]
        a = [gmpy2.exp(bm[0])] + [mpfr(0)] * N
        for n in range(1, N + 1):
            s = mpfr(0)
            for k, kb in nz:
                if k > n:
                    break
                s += kb * a[n - k]
            a[n] = s / n
    return CoefficientSeries(tuple(a), g.radius, f"derived:exp({g.provenance})", exact=False,
                             precision_bits=g.precision_bits)


def log_series(f: CoefficientSeries) -> CoefficientSeries:
    """Inverse of exp_series.  Requires a_0 = 1 in exact mode."""
    a = f.coeffs
    if a[0] == 0:
        raise SeriesError("log of a series with zero constant term")
    if not f.exact:
        raise SeriesError("log_series works on exact series")
    if a[0] != 1:
        raise NonzeroConstantTerm("log a_0 is not rational unless a_0 = 1")
    N = f.N
    b = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        s = n * a[n]
        for k in range(1, n):
            if b[k]:
                s -= k * b[k] * a[n - k]
        b[n] = s / n
    return CoefficientSeries(tuple(b), f.radius, f"derived:log({f.provenance})")


# --- set constructions ------------------------------------------------------------


@dataclass(frozen=True)
class OgfSpec:
    """Counts c_1..c_N of an unlabeled class; ``c[0]`` is c_1."""

    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        if any(x < 0 for x in self.c):
            raise SeriesError("ogf counts must be nonnegative")
        if not any(self.c):
            raise SeriesError("ogf counts are all zero")

    def __getitem__(self, j: int) -> Fraction:
        return self.c[j - 1] if 1 <= j <= len(self.c) else Fraction(0)

    @classmethod
    def from_function(cls, fn: Callable[[int], int], N: int) -> "OgfSpec":
        return cls(tuple(fn(j) for j in range(1, N + 1)))


@dataclass(frozen=True)
class NegativeCoefficient:
    index: int
    value: Fraction


def multiset_from_ogf(c: OgfSpec, N: int, radius: Radius | str = "1") -> CoefficientSeries:
    if not isinstance(radius, Radius):
        radius = Radius.parse(radius)
    b = [Fraction(0)] * (N + 1)
    for m in range(1, N + 1):
        b[m] = Fraction(sum(j * c[j] for j in nt.divisors(m)), m)
    return CoefficientSeries(tuple(b), radius, "derived:multiset")


def selection_from_ogf(c: OgfSpec, N: int, radius: Radius | str = "1"):
    if not isinstance(radius, Radius):
        radius = Radius.parse(radius)
    b = [Fraction(0)] * (N + 1)
    for m in range(1, N + 1):
        s = Fraction(0)
        for j in nt.divisors(m):
            k = m // j
            s += j * c[j] if k & 1 else -(j * c[j])
        b[m] = s / m
        if b[m] < 0:
            return NegativeCoefficient(m, b[m])
    return CoefficientSeries(tuple(b), radius, "derived:selection")


# --- builtin catalog ----------------------------------------------------------------


def _factorials():
    cache = [1]

    def fact(n):
        while len(cache) <= n:
            cache.append(cache[-1] * len(cache))
        return cache[n]

    return fact


_fact = _factorials()


def _log_power_over_factorial(shift: int):
    """mp value of n^(n+shift)/n! through logs (no huge integers)."""

    def mp_fn(n):
        if n == 0:
            return mpfr(0)
        return gmpy2.exp((n + shift) * gmpy2.log(mpfr(n)) - gmpy2.lgamma(mpfr(n + 1))[0])

    return mp_fn


def _power_over_factorial(shift: int):
    def fn(n):
        if n == 0:
            return Fraction(0)
        e = n + shift
        return Fraction(n**e, _fact(n)) if e >= 0 else Fraction(1, n**-e * _fact(n))

    return fn


def _divisor_block(c: int, odd_only: bool = False):
    def block(n_max):
        s = nt.sigma_table(n_max, c, odd_only)
        return [Fraction(0)] + [Fraction(s[n], n) for n in range(1, n_max + 1)]

    return block


def _square_block(n_max):
    out = [Fraction(0)] * (n_max + 1)
    j = 1
    while j * j <= n_max:
        sq = j * j
        for m in range(sq, n_max + 1, sq):
            out[m] += sq
        j += 1
    return [Fraction(0)] + [out[m] / m for m in range(1, n_max + 1)]


def _binary_value(m):
    if m == 0:
        return Fraction(0)
    return Fraction(2 ** (nt.two_adic_valuation(m) + 1) - 1, m)


def _as_fraction(x, what: str) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, TypeError):
        raise SeriesError(f"invalid {what}: {x!r}") from None


def _lists_gamma(params):
    gamma = _as_fraction(params.get("gamma", 1), "gamma")
    if gamma <= 0:
        raise SeriesError(f"gamma must be positive, got {gamma}")

    def block(n_max):
        out = [Fraction(0)] * (n_max + 1)
        if n_max >= 1:
            out[1] = Fraction(1)
        for n in range(2, n_max + 1):
            out[n] = out[n - 1] * (gamma + n - 2) / (n - 1)
        return out

    return TableProvider("lists_gamma", {"gamma": gamma}, Radius(Fraction(1)), block)


def _power_alpha(params):
    alpha = _as_fraction(params.get("alpha", 0), "alpha")
    if alpha.denominator == 1:
        k = int(alpha)
        fn = (lambda n: Fraction(n**k) if n else Fraction(0)) if k >= 0 else \
            (lambda n: Fraction(1, n**-k) if n else Fraction(0))
        return FormulaProvider("power_alpha", {"alpha": alpha}, Radius(Fraction(1)), fn)
    a = mpq(alpha)

    def mp_fn(n):
        return gmpy2.exp(mpfr(a) * gmpy2.log(mpfr(n))) if n else mpfr(0)

    return FormulaProvider("power_alpha", {"alpha": alpha}, Radius(Fraction(1)), mp_fn=mp_fn, exact=False)


def _colored(params):
    c = int(params.get("c", 1))
    if c < 0:
        raise SeriesError(f"colour exponent must be nonnegative, got {c}")
    return TableProvider("colored_partitions", {"c": c}, Radius(Fraction(1)), _divisor_block(c + 1))


def _negative_binomial(params):
    N = _as_fraction(params.get("N", 1), "N")
    if N <= 0:
        raise SeriesError("N must be positive")
    return FormulaProvider("negative_binomial", {"N": N}, Radius(Fraction(1)),
                           lambda n: N / n if n else Fraction(0))


def _monomial(params):
    k = int(params.get("k", 1))
    if k < 1:
        raise SeriesError("monomial degree must be at least 1")
    return PolynomialProvider("monomial", {"k": k}, [0] * k + [1])


def _polynomial(params):
    raw = params.get("coeffs")
    if isinstance(raw, str):
        raw = [x for x in raw.replace(";", " ").replace("|", " ").split()]
    if not raw:
        raise SeriesError("polynomial needs coeffs")
    return PolynomialProvider("polynomial", {"coeffs": " ".join(str(x) for x in raw)},
                              [_as_fraction(x, "coefficient") for x in raw])


ONE = Radius(Fraction(1))
INV_E = Radius(Fraction(1), -1)

CATALOG: dict[str, Callable[[dict], Provider]] = {
    "sets_of_sets": lambda p: FormulaProvider(
        "sets_of_sets", {}, Radius.inf(), lambda n: Fraction(1, _fact(n)) if n else Fraction(0),
        mp_fn=lambda n: gmpy2.exp(-gmpy2.lgamma(mpfr(n + 1))[0]) if n else mpfr(0)),
    "pointed_sets": lambda p: FormulaProvider(
        "pointed_sets", {}, Radius.inf(), lambda n: Fraction(n, _fact(n)),
        mp_fn=lambda n: gmpy2.exp(gmpy2.log(mpfr(n)) - gmpy2.lgamma(mpfr(n + 1))[0]) if n else mpfr(0)),
    "lists": lambda p: FormulaProvider("lists", {}, ONE, lambda n: Fraction(1) if n else Fraction(0)),
    "lists_gamma": _lists_gamma,
    "cycles": lambda p: FormulaProvider("cycles", {}, ONE, lambda n: Fraction(1, n) if n else Fraction(0)),
    "negative_binomial": _negative_binomial,
    "functions": lambda p: FormulaProvider("functions", {}, INV_E, _power_over_factorial(0),
                                           mp_fn=_log_power_over_factorial(0)),
    "rooted_trees": lambda p: FormulaProvider("rooted_trees", {}, INV_E, _power_over_factorial(-1),
                                              mp_fn=_log_power_over_factorial(-1)),
    "trees": lambda p: FormulaProvider("trees", {}, INV_E, _power_over_factorial(-2),
                                       mp_fn=_log_power_over_factorial(-2)),
    "power_alpha": _power_alpha,
    "partitions": lambda p: TableProvider("partitions", {}, ONE, _divisor_block(1)),
    "distinct_parts": lambda p: TableProvider("distinct_parts", {}, ONE, _divisor_block(1, odd_only=True)),
    "plane_partitions": lambda p: TableProvider("plane_partitions", {}, ONE, _divisor_block(2)),
    "colored_partitions": _colored,
    "square_partitions": lambda p: TableProvider("square_partitions", {}, ONE, _square_block),
    "binary_partitions": lambda p: FormulaProvider("binary_partitions", {}, ONE, _binary_value),
    "monomial": _monomial,
    "polynomial": _polynomial,
}


def builtin(name: str, params: dict | None = None, N: int = 64,
            precision_bits: int = DEFAULT_PRECISION) -> CoefficientSeries:
    try:
        factory = CATALOG[name]
    except KeyError:
        raise SeriesError(f"unknown builtin {name!r}; known: {sorted(CATALOG)}") from None
    provider = factory(params or {})
    if provider.polynomial_degree is not None:
        N = max(N, provider.polynomial_degree, 1)
    if provider.exact:
        coeffs = tuple(provider.exact_list(N))
    else:
        coeffs = tuple(provider.mp_list(N, precision_bits))
    tag = f"builtin:{name}"
    if provider.params:
        tag += ":" + ",".join(f"{k}={v}" for k, v in provider.params.items())
    return CoefficientSeries(coeffs, provider.radius, tag, exact=provider.exact,
                             polynomial=provider.polynomial_degree is not None,
                             precision_bits=precision_bits, provider=provider)


def rescale(g: CoefficientSeries, factor: Radius | str | Fraction) -> CoefficientSeries:
    """The series g(c z): coefficients b_n c^n, radius R / c."""
    if not isinstance(factor, Radius):
        factor = Radius.parse(factor)
    if g.provider is None:
        base = PolynomialProvider("data", {}, g.coeffs) if g.polynomial else \
            TableProvider("data", {}, g.radius, lambda n_max: _pad_exact(g, n_max))
        if not g.polynomial:
            base.exact = g.exact
    else:
        base = g.provider
    prov = RescaledProvider(base, factor)
    if prov.exact:
        coeffs = tuple(prov.exact_list(g.N))
    else:
        with precision(g.precision_bits):
            coeffs = tuple(prov.mp_block(0, g.N))
    return CoefficientSeries(coeffs, prov.radius, f"{g.provenance}@rescale({factor})", exact=prov.exact,
                             polynomial=g.polynomial, precision_bits=g.precision_bits,
                             provider=prov if g.provider is not None else None)


def _pad_exact(g, n_max):
    if n_max > g.N:
        raise SeriesError(f"series {g.provenance} has only {g.N} coefficients")
    return list(g.coeffs[: n_max + 1])


# --- parsing and files ---------------------------------------------------------------


def _parse_params(text: str) -> dict:
    params: dict[str, Any] = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise SeriesError(f"bad parameter {item!r}; expected key=value")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    return params


def parse_series_spec(spec: str, N: int = 64, precision_bits: int = DEFAULT_PRECISION,
                      radius: str | None = None) -> CoefficientSeries:
    """``builtin:name[:k=v,...]``, ``file:path`` or a bare path (.json/.csv)."""
    if spec.startswith("builtin:"):
        rest = spec[len("builtin:"):]
        name, _, ptxt = rest.partition(":")
        return builtin(name, _parse_params(ptxt), N, precision_bits)
    path = Path(spec[len("file:"):] if spec.startswith("file:") else spec)
    if path.suffix.lower() == ".csv":
        return load_series_csv(path, radius or "inf")
    return load_series_json(path, N, precision_bits)


def series_from_dict(d: dict, N: int = 64, precision_bits: int = DEFAULT_PRECISION) -> CoefficientSeries:
    if "name" in d:
        params = {k: v for k, v in (d.get("params") or {}).items()}
        return builtin(d["name"], params, int(d.get("N", N)), precision_bits)
    if "coeffs" not in d:
        raise SeriesError("series JSON needs either 'name' or 'coeffs'")
    return from_coeffs([_as_fraction(c, "coefficient") for c in d["coeffs"]],
                       Radius.parse(d.get("radius", "inf")), d.get("provenance", "file"),
                       polynomial=bool(d.get("polynomial", False)))


def load_series_json(path: str | Path, N: int = 64, precision_bits: int = DEFAULT_PRECISION):
    with open(path) as fh:
        d = json.load(fh)
    s = series_from_dict(d, N, precision_bits)
    if "coeffs" in d:
        s = _replace(s, provenance=f"file:{path}")
    return s


def load_series_csv(path: str | Path, radius: str = "inf", polynomial: bool = False):
    with open(path, newline="") as fh:
        rows = [r[0].strip() for r in csv.reader(fh) if r and r[0].strip()]
    return from_coeffs([_as_fraction(x, "coefficient") for x in rows], radius, f"file:{path}",
                       polynomial=polynomial)


def dump_series_json(g: CoefficientSeries, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(g.to_json(), fh, indent=2)
