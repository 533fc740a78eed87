"""Run configuration shared by the CLI and the experiment scripts."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields

from .admissibility import FitOptions, ReportOptions
from .family import TailPolicy
from .numbertheory import DEFAULT_MEMORY_BUDGET
from .trend import TrendRule

ENV_PREFIX = "KHINCHIN_"
_ENV_FIELDS = ("precision_bits", "memory_budget", "max_terms", "clt_max_n", "N")


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    N: int = 64
    n_fit: int = 1024
    window: tuple | None = None
    ks: tuple | None = None
    alpha: float | None = None
    arc_points: int = 512
    clt_max_n: int = 250_000
    tail_eps: float = 1e-30
    tail_K: int = 10
    max_terms: int = 1 << 18
    trend_tail_points: int = 5
    trend_ratio: float = 1e3
    fit_blocks: int = 16
    fit_stability_rel: float = 0.01
    fit_stability_abs: float = 0.1
    fit_spread_tol: float = 0.5
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    output_format: str = "json"

    def __post_init__(self):
        for name in ("window", "ks"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, tuple):
                object.__setattr__(self, name, tuple(v))
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"output_format must be json or csv, got {self.output_format!r}")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")

    def to_json(self) -> dict:
        d = asdict(self)
        for k in ("window", "ks"):
            if d[k] is not None:
                d[k] = list(d[k])
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def with_env(self, environ=None) -> "RunConfig":
        environ = os.environ if environ is None else environ
        d = self.to_json()
        for name in _ENV_FIELDS:
            key = ENV_PREFIX + name.upper()
            if key in environ:
                d[name] = int(environ[key])
        return RunConfig.from_json(d)

    def tail(self) -> TailPolicy:
        return TailPolicy(self.tail_eps, self.tail_K, self.max_terms)

    def trend(self) -> TrendRule:
        return TrendRule(self.trend_tail_points, self.trend_ratio)

    def report_options(self, diagnostics: bool = True) -> ReportOptions:
        return ReportOptions(
            n_fit=self.n_fit, window=self.window, ks=self.ks, alpha=self.alpha,
            diagnostics=diagnostics, arc_points=self.arc_points, clt_max_n=self.clt_max_n,
            fit=FitOptions(self.fit_blocks, self.fit_stability_rel, self.fit_stability_abs, self.fit_spread_tol),
            trend=self.trend())
