"""Artifact-wide rule for reading "tends to 0" / "tends to infinity" off a
finite grid of samples."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class TrendRule:
    tail_points: int = 5
    ratio: float = 1e3


@dataclass(frozen=True)
class Trend:
    values: tuple
    verdict: str  # to_zero | to_infinity | decreasing | increasing | inconclusive
    final_over_initial: float | None
    strictly_decreasing: bool
    strictly_increasing: bool
    notes: tuple = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "values": [_num(v) for v in self.values],
            "verdict": self.verdict,
            "final_over_initial": _num(self.final_over_initial),
            "strictly_decreasing": self.strictly_decreasing,
            "strictly_increasing": self.strictly_increasing,
        }


def _num(v):
    if v is None:
        return None
    f = float(v)
    if f != f or f in (float("inf"), float("-inf")):
        return str(f)
    return f


def classify(values, rule: TrendRule = TrendRule(), signed: bool = False,
             log_values: bool = False) -> Trend:
    """Classify a sequence sampled along an approach grid.

    Magnitudes are compared unless ``signed``; "to_zero" needs the last
    ``tail_points`` monotone decreasing and final/initial below 1/ratio,
    "to_infinity" is the mirror image.  Monotone sequences that miss the
    ratio are "decreasing"/"increasing".  With ``log_values`` the inputs are
    natural logs of the quantity (used when it underflows).
    """
    vals = [float(v) for v in values]
    mags = vals if (signed or log_values) else [abs(v) for v in vals]
    n = len(mags)
    dec = all(b < a for a, b in zip(mags, mags[1:]))
    inc = all(b > a for a, b in zip(mags, mags[1:]))
    tail = mags[-rule.tail_points:] if n >= rule.tail_points else mags
    tail_dec = n >= 2 and all(b < a for a, b in zip(tail, tail[1:]))
    tail_inc = n >= 2 and all(b > a for a, b in zip(tail, tail[1:]))
    ratio = None
    if log_values and n:
        diff = mags[-1] - mags[0]
        ratio = math.exp(min(diff, 700.0)) if diff == diff else None
    elif n and mags[0] != 0:
        ratio = mags[-1] / mags[0]
    verdict = "inconclusive"
    if tail_dec:
        if (ratio is not None and ratio < 1 / rule.ratio) or (mags[-1] == 0 and not log_values):
            verdict = "to_zero"
        else:
            verdict = "decreasing"
    elif tail_inc:
        verdict = "to_infinity" if ratio is not None and ratio > rule.ratio else "increasing"
    elif n and not log_values and all(m == 0 for m in mags):
        verdict = "to_zero"
    return Trend(tuple(vals), verdict, ratio, dec, inc)
