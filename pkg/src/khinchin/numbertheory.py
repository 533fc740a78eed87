"""Exact divisor sums and exact counting oracles.

Everything here is integer or rational arithmetic; no floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

DEFAULT_MEMORY_BUDGET = 1 << 30  # bytes


class BudgetExceeded(MemoryError):
    pass


def divisors(m: int) -> list[int]:
    """Sorted divisors of m by trial division up to sqrt(m)."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    small, large = [], []
    j = 1
    while j * j <= m:
        if m % j == 0:
            small.append(j)
            if j * j != m:
                large.append(m // j)
        j += 1
    return small + large[::-1]


def two_adic_valuation(m: int) -> int:
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return (m & -m).bit_length() - 1


def sigma(m: int, c: int) -> int:
    return sum(d**c for d in divisors(m))


def sigma_odd(m: int, c: int) -> int:
    return sum(d**c for d in divisors(m) if d & 1)


def omega(m: int, c: int) -> Fraction:
    """Correction factor turning the odd divisor sum into the alternating sum.

    For c >= 1 this is ((2^c - 2) 2^(chi c) + 1) / (2^c - 1).  At c = 0 that
    expression is 0/0; its limit c -> 0 is 1 - chi, which is also what the
    alternating sum gives on powers of two.
    """
    chi = two_adic_valuation(m)
    if c == 0:
        return Fraction(1 - chi)
    q = 2**c
    return Fraction((q - 2) * 2 ** (chi * c) + 1, q - 1)


@dataclass(frozen=True)
class DivisorProfile:
    m: int
    c: int
    sigma: int
    sigma_odd: int
    chi: int
    omega: Fraction


def divisor_profile(m: int, c: int) -> DivisorProfile:
    if c < 0:
        raise ValueError(f"exponent c must be nonnegative, got {c}")
    ds = divisors(m)
    return DivisorProfile(
        m=m,
        c=c,
        sigma=sum(d**c for d in ds),
        sigma_odd=sum(d**c for d in ds if d & 1),
        chi=two_adic_valuation(m),
        omega=omega(m, c),
    )


def alternating_divisor_sum(m: int, c: int) -> int:
    """sum over factor pairs jk = m of j^c (-1)^(k+1), by direct enumeration."""
    total = 0
    for j in divisors(m):
        k = m // j
        total += j**c if k & 1 else -(j**c)
    return total


def alternating_closed_forms(m: int, c: int) -> tuple[Fraction, int]:
    """The two closed forms of the alternating sum: odd-sum times omega, and
    sigma_c(m) - 2 sigma_c(m/2)."""
    p = divisor_profile(m, c)
    half = sigma(m // 2, c) if m % 2 == 0 else 0
    return p.sigma_odd * p.omega, p.sigma - 2 * half


def sigma_table(limit: int, c: int, odd_only: bool = False) -> list[int]:
    """sigma_c(n) (or its odd-divisor restriction) for n = 0..limit by sieving."""
    out = [0] * (limit + 1)
    step = 2 if odd_only else 1
    for d in range(1, limit + 1, step):
        p = d**c
        for k in range(d, limit + 1, d):
            out[k] += p
    return out


# --- counting oracles -------------------------------------------------------


def _check_budget(n: int, log2_size: float, budget: int) -> None:
    need = (n + 1) * (log2_size / 8 + 32)
    if need > budget:
        raise BudgetExceeded(f"table for n={n} needs ~{need:.3g} bytes, budget {budget}")


def partition_table(n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> list[int]:
    """p(0..n) by the bounded-part (coin change) dynamic program."""
    _check_budget(n, 2.6 * math.sqrt(n + 1) / math.log(2), budget)
    p = [1] + [0] * n
    for part in range(1, n + 1):
        for k in range(part, n + 1):
            p[k] += p[k - part]
    return p


def distinct_partition_table(n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> list[int]:
    """q(0..n): each part used at most once."""
    _check_budget(n, 1.9 * math.sqrt(n + 1) / math.log(2), budget)
    q = [1] + [0] * n
    for part in range(1, n + 1):
        for k in range(n, part - 1, -1):
            q[k] += q[k - part]
    return q


def plane_partition_table(n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> list[int]:
    """Plane partitions of 0..n from the product of 1/(1-z^j)^j, one factor
    1/(1-z^j) applied j times."""
    _check_budget(n, 2.0 * (n + 1) ** (2 / 3) / math.log(2), budget)
    pl = [1] + [0] * n
    for part in range(1, n + 1):
        for _ in range(part):
            for k in range(part, n + 1):
                pl[k] += pl[k - part]
    return pl


def bell_table(n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> list[int]:
    """Bell numbers B_0..B_n via the Bell triangle."""
    _check_budget(n, (n + 1) * math.log2(n + 2), budget)
    bells = [1]
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        bells.append(row[0])
    return bells


def set_partitions(items: Sequence) -> list[list[list]]:
    """All set partitions of items, by brute force (small inputs only)."""
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in set_partitions(rest):
        out.append([[first]] + part)
        for i in range(len(part)):
            out.append(part[:i] + [[first] + part[i]] + part[i + 1:])
    return out


def assembly_counts(g, n: int) -> list[int]:
    """k! a_k for k = 0..n where f = exp(g); must be integers."""
    from .series import exp_series

    f = exp_series(g.extended(n) if g.N < n else g)
    out = []
    fact = 1
    for k in range(n + 1):
        if k:
            fact *= k
        v = f.coeffs[k] * fact
        if v.denominator != 1:
            raise ValueError(f"{k}! a_{k} = {v} is not an integer")
        out.append(int(v))
    return out


_TABLES: dict[str, Callable[..., list[int]]] = {
    "partitions": partition_table,
    "distinct_parts": distinct_partition_table,
    "plane_partitions": plane_partition_table,
    "bell": bell_table,
}


def exact_table(kind: str, n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> list[int]:
    try:
        fn = _TABLES[kind]
    except KeyError:
        raise ValueError(f"unknown counting kind {kind!r}; choose from {sorted(_TABLES)}") from None
    return fn(n, budget=budget)


def exact_count(kind: str, n: int, g=None, budget: int = DEFAULT_MEMORY_BUDGET) -> int:
    """Exact count of size-n objects.  kind='assembly' needs the series g."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if kind == "assembly":
        if g is None:
            raise ValueError("assembly counts need a series g")
        return assembly_counts(g, n)[n]
    return exact_table(kind, n, budget)[n]
