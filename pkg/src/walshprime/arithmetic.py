"""The von Mangoldt table on [0, 2^n) and its correlation sums.

Values: ln p at every prime power p^k in range, 0 elsewhere; positions
0 and 1 carry 0.  Natural logarithm throughout, so the mean of the
table over [0, 2^n) sits near 1 for sizeable n.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log
from typing import NamedTuple

import numpy as np

from .cube import CubeVector, check_dimension

DEFAULT_SEGMENT_SIZE = 1 << 20


@dataclass(frozen=True, eq=False)
class VonMangoldtTable:
    """Von Mangoldt values on the cube, wrapped for type safety."""

    vector: CubeVector

    @property
    def n(self) -> int:
        return self.vector.n

    @property
    def values(self) -> np.ndarray:
        return self.vector.values

    @property
    def size(self) -> int:
        return self.vector.size


class PairCorrelation(NamedTuple):
    total: float  # sum Lambda(x) * Lambda(x + d)
    ratio: float  # total / 2^n


class PairCorrelationMax(NamedTuple):
    ratio: float
    j: int
    k: int


def _base_primes(limit: int) -> np.ndarray:
    # Plain sieve of Eratosthenes up to limit inclusive.
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime)


def sieve_von_mangoldt(
    n: int,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    max_n: int | None = None,
) -> VonMangoldtTable:
    """Build the table by segmented sieve: O(N log log N), one pass of
    composite marking per segment, then a prime-power pass."""
    check_dimension(n, max_n=max_n)
    if segment_size < 2:
        raise ValueError(f"segment_size must be >= 2, got {segment_size}")
    size = 1 << n
    out = np.zeros(size, dtype=np.float64)
    base = _base_primes(isqrt(size - 1))
    for lo in range(0, size, segment_size):
        hi = min(lo + segment_size, size)
        composite = np.zeros(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                composite[start - lo :: p] = True
        survivors = np.flatnonzero(~composite) + lo
        survivors = survivors[survivors >= 2]
        out[survivors] = np.log(survivors)
    # Proper prime powers p^k, k >= 2, overwrite their slot with ln p.
    for p in base:
        p = int(p)
        pk = p * p
        while pk < size:
            out[pk] = log(p)
            pk *= p
    return VonMangoldtTable(CubeVector(n, out))


def chebyshev_psi(table: VonMangoldtTable, u: int) -> float:
    """Partial sum of the table up to and including u.  Needs u < 2^n."""
    if not 0 <= u < table.size:
        raise ValueError(f"u must lie in [0, {table.size}), got {u}")
    return float(table.values[: u + 1].sum())


def pair_correlation(table: VonMangoldtTable, j: int, k: int) -> PairCorrelation:
    """sum Lambda(x) * Lambda(x + d) with d = 2^k - 2^j, over every x
    keeping both arguments inside [1, 2^n)."""
    n = table.n
    for bit in (j, k):
        if not 0 <= bit < n:
            raise ValueError(f"bit index must lie in [0, {n}), got {bit}")
    v = table.values
    size = table.size
    d = (1 << k) - (1 << j)
    if d >= 0:
        a = v[1 : size - d]
        b = v[1 + d : size]
    else:
        a = v[1 - d : size]
        b = v[1 : size + d]
    total = float((a * b).sum())
    return PairCorrelation(total, total / size)


def pair_correlation_max(table: VonMangoldtTable) -> PairCorrelationMax:
    """Largest pair-correlation ratio over bit pairs j < k."""
    if table.n < 2:
        raise ValueError("pair_correlation_max needs n >= 2")
    best = PairCorrelationMax(-np.inf, 0, 0)
    for j in range(table.n):
        for k in range(j + 1, table.n):
            ratio = pair_correlation(table, j, k).ratio
            if ratio > best.ratio:
                best = PairCorrelationMax(ratio, j, k)
    return best
