"""Correlation reports, tail decompositions, and cross-size trends.

The central object is the exact Plancherel split of the normalized
pairing between a test function f and the smoothed table:

    2^-n <f, smoothed> = mean_term + low_term + high_term

with mean_term the product of the two empty-set coefficients, low_term
the coefficient pairing over 0 < |S| < cutoff, and high_term the rest
(cutoff = K * sqrt(n)).  Cauchy-Schwarz caps |high_term| by the square
root of f's spectral tail mass times the normalized l2 norm of the
smoothed table; for monotone f the tail mass is at most 1/(4K), which
is the quantitative content of the decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from math import sqrt
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .arithmetic import (
    VonMangoldtTable,
    pair_correlation_max,
    sieve_von_mangoldt,
)
from .cube import CubeVector, Spectrum, inner_product, popcounts, wht_forward
from .errors import DegenerateInputError
from .monotone import monotonicity_check, parse_spec, materialize
from .smoothing import smooth_von_mangoldt, smoothed_moments

# Above this dimension the exhaustive edge walk inside hypothesis
# verification gives way to seeded sampling.
EXHAUSTIVE_MONOTONICITY_MAX_N = 16

TREND_METRICS = ("low_level_mass", "l2_ratio", "pair_correlation_max", "theorem_ratio")


@dataclass(frozen=True)
class CorrelationReport:
    n: int
    description: str
    K: float
    mean_f: float
    sum_lambda_f: float  # unnormalized <Lambda, f>
    theorem_ratio: float  # sum_lambda_f / (2^n * mean_f)
    pairing_tilde: float  # normalized <smoothed, f>
    mean_term: float
    low_term: float
    high_term: float
    high_term_bound: float  # Cauchy-Schwarz cap on |high_term|
    f_tail_mass: float  # sum of f-coefficients^2 at levels >= cutoff
    smoothed_l2: float  # normalized l2 norm of the smoothed table
    pairing_lhs: float  # unnormalized <smoothed, f>
    pairing_rhs: float  # n * unnormalized <Lambda, f>
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class LowLevelMassReport:
    n: int
    n0: int
    mass: float  # sum of coeffs[S]^2 over 1 <= |S| <= n0, S != {bit 0}
    level_mass: tuple[float, ...]  # same sum split by level, levels 1..n0
    largest_coeff: float  # signed coefficient of largest magnitude in range
    largest_mask: int | None  # its subset mask, None when the range is empty


@dataclass(frozen=True)
class TrendTable:
    metric: str
    rows: tuple[tuple[int, float], ...]  # (n, value), ascending n
    flag: str  # "flat" | "increasing" | "decreasing" | "mixed"
    detail: str  # human-readable parameter summary


class CoefficientCheck(NamedTuple):
    label: str
    observed: float
    predicted: float
    max_abs_err: float  # worst deviation from `predicted` within the class


def correlation_report(
    f: CubeVector,
    table: VonMangoldtTable,
    smoothed: CubeVector,
    K: float = 4.0,
    *,
    description: str = "",
    f_hat: Spectrum | None = None,
    smoothed_hat: Spectrum | None = None,
    verify_hypotheses: bool = True,
    verify_seed: int = 0,
) -> CorrelationReport:
    """Pair one test function against the table and its smoothing.

    Spectra may be passed in to reuse transforms across calls; anything
    missing is computed here.  With verify_hypotheses on, failures of
    the theorem's hypotheses (0/1 values, odd support, monotonicity)
    are recorded in `warnings` rather than raised, so reports still
    come out for deliberately out-of-scope inputs.  A mean-zero f has
    no meaningful ratio and raises DegenerateInputError.
    """
    n = f.n
    if not (n == table.n == smoothed.n):
        raise ValueError("f, table, and smoothed must share one dimension")
    if not K > 0:
        raise ValueError(f"K must be positive, got {K}")
    mean_f = float(f.values.mean())
    if mean_f == 0.0:
        raise DegenerateInputError("f has mean zero; ratios are undefined")

    warnings: list[str] = []
    if verify_hypotheses:
        v = f.values
        if not np.logical_or(v == 0.0, v == 1.0).all():
            warnings.append("values outside {0,1}")
        else:
            even_mass = float(v[::2].sum())
            if even_mass != 0.0:
                warnings.append(f"support touches {int(even_mass)} even points")
            mode = "exhaustive" if n <= EXHAUSTIVE_MONOTONICITY_MAX_N else "sampled"
            verdict = monotonicity_check(f, mode, seed=verify_seed)
            if not verdict.monotone:
                warnings.append(f"not monotone, e.g. edge {verdict.edge}")

    sum_lambda_f = inner_product(table.vector, f).unnormalized
    pairing = inner_product(smoothed, f)

    if f_hat is None:
        f_hat = wht_forward(f)
    if smoothed_hat is None:
        smoothed_hat = wht_forward(smoothed)

    levels = popcounts(n)
    cutoff = K * sqrt(n)
    prods = f_hat.coeffs * smoothed_hat.coeffs
    high_sel = levels >= cutoff
    high_term = float(prods[high_sel].sum())
    low_term = float(prods[~high_sel].sum()) - float(prods[0])
    f_tail_mass = float((f_hat.coeffs[high_sel] ** 2).sum())
    smoothed_l2 = float(np.sqrt((smoothed_hat.coeffs**2).sum()))

    return CorrelationReport(
        n=n,
        description=description,
        K=K,
        mean_f=mean_f,
        sum_lambda_f=sum_lambda_f,
        theorem_ratio=sum_lambda_f / (f.size * mean_f),
        pairing_tilde=pairing.normalized,
        mean_term=float(prods[0]),
        low_term=low_term,
        high_term=high_term,
        high_term_bound=sqrt(f_tail_mass) * smoothed_l2,
        f_tail_mass=f_tail_mass,
        smoothed_l2=smoothed_l2,
        pairing_lhs=pairing.unnormalized,
        pairing_rhs=n * sum_lambda_f,
        warnings=tuple(warnings),
    )


def _masks_in_range(n: int, n0: int) -> Iterable[int]:
    # Subset masks with 1 <= |S| <= n0, excluding the lone bit-0 mask:
    # the table's parity bias concentrates there and would swamp the
    # remaining low-level structure.
    for k in range(1, n0 + 1):
        for combo in combinations(range(n), k):
            mask = 0
            for j in combo:
                mask |= 1 << j
            if mask != 1:
                yield mask


def low_level_mass(lam_hat: Spectrum, n0: int) -> LowLevelMassReport:
    """Squared-coefficient mass at levels 1..n0, bit-0 singleton excluded."""
    n = lam_hat.n
    if not 0 <= n0 <= n:
        raise ValueError(f"n0 must lie in [0, {n}], got {n0}")
    c = lam_hat.coeffs
    per_level = [0.0] * n0
    largest_coeff = 0.0
    largest_mask: int | None = None
    for mask in _masks_in_range(n, n0):
        value = float(c[mask])
        per_level[int(mask).bit_count() - 1] += value * value
        if largest_mask is None or abs(value) > abs(largest_coeff):
            largest_coeff = value
            largest_mask = mask
    return LowLevelMassReport(
        n=n,
        n0=n0,
        mass=float(sum(per_level)),
        level_mass=tuple(per_level),
        largest_coeff=largest_coeff,
        largest_mask=largest_mask,
    )


def classify_trend(values: list[float], rel_tol: float = 1e-9) -> str:
    """Label a sequence flat / increasing / decreasing / mixed, judging
    steps against rel_tol times the largest magnitude in the sequence."""
    if len(values) < 2:
        return "flat"
    scale = max(abs(v) for v in values) or 1.0
    steps = [b - a for a, b in zip(values, values[1:])]
    up = any(s > rel_tol * scale for s in steps)
    down = any(s < -rel_tol * scale for s in steps)
    if up and down:
        return "mixed"
    if up:
        return "increasing"
    if down:
        return "decreasing"
    return "flat"


def trend_table(
    metric: str,
    n_values: Iterable[int],
    *,
    n0: int = 2,
    zoo_spec: str | None = None,
    K: float = 4.0,
    table_provider: Callable[[int], VonMangoldtTable] | None = None,
) -> TrendTable:
    """Evaluate one scalar metric across cube sizes.

    table_provider lets callers reuse sieved tables (e.g. from the disk
    cache); by default each size is sieved on the spot.  The metric
    "theorem_ratio" additionally needs zoo_spec, which is materialized
    odd-sliced at every size.
    """
    if metric not in TREND_METRICS:
        raise ValueError(f"unknown metric {metric!r}, pick one of {TREND_METRICS}")
    if metric == "theorem_ratio" and not zoo_spec:
        raise ValueError("metric 'theorem_ratio' needs zoo_spec")
    provider = table_provider or (lambda n: sieve_von_mangoldt(n))
    sizes = sorted(set(int(n) for n in n_values))
    if not sizes:
        raise ValueError("n_values must be non-empty")
    detail = ""
    rows: list[tuple[int, float]] = []
    for n in sizes:
        table = provider(n)
        if metric == "low_level_mass":
            value = low_level_mass(wht_forward(table.vector), n0).mass
            detail = f"n0={n0}"
        elif metric == "l2_ratio":
            value = smoothed_moments(smooth_von_mangoldt(table)).l2_ratio
            detail = "l2/n of the smoothed table"
        elif metric == "pair_correlation_max":
            value = pair_correlation_max(table).ratio
            detail = "max over bit pairs"
        else:  # theorem_ratio
            spec = replace(parse_spec(zoo_spec, n), odd_slice=True)
            f = materialize(spec)
            report = correlation_report(
                f,
                table,
                smooth_von_mangoldt(table),
                K,
                description=spec.describe(),
                verify_hypotheses=False,
            )
            value = report.theorem_ratio
            detail = f"spec={spec.describe()}, K={K}"
        rows.append((n, value))
    return TrendTable(
        metric=metric,
        rows=tuple(rows),
        flag=classify_trend([v for _, v in rows]),
        detail=detail,
    )


def degree_pattern_checks(smoothed_hat: Spectrum) -> tuple[CoefficientCheck, ...]:
    """Observed-vs-predicted rows for the structured low coefficients of
    the smoothed spectrum: the bit-0 singleton tracks (3-n)/2, the other
    singletons 1/2, and the {0,j} doubletons -1/2."""
    n = smoothed_hat.n
    c = smoothed_hat.coeffs
    rows: list[CoefficientCheck] = []
    bit0 = float(c[1])
    rows.append(CoefficientCheck("singleton_bit0", bit0, (3 - n) / 2, abs(bit0 - (3 - n) / 2)))
    if n >= 2:
        others = np.array([c[1 << j] for j in range(1, n)])
        rows.append(
            CoefficientCheck(
                "singleton_other_mean",
                float(others.mean()),
                0.5,
                float(np.abs(others - 0.5).max()),
            )
        )
        with_bit0 = np.array([c[1 | (1 << j)] for j in range(1, n)])
        rows.append(
            CoefficientCheck(
                "doubleton_with_bit0_mean",
                float(with_bit0.mean()),
                -0.5,
                float(np.abs(with_bit0 + 0.5).max()),
            )
        )
    return tuple(rows)
