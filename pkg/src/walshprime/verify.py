"""Self-contained verification suites behind `walshprime verify`.

Each check recomputes an expected value through a route independent of
the code under test (direct O(N^2) summation, trial division, hand
tables, brute-force subset enumeration) and compares at a stated
tolerance.  "quick" keeps every check under a few seconds; "full"
rescales the same checks to the sizes where the package actually runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import ceil, log, sqrt
from typing import Callable

import numpy as np

from . import analysis, arithmetic, cache, cube, monotone, smoothing

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class VerificationReport:
    level: str
    results: tuple[CheckResult, ...]

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(r for r in self.results if not r.passed)

    @property
    def passed(self) -> bool:
        return not self.failures


def _direct_spectrum(values: np.ndarray) -> np.ndarray:
    # O(N^2) reference transform from the definition: sign matrix by
    # popcount parity of x & S, then a plain matrix product.
    size = values.size
    idx = np.arange(size, dtype=np.uint32)
    parity = np.bitwise_count(idx[:, None] & idx[None, :]) & 1
    signs = 1.0 - 2.0 * parity.astype(np.float64)
    return signs @ np.asarray(values, dtype=np.float64) / size


def _trial_division_table(limit: int) -> np.ndarray:
    # Independent route to the von Mangoldt values below `limit`:
    # smallest prime factor by trial division, then a prime-power test.
    out = np.zeros(limit, dtype=np.float64)
    for x in range(2, limit):
        d = 2
        while d * d <= x and x % d != 0:
            d += 1
        p = d if d * d <= x else x
        out[x] = log(p) if _is_power_of(x, p) else 0.0
    return out


def _is_power_of(x: int, p: int) -> bool:
    if p < 2:
        return False
    while x % p == 0:
        x //= p
    return x == 1


def _check_transform_direct(level: str) -> tuple[bool, str]:
    top = 8 if level == "quick" else 10
    rng = np.random.default_rng(2024)
    worst = 0.0
    for n in range(1, top + 1):
        for _ in range(5):
            f = cube.CubeVector(n, rng.standard_normal(1 << n))
            got = cube.wht_forward(f).coeffs
            want = _direct_spectrum(f.values)
            worst = max(worst, float(np.abs(got - want).max()))
    ok = worst < 1e-12
    return ok, f"max |fast - direct| = {worst:.3e} over n <= {top} (tol 1e-12)"


def _check_transform_roundtrip(level: str) -> tuple[bool, str]:
    n = 12 if level == "quick" else 20
    rng = np.random.default_rng(7)
    f = cube.CubeVector(n, rng.standard_normal(1 << n))
    back = cube.wht_inverse(cube.wht_forward(f)).values
    scale = float(np.abs(f.values).max())
    err = float(np.abs(back - f.values).max()) / scale
    ok = err < 1e-10
    return ok, f"roundtrip rel err {err:.3e} at n={n} (tol 1e-10)"


def _check_parseval(level: str) -> tuple[bool, str]:
    n = 10
    rng = np.random.default_rng(11)
    f = cube.CubeVector(n, rng.standard_normal(1 << n))
    g = cube.CubeVector(n, rng.standard_normal(1 << n))
    lhs = cube.inner_product(f, g).normalized
    rhs = float((cube.wht_forward(f).coeffs * cube.wht_forward(g).coeffs).sum())
    err = abs(lhs - rhs)
    ok = err < 1e-10
    return ok, f"|<f,g>_norm - <fhat,ghat>| = {err:.3e} at n={n} (tol 1e-10)"


def _check_sieve_trial_division(level: str) -> tuple[bool, str]:
    bits = 12 if level == "quick" else 16
    table = arithmetic.sieve_von_mangoldt(bits)
    want = _trial_division_table(1 << bits)
    support_match = bool(((table.values > 0) == (want > 0)).all())
    err = float(np.abs(table.values - want).max())
    ok = support_match and err < 1e-12
    return ok, f"support match {support_match}, max err {err:.3e} below 2^{bits} (tol 1e-12)"


def _check_psi(level: str) -> tuple[bool, str]:
    bits = 16 if level == "quick" else 20
    table = arithmetic.sieve_von_mangoldt(bits)
    hand = 3 * log(2) + 2 * log(3) + log(5) + log(7)  # x <= 10: 2,3,4,5,7,8,9
    err10 = abs(arithmetic.chebyshev_psi(table, 10) - hand)
    ratio = arithmetic.chebyshev_psi(table, (1 << bits) - 1) / (1 << bits)
    ok = err10 < 1e-12 and 0.99 < ratio < 1.01
    return ok, f"psi(10) err {err10:.2e}, psi(2^{bits})/2^{bits} = {ratio:.5f} (band 0.99..1.01)"


def _check_pair_correlation_symmetry(level: str) -> tuple[bool, str]:
    table = arithmetic.sieve_von_mangoldt(12)
    worst = 0.0
    for j, k in ((0, 5), (3, 7), (2, 11)):
        a = arithmetic.pair_correlation(table, j, k).total
        b = arithmetic.pair_correlation(table, k, j).total
        worst = max(worst, abs(a - b))
    ok = worst == 0.0
    return ok, f"max |corr(j,k) - corr(k,j)| = {worst} at n=12 (exact)"


def _check_smoothed_hand_table(level: str) -> tuple[bool, str]:
    table = arithmetic.sieve_von_mangoldt(3)
    got = smoothing.smooth_von_mangoldt(table).values
    want = np.array(
        [
            2 * log(2),
            log(3) + log(5),
            log(3),
            log(7),
            log(5),
            log(7),
            log(7),
            0.0,
        ]
    )
    err = float(np.abs(got - want).max())
    ok = err < 1e-12
    return ok, f"hand table max err {err:.3e} at n=3 (tol 1e-12)"


def _check_smoothed_mass(level: str) -> tuple[bool, str]:
    n = 12 if level == "quick" else 18
    table = arithmetic.sieve_von_mangoldt(n)
    lhs = float(smoothing.smooth_von_mangoldt(table).values.sum())
    rhs = float((table.values * cube.popcounts(n)).sum())
    err = abs(lhs - rhs) / rhs
    ok = err < 1e-9
    return ok, f"mass identity rel err {err:.3e} at n={n} (tol 1e-9)"


def _check_spectrum_identity(level: str) -> tuple[bool, str]:
    n = 10 if level == "quick" else 12
    table = arithmetic.sieve_von_mangoldt(n)
    via_table = cube.wht_forward(smoothing.smooth_von_mangoldt(table)).coeffs
    via_identity = smoothing.smoothed_spectrum_via_identity(
        cube.wht_forward(table.vector)
    ).coeffs
    err = float(np.abs(via_table - via_identity).max())
    ok = err < 1e-9
    return ok, f"two spectrum routes differ by {err:.3e} at n={n} (tol 1e-9)"


def _zoo_spectra(n: int) -> list[tuple[str, cube.Spectrum]]:
    out = []
    for spec in monotone.default_zoo(n):
        f = monotone.materialize(spec)
        out.append((spec.describe(), cube.wht_forward(f)))
    return out


def _check_zoo_monotone_and_signs(level: str) -> tuple[bool, str]:
    n = 10 if level == "quick" else 12
    bad: list[str] = []
    for spec in monotone.default_zoo(n):
        f = monotone.materialize(spec)
        if not monotone.monotonicity_check(f).monotone:
            bad.append(f"{spec.describe()} not monotone")
        s = cube.wht_forward(f)
        worst = max(float(s.coeffs[1 << j]) for j in range(n))
        if worst > 1e-15:
            bad.append(f"{spec.describe()} has positive singleton {worst:.2e}")
    ok = not bad
    return ok, "; ".join(bad) if bad else f"all {len(monotone.DEFAULT_ZOO_SPECS)} members monotone with nonpositive singletons at n={n}"


def _check_zoo_influence_identity(level: str) -> tuple[bool, str]:
    n = 10 if level == "quick" else 12
    worst = 0.0
    for _, s in _zoo_spectra(n):
        worst = max(worst, abs(monotone.influence_identity_check(s).gap))
    ok = worst < 1e-10
    return ok, f"max influence-identity gap {worst:.3e} at n={n} (tol 1e-10)"


def _check_zoo_tails(level: str) -> tuple[bool, str]:
    sizes = (12,) if level == "quick" else (12, 16, 20)
    worst_excess = -np.inf
    for n in sizes:
        for _, s in _zoo_spectra(n):
            for K in (1.0, 2.0, 4.0):
                rep = monotone.tail_report(s, K)
                worst_excess = max(worst_excess, rep.tail - rep.bound)
    ok = worst_excess <= 1e-10
    return ok, f"max (tail - 1/(4K)) = {worst_excess:.3e} over n in {sizes} (tol 1e-10)"


def _check_zoo_pairing_inequality(level: str) -> tuple[bool, str]:
    sizes = (12,) if level == "quick" else (16, 20)
    worst = -np.inf
    for n in sizes:
        table = arithmetic.sieve_von_mangoldt(n)
        smoothed = smoothing.smooth_von_mangoldt(table)
        smoothed_hat = cube.wht_forward(smoothed)
        for spec in monotone.default_zoo(n, odd_slice=True):
            f = monotone.materialize(spec)
            if float(f.values.mean()) == 0.0:
                continue
            rep = analysis.correlation_report(
                f, table, smoothed, smoothed_hat=smoothed_hat, verify_hypotheses=False
            )
            worst = max(worst, rep.pairing_lhs - rep.pairing_rhs)
    ok = worst <= 1e-9
    return ok, f"max (lhs - n*<Lambda,f>) = {worst:.3e} over n in {sizes}"


def _check_zoo_decomposition(level: str) -> tuple[bool, str]:
    sizes = (12,) if level == "quick" else (16, 20)
    worst_resid = 0.0
    worst_cs = -np.inf
    for n in sizes:
        table = arithmetic.sieve_von_mangoldt(n)
        smoothed = smoothing.smooth_von_mangoldt(table)
        smoothed_hat = cube.wht_forward(smoothed)
        for spec in monotone.default_zoo(n):
            f = monotone.materialize(spec)
            rep = analysis.correlation_report(
                f, table, smoothed, smoothed_hat=smoothed_hat, verify_hypotheses=False
            )
            resid = abs(rep.pairing_tilde - (rep.mean_term + rep.low_term + rep.high_term))
            # scale floor of 1 keeps the ratio meaningful when the
            # pairing itself vanishes (zoo members missing the corner)
            scale = max(
                abs(rep.pairing_tilde),
                abs(rep.mean_term) + abs(rep.low_term) + abs(rep.high_term),
                1.0,
            )
            worst_resid = max(worst_resid, resid / scale)
            worst_cs = max(worst_cs, abs(rep.high_term) - rep.high_term_bound)
    ok = worst_resid < 1e-9 and worst_cs <= 1e-12
    return ok, (
        f"decomposition rel resid {worst_resid:.3e} (tol 1e-9), "
        f"max |high| - bound = {worst_cs:.3e} over n in {sizes}"
    )


def _check_theorem_ratio(level: str) -> tuple[bool, str]:
    n = 14 if level == "quick" else 20
    table = arithmetic.sieve_von_mangoldt(n)
    smoothed = smoothing.smooth_von_mangoldt(table)
    smoothed_hat = cube.wht_forward(smoothed)
    ratios: list[float] = []
    for spec in monotone.default_zoo(n, odd_slice=True):
        f = monotone.materialize(spec)
        if float(f.values.mean()) < 0.05:
            continue
        rep = analysis.correlation_report(
            f, table, smoothed, smoothed_hat=smoothed_hat, verify_hypotheses=False
        )
        ratios.append(rep.theorem_ratio)
    ok = bool(ratios) and min(ratios) >= 0.9
    return ok, f"min ratio {min(ratios):.4f} over {len(ratios)} members at n={n} (floor 0.9)"


def _check_cache_roundtrip(level: str) -> tuple[bool, str]:
    import tempfile as _tempfile
    from pathlib import Path

    rng = np.random.default_rng(3)
    vec = cube.CubeVector(8, rng.standard_normal(256))
    with _tempfile.TemporaryDirectory() as tmp:
        path = cache.default_cache_path(Path(tmp), 8)
        cache.write_vector(path, vec)
        back = cache.read_vector(path)
        exact = bool((back.values == vec.values).all())
        blob = bytearray(path.read_bytes())
        blob[40] ^= 0xFF  # flip one payload byte
        path.write_bytes(bytes(blob))
        try:
            cache.read_vector(path)
            caught = False
        except cache.CacheFormatError:
            caught = True
    ok = exact and caught
    return ok, f"roundtrip exact {exact}, corruption detected {caught}"


def _check_low_level_mass(level: str) -> tuple[bool, str]:
    n, n0 = 8, 2
    table = arithmetic.sieve_von_mangoldt(n)
    lam_hat = cube.wht_forward(table.vector)
    rep = analysis.low_level_mass(lam_hat, n0)
    direct = 0.0
    for mask in range(1, 1 << n):
        k = mask.bit_count()
        if 1 <= k <= n0 and mask != 1:
            direct += float(lam_hat.coeffs[mask]) ** 2
    err = abs(rep.mass - direct)
    ok = err < 1e-12
    return ok, f"subset-enumeration err {err:.3e} at n={n}, n0={n0} (tol 1e-12)"


_CHECKS: tuple[tuple[str, Callable[[str], tuple[bool, str]]], ...] = (
    ("transform_vs_direct", _check_transform_direct),
    ("transform_roundtrip", _check_transform_roundtrip),
    ("parseval_pairing", _check_parseval),
    ("sieve_vs_trial_division", _check_sieve_trial_division),
    ("chebyshev_psi_scale", _check_psi),
    ("pair_correlation_symmetry", _check_pair_correlation_symmetry),
    ("smoothed_hand_table", _check_smoothed_hand_table),
    ("smoothed_mass_identity", _check_smoothed_mass),
    ("smoothed_spectrum_identity", _check_spectrum_identity),
    ("zoo_monotone_signs", _check_zoo_monotone_and_signs),
    ("zoo_influence_identity", _check_zoo_influence_identity),
    ("zoo_tail_bounds", _check_zoo_tails),
    ("zoo_pairing_inequality", _check_zoo_pairing_inequality),
    ("zoo_decomposition", _check_zoo_decomposition),
    ("theorem_ratio_floor", _check_theorem_ratio),
    ("cache_roundtrip", _check_cache_roundtrip),
    ("low_level_mass_enumeration", _check_low_level_mass),
)


def run_verification(
    level: str = "quick",
    *,
    progress: Callable[[CheckResult], None] | None = None,
) -> VerificationReport:
    """Run every check at the given level; never raises on check
    failure, only on an unknown level."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    results: list[CheckResult] = []
    for name, fn in _CHECKS:
        start = time.monotonic()
        try:
            ok, detail = fn(level)
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        result = CheckResult(name, ok, detail, time.monotonic() - start)
        results.append(result)
        if progress is not None:
            progress(result)
    return VerificationReport(level, tuple(results))
