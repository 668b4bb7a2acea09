"""Bit-clearing mass redistribution of the von Mangoldt table.

The smoothed table places, for every x, the mass Lambda(x) on each of
the points obtained from x by clearing one set bit:

    smoothed[y] = sum over set bits j of (y + 2^j)  of  Lambda(y + 2^j)
                = sum_{j : y_j = 0} Lambda(y | 2^j).

Consequences used throughout:

  * total mass: sum_y smoothed[y] = sum_x Lambda(x) * popcount(x),
    exactly (every unit of mass is copied once per set bit);
  * the all-ones corner receives nothing, smoothed[2^n - 1] = 0;
  * nonnegativity is inherited from Lambda.

On the spectral side the operator acts level by level.  Writing c[S]
for the Walsh coefficients of the input and using this package's
conventions (forward transform carries 2^-n, set bit contributes -1),
the coefficients of the smoothed table are

    out[S] = (n/2 - |S|) * c[S]
             + 1/2 * sum_{j in S}     c[S minus j]
             - 1/2 * sum_{j not in S} c[S plus j].

`smoothed_spectrum_via_identity` evaluates that formula directly from
c, giving an O(N n) route to the smoothed spectrum that is independent
of the pointwise construction; the two routes agreeing to near machine
precision is one of the package's core cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .arithmetic import VonMangoldtTable
from .cube import CubeVector, Spectrum, popcounts


@dataclass(frozen=True, eq=False)
class SmoothedMoments:
    mean: float  # 2^-n * sum smoothed
    l1: float  # 2^-n * sum |smoothed|, equals mean by nonnegativity
    l2: float  # sqrt(2^-n * sum smoothed^2)
    l2_ratio: float  # l2 / n


class MeanConstantCheck(NamedTuple):
    mean: float
    residual_upper: float  # |mean - (n+1)/2|
    residual_lower: float  # |mean - (n-1)/2|
    supported: str  # "(n+1)/2" or "(n-1)/2", whichever residual is smaller


def smooth_von_mangoldt(table: VonMangoldtTable) -> CubeVector:
    """Pointwise construction, O(N n): one shifted accumulation per bit."""
    n = table.n
    src = table.values
    out = np.zeros(table.size, dtype=np.float64)
    for j in range(n):
        half = 1 << j
        # Axis layout (-1, 2, 2^j): the middle axis is bit j.  Rows with
        # the bit clear absorb the values of their bit-set partners.
        out.reshape(-1, 2, half)[:, 0, :] += src.reshape(-1, 2, half)[:, 1, :]
    return CubeVector(n, out)


def smoothed_spectrum_via_identity(lam_hat: Spectrum) -> Spectrum:
    """Spectral route: evaluate the level-coupling formula from the
    module docstring.  O(N n), never touches the pointwise table."""
    n = lam_hat.n
    c = lam_hat.coeffs
    out = (n / 2 - popcounts(n).astype(np.float64)) * c
    for j in range(n):
        half = 1 << j
        src = c.reshape(-1, 2, half)
        dst = out.reshape(-1, 2, half)
        # masks with bit j set gain half the coefficient of S minus j;
        # masks with bit j clear lose half the coefficient of S plus j.
        dst[:, 1, :] += 0.5 * src[:, 0, :]
        dst[:, 0, :] -= 0.5 * src[:, 1, :]
    return Spectrum(n, out)


def smoothed_moments(smoothed: CubeVector) -> SmoothedMoments:
    v = smoothed.values
    mean = float(v.mean())
    l1 = float(np.abs(v).mean())
    l2 = float(np.sqrt((v * v).mean()))
    return SmoothedMoments(mean=mean, l1=l1, l2=l2, l2_ratio=l2 / smoothed.n)


def mean_constant_check(smoothed: CubeVector) -> MeanConstantCheck:
    """Compare the smoothed mean against the two candidate constants
    (n+1)/2 and (n-1)/2 and name the better fit."""
    n = smoothed.n
    mean = float(smoothed.values.mean())
    upper = abs(mean - (n + 1) / 2)
    lower = abs(mean - (n - 1) / 2)
    supported = "(n+1)/2" if upper <= lower else "(n-1)/2"
    return MeanConstantCheck(mean, upper, lower, supported)
