"""Dense real functions on the Boolean cube and their Walsh spectra.

Integers x in [0, 2^n) are identified with points of {0,1}^n through the
binary expansion x = sum_j x_j * 2^j, and subset masks S the same way.
The character attached to S is

    w_S(x) = prod_{j in S} (1 - 2*x_j) = (-1)^popcount(x & S),

so a coordinate whose bit is SET contributes -1.  Normalization, fixed
here once for the whole package: the forward transform carries the full
2^-n factor,

    coeffs[S] = 2^-n * sum_x f(x) * w_S(x),

and the inverse carries none.  Many Walsh-Hadamard libraries put the
factor on the inverse instead.  Every sign statement downstream (the
degree-1 coefficients of a monotone 0/1 function are <= 0, the influence
identity, the tail bounds) depends on the convention above; do not
"fix" it to match an external library.

Vectors are float64 numpy arrays of length 2^n, treated as immutable
once wrapped: all operations allocate fresh output and never write to
their inputs, so wrapped values are safe to share across threads
read-only.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CapacityError

# One float64 vector at n = 26 occupies 512 MiB; larger dimensions need
# an explicit acknowledgment from the caller (max_n= / --max-memory).
DEFAULT_MAX_N = 26

MIN_N = 1


def check_dimension(n: int, max_n: int | None = None) -> None:
    """Validate a cube dimension before any 2^n allocation happens.

    Raises ValueError for a malformed n and CapacityError when n exceeds
    the cap (DEFAULT_MAX_N unless overridden).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"cube dimension must be an integer, got {n!r}")
    if n < MIN_N:
        raise ValueError(f"cube dimension must be >= {MIN_N}, got {n}")
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if n > cap:
        raise CapacityError(
            f"n={n} needs {8 * (1 << n) // 2**20} MiB per vector, over the "
            f"cap of n={cap}; raise the cap explicitly to proceed"
        )


def _coerce(n: int, values: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size != (1 << n):
        raise ValueError(f"{what} for n={n} must have shape ({1 << n},), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{what} contains non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class CubeVector:
    """A function {0,1}^n -> R stored densely in index order."""

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        check_dimension(self.n, max_n=self.n)  # structural check only, no cap here
        object.__setattr__(self, "values", _coerce(self.n, self.values, "values"))

    @property
    def size(self) -> int:
        return 1 << self.n


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Walsh coefficients of a CubeVector, indexed by subset mask."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        check_dimension(self.n, max_n=self.n)
        object.__setattr__(self, "coeffs", _coerce(self.n, self.coeffs, "coeffs"))

    @property
    def size(self) -> int:
        return 1 << self.n


@dataclass(frozen=True, eq=False)
class LevelProfile:
    """Spectral mass per level: mass[k] = sum of coeffs[S]^2 over |S| = k."""

    n: int
    mass: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.mass, dtype=np.float64)
        if arr.shape != (self.n + 1,):
            raise ValueError(f"level mass must have shape ({self.n + 1},)")
        object.__setattr__(self, "mass", arr)

    @property
    def total(self) -> float:
        return float(self.mass.sum())


class InnerProduct(NamedTuple):
    normalized: float  # 2^-n * sum_x f(x) g(x)
    unnormalized: float  # sum_x f(x) g(x)


@functools.lru_cache(maxsize=2)
def _popcounts_cached(n: int) -> np.ndarray:
    out = np.bitwise_count(np.arange(1 << n, dtype=np.uint32))
    out.setflags(write=False)
    return out


def popcounts(n: int) -> np.ndarray:
    """popcount of every index in [0, 2^n), as a read-only uint8 array."""
    check_dimension(n, max_n=n)
    return _popcounts_cached(n)


def _butterfly(a: np.ndarray) -> None:
    # In-place Walsh-Hadamard butterfly, no normalization.  Each stage
    # views the array as rows of 2h entries and replaces (left, right)
    # with (left + right, left - right); one N/2 scratch buffer is
    # reused across stages.
    scratch = np.empty(a.size // 2, dtype=np.float64)
    h = 1
    while h < a.size:
        view = a.reshape(-1, 2 * h)
        left = view[:, :h]
        right = view[:, h:]
        diff = scratch.reshape(-1, h)
        np.subtract(left, right, out=diff)
        np.add(left, right, out=left)
        right[:] = diff
        h *= 2


def wht_forward(f: CubeVector) -> Spectrum:
    """Walsh transform with the 2^-n factor.  O(N log N), does not mutate f."""
    out = f.values.copy()
    _butterfly(out)
    out /= f.size
    return Spectrum(f.n, out)


def wht_inverse(s: Spectrum) -> CubeVector:
    """Inverse transform, no normalization factor.  Does not mutate s."""
    out = s.coeffs.copy()
    _butterfly(out)
    return CubeVector(s.n, out)


def level_profile(s: Spectrum) -> LevelProfile:
    """Aggregate squared coefficients by subset size."""
    mass = np.bincount(popcounts(s.n), weights=s.coeffs**2, minlength=s.n + 1)
    return LevelProfile(s.n, mass)


def inner_product(f: CubeVector, g: CubeVector) -> InnerProduct:
    """Pointwise pairing of two cube vectors of the same dimension.

    The sum is taken with numpy's pairwise reduction (no BLAS), so the
    result is bit-reproducible across machines and thread counts.
    """
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    raw = float((f.values * g.values).sum())
    return InnerProduct(raw / f.size, raw)
