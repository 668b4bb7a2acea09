"""Shared fixtures and test-side oracles.

The oracles here recompute expected values through routes independent
of the package internals: direct O(N^2) transform from the character
definition, sympy's prime machinery for the sieve, and brute-force
subset enumeration.  They exist so that tests never trust the code
they check.
"""

from __future__ import annotations

import numpy as np
import pytest

from walshprime import sieve_von_mangoldt, smooth_von_mangoldt, wht_forward


def direct_spectrum(values: np.ndarray) -> np.ndarray:
    """O(N^2) transform straight from the definition: the (x, S) sign
    is -1 to the popcount of x & S, forward carries 1/N."""
    arr = np.asarray(values, dtype=np.float64)
    idx = np.arange(arr.size, dtype=np.uint32)
    parity = np.bitwise_count(idx[None, :] & idx[:, None]) & 1
    signs = 1.0 - 2.0 * parity.astype(np.float64)
    # row S, column x: sum_x f(x) sign(x, S)
    return signs @ arr / arr.size


def popcount_array(size: int) -> np.ndarray:
    return np.bitwise_count(np.arange(size, dtype=np.uint64))


@pytest.fixture(scope="session")
def table_cache():
    """Memoized sieve tables shared across the whole session."""
    cache: dict[int, object] = {}

    def get(n: int):
        if n not in cache:
            cache[n] = sieve_von_mangoldt(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def smoothed_cache(table_cache):
    cache: dict[int, object] = {}

    def get(n: int):
        if n not in cache:
            cache[n] = smooth_von_mangoldt(table_cache(n))
        return cache[n]

    return get


@pytest.fixture(scope="session")
def lam_hat_cache(table_cache):
    cache: dict[int, object] = {}

    def get(n: int):
        if n not in cache:
            cache[n] = wht_forward(table_cache(n).vector)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def smoothed_hat_cache(smoothed_cache):
    cache: dict[int, object] = {}

    def get(n: int):
        if n not in cache:
            cache[n] = wht_forward(smoothed_cache(n))
        return cache[n]

    return get
