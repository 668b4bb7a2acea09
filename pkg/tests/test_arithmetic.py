"""Sieve output against sympy and hand arithmetic; correlation sums."""

from math import log

import numpy as np
import pytest
import sympy

from walshprime import (
    CapacityError,
    chebyshev_psi,
    pair_correlation,
    pair_correlation_max,
    sieve_von_mangoldt,
)


def sympy_von_mangoldt(limit: int) -> np.ndarray:
    # Independent oracle: factorint from sympy decides prime powers.
    out = np.zeros(limit)
    for x in range(2, limit):
        factors = sympy.factorint(x)
        if len(factors) == 1:
            (p,) = factors.keys()
            out[x] = log(p)
    return out


def test_n3_exact_table():
    got = sieve_von_mangoldt(3).values
    want = np.array([0.0, 0.0, log(2), log(3), log(2), log(5), 0.0, log(7)])
    assert np.abs(got - want).max() < 1e-15


def test_n4_prime_powers():
    got = sieve_von_mangoldt(4).values
    assert got[8] == pytest.approx(log(2), abs=1e-15)  # 2^3
    assert got[9] == pytest.approx(log(3), abs=1e-15)  # 3^2
    assert got[12] == 0.0
    assert got[15] == 0.0  # 3 * 5
    assert got[13] == pytest.approx(log(13), abs=1e-15)


def test_positions_zero_and_one_are_zero():
    got = sieve_von_mangoldt(5).values
    assert got[0] == 0.0 and got[1] == 0.0


def test_matches_sympy_oracle():
    bits = 13
    got = sieve_von_mangoldt(bits).values
    want = sympy_von_mangoldt(1 << bits)
    assert ((got > 0) == (want > 0)).all()
    assert np.abs(got - want).max() < 1e-12


def test_segment_size_invariance():
    default = sieve_von_mangoldt(12).values
    tiny = sieve_von_mangoldt(12, segment_size=257).values
    assert (default == tiny).all()


def test_psi_hand_sum_u10():
    table = sieve_von_mangoldt(6)
    want = 3 * log(2) + 2 * log(3) + log(5) + log(7)  # 2,3,4,5,7,8,9
    assert chebyshev_psi(table, 10) == pytest.approx(want, abs=1e-12)


def test_psi_small_values():
    table = sieve_von_mangoldt(4)
    assert chebyshev_psi(table, 0) == 0.0
    assert chebyshev_psi(table, 1) == 0.0
    assert chebyshev_psi(table, 2) == pytest.approx(log(2), abs=1e-15)


def test_psi_prime_number_theorem_scale():
    table = sieve_von_mangoldt(16)
    ratio = chebyshev_psi(table, (1 << 16) - 1) / (1 << 16)
    assert 0.99 < ratio < 1.01


def test_psi_range_errors():
    table = sieve_von_mangoldt(4)
    with pytest.raises(ValueError):
        chebyshev_psi(table, 16)
    with pytest.raises(ValueError):
        chebyshev_psi(table, -1)


def test_pair_correlation_diagonal_n3():
    # d = 0 pairs every prime power with itself
    table = sieve_von_mangoldt(3)
    want = 2 * log(2) ** 2 + log(3) ** 2 + log(5) ** 2 + log(7) ** 2
    got = pair_correlation(table, 2, 2)
    assert got.total == pytest.approx(want, abs=1e-12)
    assert got.ratio == pytest.approx(want / 8, abs=1e-12)


def test_pair_correlation_shift_two_n3():
    # d = 2^2 - 2^1 = 2: surviving pairs (2,4), (3,5), (5,7)
    table = sieve_von_mangoldt(3)
    want = log(2) * log(2) + log(3) * log(5) + log(5) * log(7)
    assert pair_correlation(table, 1, 2).total == pytest.approx(want, abs=1e-12)


def test_pair_correlation_symmetry():
    table = sieve_von_mangoldt(10)
    for j, k in ((0, 1), (2, 7), (4, 9)):
        forward = pair_correlation(table, j, k).total
        backward = pair_correlation(table, k, j).total
        assert forward == backward  # exact: same pairs, opposite order


def test_pair_correlation_twin_shift_positive():
    # d = 2: twin prime pairs below 2^12 give a strictly positive sum
    table = sieve_von_mangoldt(12)
    assert pair_correlation(table, 1, 2).total > 0


def test_pair_correlation_bit_range():
    table = sieve_von_mangoldt(4)
    with pytest.raises(ValueError):
        pair_correlation(table, 0, 4)
    with pytest.raises(ValueError):
        pair_correlation(table, -1, 2)


def test_pair_correlation_max_finds_argmax():
    table = sieve_von_mangoldt(10)
    best = pair_correlation_max(table)
    assert best.j < best.k
    worst_manual = max(
        pair_correlation(table, j, k).ratio
        for j in range(10)
        for k in range(j + 1, 10)
    )
    assert best.ratio == pytest.approx(worst_manual, abs=0)


def test_capacity_checked_before_allocation():
    with pytest.raises(CapacityError):
        sieve_von_mangoldt(30)
    with pytest.raises(CapacityError):
        sieve_von_mangoldt(12, max_n=10)


def test_bad_segment_size():
    with pytest.raises(ValueError):
        sieve_von_mangoldt(8, segment_size=1)
