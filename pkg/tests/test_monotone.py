"""Zoo construction, parsing, monotonicity checking, tails, influences."""

import time
from dataclasses import replace
from math import comb, log

import numpy as np
import pytest

from walshprime import (
    ConfigError,
    CubeVector,
    DEFAULT_ZOO_SPECS,
    default_zoo,
    influence_identity_check,
    materialize,
    monotonicity_check,
    parse_spec,
    tail_report,
    wht_forward,
)


def test_majority3_truth_table():
    f = materialize(parse_spec("majority", 3))
    assert f.values.tolist() == [0, 0, 0, 1, 0, 1, 1, 1]


def test_majority_even_n_is_strict():
    # n = 4: threshold ceil((4+1)/2) = 3 set bits, no ties broken upward
    f = materialize(parse_spec("majority", 4))
    assert f.values[0b0011] == 0.0
    assert f.values[0b0111] == 1.0
    assert float(f.values.sum()) == comb(4, 3) + comb(4, 4)


def test_dictator():
    f = materialize(parse_spec("dictator:j=1", 3))
    want = [(x >> 1) & 1 for x in range(8)]
    assert f.values.tolist() == want


def test_and_or():
    f_and = materialize(parse_spec("and_all", 4)).values
    f_or = materialize(parse_spec("or_all", 4)).values
    assert f_and.sum() == 1.0 and f_and[15] == 1.0
    assert f_or.sum() == 15.0 and f_or[0] == 0.0


def test_threshold_counts():
    f = materialize(parse_spec("threshold:t=2", 4)).values
    assert float(f.sum()) == comb(4, 2) + comb(4, 3) + comb(4, 4)


def test_tribes_structure():
    # n=8, w=4: two tribes; true iff bits 0-3 all set or bits 4-7 all set
    f = materialize(parse_spec("tribes:w=4", 8)).values
    assert f[0b00001111] == 1.0
    assert f[0b11110000] == 1.0
    assert f[0b11101110] == 0.0
    assert float(f.sum()) == 16 + 16 - 1  # inclusion-exclusion on 2 tribes


def test_tribes_leftover_bits_irrelevant():
    # n=10, w=4: bits 8 and 9 are idle
    f = materialize(parse_spec("tribes:w=4", 10)).values
    idx = np.arange(1 << 10)
    assert (f == f[idx & 0xFF]).all()


def test_recursive_majority3_level_two():
    f = materialize(parse_spec("recmaj3", 9)).values
    # two winning triples out of three
    x = 0b000_111_011
    assert f[x] == 1.0
    # one winning triple only
    y = 0b000_000_111
    assert f[y] == 0.0
    # balanced function
    assert float(f.sum()) == (1 << 9) / 2


def test_recursive_majority3_ignores_extra_bits():
    f = materialize(parse_spec("recmaj3", 5)).values  # tree on bits 0..2
    idx = np.arange(32)
    assert (f == f[idx & 0b111]).all()


def test_dnf_reproducible():
    a = materialize(parse_spec("dnf:m=8,w=4,seed=42", 10)).values
    b = materialize(parse_spec("dnf:m=8,w=4,seed=42", 10)).values
    assert (a == b).all()


def test_dnf_seed_changes_function():
    a = materialize(parse_spec("dnf:m=8,w=4,seed=1", 10)).values
    b = materialize(parse_spec("dnf:m=8,w=4,seed=2", 10)).values
    assert (a != b).any()


def test_dnf_default_seed_comes_from_parser():
    a = parse_spec("dnf:m=4,w=3", 8, default_seed=11)
    assert a.seed == 11
    b = parse_spec("dnf:m=4,w=3,seed=5", 8, default_seed=11)
    assert b.seed == 5


def test_dnf_is_monotone():
    f = materialize(parse_spec("dnf:m=8,w=4,seed=42", 12))
    assert monotonicity_check(f).monotone


def test_odd_slice_multiplies_by_bit0():
    plain = materialize(parse_spec("majority", 5)).values
    sliced = materialize(parse_spec("majority|odd", 5)).values
    idx = np.arange(32)
    assert (sliced == plain * (idx & 1)).all()


def test_parse_describe_round_trip():
    for text in DEFAULT_ZOO_SPECS:
        spec = parse_spec(text, 12)
        again = parse_spec(spec.describe(), 12)
        assert again == spec


def test_parse_aliases():
    assert parse_spec("maj", 5).family == "majority"
    assert parse_spec("dnf:m=2,w=2", 5).family == "random_monotone_dnf"
    assert parse_spec("recmaj3", 5).family == "recursive_majority3"


def test_parse_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_spec("parity", 5)
    with pytest.raises(ConfigError):
        parse_spec("tribes:w=banana", 5)
    with pytest.raises(ConfigError):
        parse_spec("tribes:q=4", 5)
    with pytest.raises(ConfigError):
        parse_spec("tribes", 5)  # missing width
    with pytest.raises(ConfigError):
        parse_spec("threshold:t=9", 5)  # above n
    with pytest.raises(ConfigError):
        parse_spec("dictator:j=5", 5)
    with pytest.raises(ConfigError):
        parse_spec("recmaj3", 2)  # no complete triple
    with pytest.raises(ConfigError):
        parse_spec("dnf:m=0,w=2", 5)


def test_default_zoo_complete():
    zoo = default_zoo(12)
    assert [spec.family for spec in zoo] == [
        "dictator",
        "and_all",
        "or_all",
        "majority",
        "threshold",
        "tribes",
        "recursive_majority3",
        "random_monotone_dnf",
    ]
    sliced = default_zoo(12, odd_slice=True)
    assert all(spec.odd_slice for spec in sliced)


def test_monotonicity_exhaustive_accepts_zoo():
    for spec in default_zoo(10):
        verdict = monotonicity_check(materialize(spec))
        assert verdict.monotone, spec.describe()
        assert verdict.edge is None
        assert verdict.checked == 10 * (1 << 9)


def test_monotonicity_finds_violation():
    # anti-dictator on one bit: f(0) = 1 > f(1) = 0
    f = CubeVector(1, np.array([1.0, 0.0]))
    verdict = monotonicity_check(f)
    assert not verdict.monotone
    assert verdict.edge == (0, 1)


def test_monotonicity_first_edge_is_reported():
    # violation planted on bit 2 only: x = 4 drops below x = 0
    values = np.zeros(8)
    values[0] = 1.0
    values[1] = 1.0
    values[5] = 1.0
    values[2] = 1.0
    values[3] = 1.0
    values[6] = 1.0
    values[7] = 1.0
    f = CubeVector(3, values)
    verdict = monotonicity_check(f)
    assert not verdict.monotone
    lo, hi = verdict.edge
    assert f.values[hi] < f.values[lo]


def test_monotonicity_sampled_mode():
    f = CubeVector(8, 1.0 - materialize(parse_spec("or_all", 8)).values)
    verdict = monotonicity_check(f, "sampled", samples=2000, seed=0)
    assert not verdict.monotone
    lo, hi = verdict.edge
    assert f.values[hi] < f.values[lo]
    ok = monotonicity_check(materialize(parse_spec("majority", 8)), "sampled", samples=2000)
    assert ok.monotone and ok.checked == 2000


def test_monotonicity_majority_n15_fast():
    start = time.monotonic()
    assert monotonicity_check(materialize(parse_spec("majority", 15))).monotone
    assert time.monotonic() - start < 1.0


def test_monotonicity_rejects_non_boolean():
    with pytest.raises(ValueError):
        monotonicity_check(CubeVector(2, np.array([0.0, 0.5, 0.0, 1.0])))
    with pytest.raises(ValueError):
        monotonicity_check(CubeVector(2, np.ones(4)), "bogus-mode")


def test_singleton_coefficients_nonpositive():
    for spec in default_zoo(10):
        s = wht_forward(materialize(spec))
        assert max(float(s.coeffs[1 << j]) for j in range(10)) <= 1e-15, spec.describe()


def test_influence_identity_dictator_exact():
    s = wht_forward(materialize(parse_spec("dictator:j=0", 6)))
    identity = influence_identity_check(s)
    assert identity.lhs == pytest.approx(0.25, abs=1e-15)
    assert identity.rhs == pytest.approx(0.25, abs=1e-15)


def test_influence_identity_majority3_exact():
    s = wht_forward(materialize(parse_spec("majority", 3)))
    identity = influence_identity_check(s)
    # level profile (1/4, 3/16, 0, 1/16): lhs = 3/16 + 3/16 = 3/8
    assert identity.lhs == pytest.approx(3 / 8, abs=1e-15)
    assert identity.rhs == pytest.approx(3 / 8, abs=1e-15)


def test_influence_identity_zoo():
    for spec in default_zoo(12):
        gap = influence_identity_check(wht_forward(materialize(spec))).gap
        assert abs(gap) < 1e-10, spec.describe()


def test_tail_dictator_zero():
    s = wht_forward(materialize(parse_spec("dictator:j=0", 4)))
    rep = tail_report(s, 1.0)  # cutoff = ceil(sqrt(4)) = 2 > 1
    assert rep.cutoff == 2
    assert rep.tail == 0.0


def test_tail_majority3_cutoff_one():
    s = wht_forward(materialize(parse_spec("majority", 3)))
    rep = tail_report(s, 0.5)  # ceil(0.5 * sqrt(3)) = 1
    assert rep.cutoff == 1
    assert rep.tail == pytest.approx(1 / 16, abs=1e-15)
    assert rep.bound == 0.5
    assert rep.total_influence_fw == pytest.approx(3 / 8, abs=1e-15)
    assert rep.degree1_sum == pytest.approx(3 / 4, abs=1e-15)


def test_tail_bound_zoo_all_K():
    for spec in default_zoo(12):
        s = wht_forward(materialize(spec))
        for K in (1.0, 2.0, 4.0):
            rep = tail_report(s, K)
            assert rep.tail <= rep.bound + 1e-10, (spec.describe(), K)


def test_tail_markov_consistency():
    # tail above level k is at most total_influence / k for every k
    s = wht_forward(materialize(parse_spec("majority", 10)))
    for k in range(1, 11):
        # nudge K down so K * sqrt(n) lands just below the integer k
        rep = tail_report(s, (k - 1e-6) / 10**0.5)
        assert rep.cutoff == k
        assert rep.tail <= rep.total_influence_fw / k + 1e-12


def test_tail_rejects_bad_K():
    s = wht_forward(materialize(parse_spec("majority", 3)))
    with pytest.raises(ValueError):
        tail_report(s, 0.0)


def test_materialize_respects_capacity():
    from walshprime import CapacityError

    spec = parse_spec("majority", 12)
    with pytest.raises(CapacityError):
        materialize(spec, max_n=10)
