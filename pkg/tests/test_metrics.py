import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sarswarm.metrics import (
    COST_SETTINGS,
    CostModel,
    TimeConstant,
    UsageError,
    aggregate_tau,
    default_threshold,
    efficiency,
    time_constant,
)
from sarswarm.simulation import TrialRecord
from sarswarm.world import Strategy


def naive_tau(counts, threshold):
    for it, c in enumerate(counts):
        if c >= threshold:
            return it, False
    return len(counts) - 1, True


def random_monotone(rng, n, top):
    steps = rng.random(n) < rng.uniform(0.001, 0.2)
    return np.minimum(np.concatenate([[0], np.cumsum(steps)]), top)


def test_time_constant_matches_naive_scan_on_100_series():
    rng = np.random.default_rng(20240601)
    for _ in range(100):
        n = int(rng.integers(1, 3000))
        counts = random_monotone(rng, n, 250)
        rec = TrialRecord.from_counts(counts, stride=int(rng.integers(1, 50)), n_targets=250)
        for thr in (1, int(rng.integers(1, 251)), 158):
            want = naive_tau(counts, thr)
            got = time_constant(rec, thr)
            assert (got.iterations, got.censored) == want


def test_default_threshold():
    assert default_threshold(250) == 158
    assert default_threshold(1) == 1


def test_time_constant_examples():
    counts = np.zeros(15001, dtype=int)
    counts[4000:] = 158
    tc = time_constant(TrialRecord.from_counts(counts, n_targets=250), 158)
    assert tc.iterations == 4000 and not tc.censored and tc.seconds == pytest.approx(80)
    counts = np.minimum(np.arange(15001) // 100, 120)
    tc = time_constant(TrialRecord.from_counts(counts, n_targets=250), 158)
    assert tc.censored and tc.iterations == 15000
    with pytest.raises(UsageError):
        time_constant(TrialRecord.from_counts(counts, n_targets=250), 0)


@given(st.lists(st.booleans(), min_size=1, max_size=400), st.integers(1, 50), st.integers(1, 50))
def test_tau_monotone_in_threshold(steps, a, b):
    counts = np.concatenate([[0], np.cumsum(steps)])
    rec = TrialRecord.from_counts(counts, n_targets=60)
    lo, hi = min(a, b), max(a, b)
    assert time_constant(rec, lo).iterations <= time_constant(rec, hi).iterations


def test_aggregate_examples():
    s = aggregate_tau([TimeConstant(5000)] * 3)
    assert (s.mean_s, s.std_s, s.censored) == (100, 0, 0)
    s = aggregate_tau([TimeConstant(4000), TimeConstant(6000)])
    assert s.mean_s == pytest.approx(100) and s.std_s == pytest.approx(20)
    taus = [TimeConstant(5000)] * 9 + [TimeConstant(15000, censored=True)]
    s = aggregate_tau(taus)
    assert s.censored == 1 and s.mean_s == pytest.approx((9 * 100 + 300) / 10)
    with pytest.raises(UsageError):
        aggregate_tau([])


def test_efficiency_examples():
    assert efficiency(100, CostModel(7, 5), 25, 25) == pytest.approx(1 / 6000)
    assert efficiency(80, CostModel(1, 1), 50, 0) == pytest.approx(2.5e-4)
    with pytest.raises(UsageError):
        efficiency(0, CostModel(1, 1), 5, 5)
    with pytest.raises(UsageError):
        CostModel(0, 1)


def test_cost_settings():
    labels = {s: tuple(c.label() for c in COST_SETTINGS[s]) for s in Strategy}
    assert labels == {Strategy.S1: ("5:1", "7:5"), Strategy.S2: ("3:1", "6.5:5"), Strategy.S3: ("1:1", "6.5:5")}
    assert COST_SETTINGS[Strategy.S2][1].ratio == pytest.approx(1.3)


pos = st.floats(0.1, 1e4)


@given(pos, pos, st.integers(1, 50), st.integers(0, 50))
def test_efficiency_strictly_decreasing(tau, extra, n_r, n_s):
    c = CostModel(3, 1)
    e = efficiency(tau, c, n_r, n_s)
    assert efficiency(tau + extra, c, n_r, n_s) < e
    assert efficiency(tau, c, n_r + 1, n_s) < e
    assert efficiency(tau, c, n_r, n_s + 1) < e
    assert efficiency(tau, CostModel(3 + extra, 1), n_r, n_s) < e
    assert math.isfinite(e)
