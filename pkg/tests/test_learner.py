import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordsearch.learner import OrderingError, PayoffTable


def test_single_sample_average():
    table = PayoffTable(4)
    table.record(0, 2, 5.0)
    assert table.average(2) == 5.0


def test_decayed_average_two_samples():
    table = PayoffTable(3, decay=0.5)
    table.record(0, 1, 3.0)
    table.record(1, 1, 7.0)
    assert table.average(1) == pytest.approx((0.5 * 3.0 + 7.0) / 1.5)


def test_decay_one_gives_plain_mean():
    table = PayoffTable(2, decay=1.0)
    for t, p in enumerate([1.0, 4.0, 10.0]):
        table.record(t, 0, p)
    assert table.average(0) == pytest.approx(5.0)


def test_out_of_order_timestep_raises():
    table = PayoffTable(2)
    table.record(3, 0, 1.0)
    with pytest.raises(OrderingError):
        table.record(2, 0, 1.0)


def test_equal_averages_give_uniform_distribution():
    table = PayoffTable(3)
    for m in range(3):
        table.record(0, m, 2.5)
    assert table.move_distribution(0.7) == pytest.approx([1 / 3] * 3)


def test_two_move_softmax_value():
    table = PayoffTable(2)
    table.record(0, 0, 1.0)
    table.record(0, 1, 0.0)
    p = table.move_distribution(0.2)
    e5 = math.exp(5.0)
    assert p[0] == pytest.approx(e5 / (e5 + 1.0))
    assert p[1] == pytest.approx(1.0 / (e5 + 1.0))
    assert p[0] == pytest.approx(0.99331, abs=1e-5)


def test_low_temperature_approaches_argmax():
    table = PayoffTable(3)
    for m, payoff in enumerate([0.2, 0.9, 0.5]):
        table.record(0, m, payoff)
    p = table.move_distribution(1e-4)
    assert p[1] > 0.9999
    # exact ties split evenly in the limit
    tied = PayoffTable(2)
    tied.record(0, 0, 1.0)
    tied.record(0, 1, 1.0)
    assert tied.move_distribution(1e-6) == pytest.approx([0.5, 0.5])


def test_unsampled_moves_get_mean_of_sampled():
    table = PayoffTable(3)
    table.record(0, 0, 2.0)
    table.record(0, 1, 4.0)
    p = table.move_distribution(1.0)
    # move 2 behaves as if its average were 3.0, the mean of (2, 4)
    expected = [math.exp(v - 4.0) for v in (2.0, 4.0, 3.0)]
    total = sum(expected)
    assert p == pytest.approx([e / total for e in expected])


def test_empty_table_is_uniform():
    assert PayoffTable(5).move_distribution(0.3) == pytest.approx([0.2] * 5)


@given(
    payoffs=st.lists(
        st.tuples(st.integers(0, 3), st.floats(-1e6, 1e6)), min_size=1, max_size=30
    ),
    t_learn=st.floats(1e-3, 100.0),
)
@settings(max_examples=200)
def test_distribution_normalized_and_nonnegative(payoffs, t_learn):
    table = PayoffTable(4, decay=0.9)
    for t, (move, payoff) in enumerate(payoffs):
        table.record(t, move, payoff)
    p = table.move_distribution(t_learn)
    assert all(x >= 0.0 for x in p)
    assert sum(p) == pytest.approx(1.0, abs=1e-9)
    assert all(math.isfinite(x) for x in p)


@given(
    payoffs=st.lists(
        st.tuples(st.integers(0, 2), st.floats(-100, 100)), min_size=3, max_size=20
    ),
    shift=st.floats(-1e5, 1e5),
)
@settings(max_examples=100)
def test_shifting_all_payoffs_preserves_distribution(payoffs, shift):
    plain, shifted = PayoffTable(3), PayoffTable(3)
    for t, (move, payoff) in enumerate(payoffs):
        plain.record(t, move, payoff)
        shifted.record(t, move, payoff + shift)
    p0 = plain.move_distribution(0.5)
    p1 = shifted.move_distribution(0.5)
    for a, b in zip(p0, p1):
        assert a == pytest.approx(b, abs=1e-9)


@given(
    samples=st.lists(
        st.tuples(st.integers(0, 9), st.integers(0, 2), st.floats(-50, 50)),
        min_size=1,
        max_size=25,
    ),
    decay=st.floats(0.05, 1.0),
)
@settings(max_examples=150)
def test_decay_matches_direct_weighting(samples, decay):
    # implementation's incremental decay == direct lambda^(T - t) weighting
    samples = sorted(samples, key=lambda s: s[0])
    table = PayoffTable(3, decay=decay)
    for t, move, payoff in samples:
        table.record(t, move, payoff)
    final_t = samples[-1][0]
    for m in range(3):
        num = sum(decay ** (final_t - t) * p for t, mv, p in samples if mv == m)
        den = sum(decay ** (final_t - t) for t, mv, p in samples if mv == m)
        if den == 0:
            assert table.average(m) is None
        else:
            assert table.average(m) == pytest.approx(num / den, rel=1e-12, abs=1e-12)
