import pytest

from odoca.periodicity import CONFIRMATIONS, Periodicity, least_period, reduce_block


def test_pure_periodic_detected_with_zero_transient():
    seq = [0, 1, 2] * 8
    assert least_period(seq) == Periodicity(0, 3)


def test_transient_then_periodic():
    seq = [9, 9] + [1, 2] * 10
    assert least_period(seq) == Periodicity(2, 2)


def test_constant_sequence_is_period_one():
    assert least_period([7] * 8) == Periodicity(0, 1)


def test_needs_confirmations_plus_one_copies():
    block = list(range(5))
    assert least_period(block * CONFIRMATIONS) is None
    assert least_period(block * (CONFIRMATIONS + 1)) == Periodicity(0, 5)


def test_undersampled_long_period_returns_none():
    # 64 samples of a period-30 staircase; the trailing equal values must
    # not read as a long transient plus period 1
    seq = [(t % 30) // 5 for t in range(64)]
    assert least_period(seq) is None


def test_max_period_bound_respected():
    seq = [0, 1, 2, 3] * 10
    assert least_period(seq, max_period=3) is None
    assert least_period(seq, max_period=4) == Periodicity(0, 4)


def test_reports_least_not_just_any_period():
    seq = [0, 1] * 12
    assert least_period(seq) == Periodicity(0, 2)


@pytest.mark.parametrize(
    "block, reduced",
    [
        ((0, 1, 0, 1), (0, 1)),
        ((2, 2, 2), (2,)),
        ((0, 1, 1), (0, 1, 1)),
        ((5,), (5,)),
    ],
)
def test_reduce_block(block, reduced):
    assert reduce_block(block) == reduced


def test_reduce_block_rejects_empty():
    with pytest.raises(ValueError):
        reduce_block(())
