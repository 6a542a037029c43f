"""The exact relaxation-cascade oracle for single-gap flips.

These tests freeze the four flip-distance laws as exact rationals and check
that they do not depend on the torus side, and that cascade outcome
distributions are genuine probability distributions.
"""

from fractions import Fraction

import pytest

from isingctrl.cascade import gap_flip_distribution, window_cascade

F = Fraction


@pytest.mark.parametrize("n_rows", [6, 8, 12])
def test_distance_one_gap_two(n_rows):
    # flip at distance 1 into a gap of width 2: stay with 1/4, close with 3/4
    assert gap_flip_distribution(n_rows, 2, 1) == {2: F(1, 4), 0: F(3, 4)}


@pytest.mark.parametrize("n_rows", [6, 8, 12])
@pytest.mark.parametrize("gap", [3, 4, 5])
def test_distance_one_wide_gap(n_rows, gap):
    # flip at distance 1 into a gap wider than 2: revert 1/3, shrink by one 2/3
    assert gap_flip_distribution(n_rows, gap, 1) == {gap: F(1, 3), gap - 1: F(2, 3)}


@pytest.mark.parametrize("n_rows", [6, 8, 12])
def test_distance_two_gap_three(n_rows):
    # flip at distance 2 into a gap of width 3: the three-way special row
    assert gap_flip_distribution(n_rows, 3, 2) == {
        3: F(7, 18),
        2: F(31, 144),
        0: F(19, 48),
    }


@pytest.mark.parametrize("n_rows", [6, 8, 12])
@pytest.mark.parametrize("gap", [4, 5, 6])
def test_distance_two_wide_gap(n_rows, gap):
    assert gap_flip_distribution(n_rows, gap, 2) == {
        gap: F(5, 9),
        gap - 1: F(7, 27),
        gap - 2: F(5, 27),
    }


def test_rows_sum_to_one_exactly():
    for gap, d in [(2, 1), (3, 1), (5, 1), (3, 2), (4, 2), (7, 2)]:
        dist = gap_flip_distribution(10, gap, d)
        assert sum(dist.values()) == F(1)
        assert all(0 < p <= 1 for p in dist.values())


def test_invalid_geometry_rejected():
    with pytest.raises(ValueError):
        gap_flip_distribution(8, 2, 2)  # distance 2 does not fit in a gap of 2
    with pytest.raises(ValueError):
        gap_flip_distribution(8, 4, 3)  # only distances 1 and 2 are modeled


def test_window_cascade_distribution_is_exact():
    # Raw window enumeration: one seeded column between two plus boundaries
    # at width 2 reproduces the 1/4-3/4 law in terms of filled cells.
    n_rows = 8
    dist = window_cascade(n_rows, 2, True, True, 0)
    assert sum(dist.values()) == F(1)
    # outcomes count fully filled window columns: revert (0) or close (2)
    assert dist == {0: F(1, 4), 2: F(3, 4)}
