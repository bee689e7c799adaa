import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circtrace.cyclicstats import (
    StatIndex,
    counterexample_classes,
    matched_order,
    min_distinguishing_stat,
    shifted_stat,
    stat,
    stats_equal_up_to,
    symmetry_period,
    verify_characterization,
)
from circtrace.errors import ModulusMismatch
from circtrace.gapseq import cyclic_shift, cyclically_equal
from conftest import PAPER_X, PAPER_Y


def naive_stat(x, idx, ell=1):
    k = len(x)
    return sum(math.prod(x[(i - 1 + j * ell) % k] for i in idx) for j in range(1, k // ell + 1))


def naive_equal(x, y, m_max, ell=1):
    """Compare every full index tuple, no reduction."""
    k = len(x)
    return all(
        naive_stat(x, t, ell) == naive_stat(y, t, ell)
        for m in range(1, m_max + 1)
        for t in product(range(1, k + 1), repeat=m)
    )


def test_stat_examples():
    assert stat((4, 5, 6), StatIndex((1,))) == 15
    assert stat(PAPER_X, StatIndex((1,))) == 18
    assert stat(PAPER_X, StatIndex((1, 1))) == 38
    assert stat(PAPER_Y, StatIndex((1, 1))) == 38


def test_stat_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        stat((1, 2, 3), StatIndex((1,), 2))


def test_stat_index_text():
    idx = StatIndex.from_text("1,3;2")
    assert idx == StatIndex((1, 3), 2) and idx.to_text() == "1,3;2" and idx.order == 2


def test_shifted_examples():
    idx = StatIndex((1, 2))
    x = (3, 1, 4)
    assert shifted_stat(x, x, idx) == 0
    assert shifted_stat(x, (0, 0, 0), idx) == stat(x, idx)
    assert shifted_stat((2, 4), (1, 1), StatIndex((1,))) == 4
    assert shifted_stat((2, 4), (Fraction(1, 2), 0), StatIndex((1,))) == Fraction(11, 2)


def test_stats_equal_examples():
    assert stats_equal_up_to((1, 2, 2), (1, 2, 2), 6)
    assert stats_equal_up_to(PAPER_X, PAPER_Y, 4)
    assert not stats_equal_up_to(PAPER_X, PAPER_Y, 6)
    assert not stats_equal_up_to(PAPER_X, PAPER_Y, 5)


def test_min_distinguishing_examples():
    assert min_distinguishing_stat((0, 0, 1), (0, 1, 1)) == StatIndex((1,))
    assert min_distinguishing_stat((1, 2), (2, 1)) is None
    idx = min_distinguishing_stat(PAPER_X, PAPER_Y)
    assert idx is not None and idx.order in (5, 6)
    assert stat(PAPER_X, idx) != stat(PAPER_Y, idx)
    assert matched_order(PAPER_X, PAPER_Y) == 4


def test_symmetry_period_examples():
    assert symmetry_period((5, 5, 5)) == 1
    assert symmetry_period((1, 2, 1, 2)) == 2
    assert symmetry_period((1, 2, 3)) == 3


def test_verify_characterization_examples():
    assert verify_characterization(2, 2, 6) == []
    assert verify_characterization(4, 3, 6) == []
    loose = verify_characterization(4, 3, 1)
    assert ((0, 3, 1, 2), (0, 3, 2, 1)) in loose
    assert not cyclically_equal((0, 3, 1, 2), (0, 3, 2, 1))
    assert len(counterexample_classes(loose)) <= len(loose)


small = st.integers(1, 5).flatmap(lambda k: st.tuples(*[st.integers(0, 3)] * k))


@given(small, st.integers(0, 10))
def test_stats_rotation_invariant(x, c):
    assert stats_equal_up_to(x, cyclic_shift(x, c), 4)


@given(st.integers(1, 4).flatmap(lambda k: st.tuples(st.tuples(*[st.integers(0, 2)] * k), st.tuples(*[st.integers(0, 2)] * k))))
def test_reduced_comparison_matches_full_enumeration(pair):
    x, y = pair
    assert stats_equal_up_to(x, y, 3) == naive_equal(x, y, 3)


@given(st.sampled_from([1, 2, 3, 6]).flatmap(
    lambda ell: st.tuples(st.just(ell), st.tuples(*[st.integers(0, 3)] * 6), st.tuples(*[st.integers(0, 3)] * 6))
))
def test_min_stat_is_first_full_tuple(args):
    ell, x, y = args
    idx = min_distinguishing_stat(x, y, ell, cap=3)
    first = None
    for m in range(1, 4):
        for t in product(range(1, 7), repeat=m):
            if naive_stat(x, t, ell) != naive_stat(y, t, ell):
                first = t
                break
        if first:
            break
    if first is None:
        assert idx is None
    else:
        assert idx == StatIndex(first, ell)
