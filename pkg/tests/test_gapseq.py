import pytest
from hypothesis import given
from hypothesis import strategies as st

from circtrace.errors import NoOnes
from circtrace.gapseq import (
    GapSequence,
    canonical_rotation,
    cyclic_shift,
    cyclically_equal,
    parse_gaps,
    rotation_to,
    to_binary,
)
from conftest import PAPER_X, PAPER_Y

gap_lists = st.lists(st.integers(0, 6), min_size=1, max_size=8)


def test_to_binary_examples():
    assert to_binary((0,)) == "1"
    assert to_binary((1, 2)) == "10100"
    b = to_binary(PAPER_X)
    assert len(b) == 30 and b.count("1") == 12


def test_parse_examples():
    assert parse_gaps("10100") == (1, 2)
    assert parse_gaps("01010") == (1, 2)
    assert parse_gaps("111") == (0, 0, 0)


@pytest.mark.parametrize("bad", ["", "000"])
def test_parse_no_ones(bad):
    with pytest.raises(NoOnes):
        parse_gaps(bad)


def test_shift_examples():
    assert cyclic_shift((1, 2, 3), 0) == (1, 2, 3)
    assert cyclic_shift((1, 2, 3), 1) == (2, 3, 1)
    assert cyclic_shift((1, 2, 3), -1) == (3, 1, 2)


def test_cyclic_equality_examples():
    assert cyclically_equal((1, 2), (2, 1))
    assert not cyclically_equal(PAPER_X, PAPER_Y)
    assert not cyclically_equal((1, 2), (1, 3))


def test_canonical_examples():
    assert canonical_rotation((2, 3, 1)) == (1, 2, 3)
    assert canonical_rotation((0, 0)) == (0, 0)
    assert canonical_rotation((1, 0, 1, 0)) == (0, 1, 0, 1)


def test_gap_sequence_validation():
    with pytest.raises(ValueError):
        GapSequence(())
    with pytest.raises(ValueError):
        GapSequence((1, -1))
    g = GapSequence((1, 2))
    assert g.k == 2 and g.binary_length == 5
    assert GapSequence.from_text(g.to_text()) == g


@given(gap_lists)
def test_binary_roundtrip(g):
    assert parse_gaps(to_binary(g)) == tuple(g)


@given(gap_lists, st.integers(-20, 20))
def test_rotated_binary_parses_to_a_rotation(g, r):
    b = to_binary(g)
    r %= len(b)
    assert cyclically_equal(parse_gaps(b[r:] + b[:r]), g)


@given(gap_lists, st.integers(-20, 20))
def test_rotation_to_inverts_shift(g, c):
    h = cyclic_shift(g, c)
    r = rotation_to(g, h)
    assert r is not None and cyclic_shift(g, r) == h
    assert canonical_rotation(h) == canonical_rotation(g)
