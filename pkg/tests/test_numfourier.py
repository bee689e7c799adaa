import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import totient

from circtrace.errors import NotADivisor
from circtrace.gapseq import cyclic_shift
from circtrace.numfourier import (
    ZeroClass,
    consistent_shift_constant,
    coprime_sum_repr,
    default_zero_tol,
    dft,
    divisors,
    gcd_class,
    p_adic_valuation,
    product_identity_check,
    zero_pattern,
)
from conftest import PAPER_X, PAPER_Y


def test_dft_examples():
    assert np.allclose(dft([1, 0, 0, 0, 0]).coeffs, 1)
    c = dft([1] * 6).coeffs
    assert np.isclose(c[0], 6) and np.allclose(c[1:], 0)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=16))
def test_dft_matches_numpy_positive_exponent(x):
    k = len(x)
    ref = np.fft.ifft(x) * k
    got = dft(x)
    assert np.allclose(got.coeffs, ref, atol=1e-9)
    for j in range(k):
        assert np.isclose(got[k - j], np.conj(got[j]))


def test_gcd_class_examples():
    assert gcd_class(12, 12).members == (12,)
    assert gcd_class(12, 4).members == (4, 8)
    assert gcd_class(6, 1).members == (1, 5)
    with pytest.raises(NotADivisor):
        gcd_class(12, 5)


@given(st.integers(1, 60))
def test_gcd_classes_partition_indices(k):
    sizes = {a: len(gcd_class(k, a).members) for a in divisors(k)}
    assert sum(sizes.values()) == k
    for a, size in sizes.items():
        assert size == totient(k // a)


def test_zero_pattern_examples():
    const = zero_pattern(dft([1, 1, 1, 1]), 1e-6)
    assert const == {1: ZeroClass.ALL_ZERO, 2: ZeroClass.ALL_ZERO, 4: ZeroClass.ALL_NONZERO}
    alt = zero_pattern(dft([1, 0, 1, 0]), 1e-6)
    assert alt == {1: ZeroClass.ALL_ZERO, 2: ZeroClass.ALL_NONZERO, 4: ZeroClass.ALL_NONZERO}


@given(st.lists(st.integers(0, 20), min_size=1, max_size=24))
def test_zero_pattern_never_mixed(x):
    pattern = zero_pattern(dft(x), default_zero_tol(x))
    assert ZeroClass.MIXED not in pattern.values()


def test_product_identity_examples():
    x = (3, 0, 1, 4, 1)
    assert product_identity_check(x, cyclic_shift(x, 2), 3)
    assert product_identity_check(PAPER_X, PAPER_Y, 2)
    assert not product_identity_check((0, 0, 1), (0, 1, 1), 1)


def test_coprime_examples():
    assert coprime_sum_repr(12, 4) == (11, 5)
    assert coprime_sum_repr(12, 7) == (5, 1, 1)
    assert coprime_sum_repr(5, 0) == (4, 1)


@given(st.integers(1, 400), st.integers(0, 1000))
def test_coprime_repr_properties(d, j):
    parts = coprime_sum_repr(d, j)
    assert len(parts) == (3 if d % 2 == 0 and j % 2 else 2)
    assert sum(parts) % d == j % d
    assert all(math.gcd(v, d) == 1 and 1 <= v <= d for v in parts)


def test_valuation_examples():
    assert p_adic_valuation(12, 2) == 2
    assert p_adic_valuation(12, 3) == 1
    assert p_adic_valuation(7, 2) == 0


def test_shift_constant_examples():
    assert consistent_shift_constant(6, {1: 0, 2: 0, 3: 0}) == 0
    assert consistent_shift_constant(6, {2: 3, 3: 2}) == 0
    assert consistent_shift_constant(4, {1: 1}) == 1
    assert consistent_shift_constant(4, {1: 1, 2: 0}) is None
