"""Cyclic statistics of integer sequences.

The order-m cyclic statistic mod ell with index tuple (i_1, ..., i_m) is

    S_{i_1..i_m; ell}(x) = sum_{j=1}^{k/ell} x_{i_1 + j ell} * ... * x_{i_m + j ell}

with 1-based indices read mod k.  With ell = 1 it sums a monomial over every
rotation of x and is therefore rotation invariant.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from numbers import Integral, Rational
from typing import Iterator, Sequence

from .errors import ModulusMismatch
from .gapseq import canonical_rotation, cyclically_equal

DEFAULT_ORDER_CAP = 6
FLOAT_TOL = 1e-6


@dataclass(frozen=True)
class StatIndex:
    """Index tuple (1-based, read mod k) plus the modulus ell."""

    indices: tuple[int, ...]
    modulus: int = 1

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if not self.indices:
            raise ValueError("a statistic needs order >= 1")
        if self.modulus < 1:
            raise ValueError("modulus must be positive")

    @property
    def order(self) -> int:
        return len(self.indices)

    def check(self, k: int) -> None:
        if k % self.modulus:
            raise ModulusMismatch(f"modulus {self.modulus} does not divide k={k}")

    def to_text(self) -> str:
        return ",".join(map(str, self.indices)) + f";{self.modulus}"

    @classmethod
    def from_text(cls, text: str) -> "StatIndex":
        """Parse ``"i1,...,im;ell"``; a missing ``;ell`` means ell = 1."""
        head, _, tail = text.partition(";")
        indices = tuple(int(t) for t in head.split(",") if t.strip())
        return cls(indices, int(tail) if tail.strip() else 1)

    def __str__(self) -> str:
        return self.to_text()


def _positions(k: int, idx: StatIndex) -> list[list[int]]:
    """0-based array positions of every factor, one row per summand."""
    ell = idx.modulus
    return [[(i - 1 + j * ell) % k for i in idx.indices] for j in range(1, k // ell + 1)]


def stat(x: Sequence[int], idx: StatIndex) -> int:
    """Exact value of the cyclic statistic on an integer sequence."""
    k = len(x)
    idx.check(k)
    vals = [int(v) for v in x]
    return sum(math.prod(vals[p] for p in row) for row in _positions(k, idx))


def _exact(v):
    if isinstance(v, Integral):
        return Fraction(int(v))
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    return None


def shifted_stat(x: Sequence[int], s: Sequence, idx: StatIndex):
    """The statistic evaluated on ``x - s``.

    Exact ``Fraction`` arithmetic when every shift is rational, float otherwise.
    """
    k = len(x)
    if len(s) != k:
        raise ValueError("shift and sequence lengths differ")
    idx.check(k)
    exact = [_exact(v) for v in s]
    if all(e is not None for e in exact):
        diff = [Fraction(int(a)) - e for a, e in zip(x, exact)]
    else:
        diff = [float(a) - float(b) for a, b in zip(x, s)]
    total = sum(math.prod(diff[p] for p in row) for row in _positions(k, idx))
    return total


@lru_cache(maxsize=None)
def reduced_tuples(k: int, m: int, ell: int = 1) -> tuple[tuple[int, ...], ...]:
    """Non-decreasing index tuples with first entry <= ell, in lexicographic order.

    Statistics are symmetric in their factors and invariant under shifting every
    index by ell, so these tuples reach every order-m statistic mod ell.
    """
    out = []
    for first in range(1, ell + 1):
        for rest in combinations_with_replacement(range(first, k + 1), m - 1):
            out.append((first,) + rest)
    return tuple(out)


def iter_stat_indices(k: int, m: int, ell: int = 1) -> Iterator[StatIndex]:
    for t in reduced_tuples(k, m, ell):
        yield StatIndex(t, ell)


def signature(x: Sequence[int], max_order: int, ell: int = 1) -> tuple[int, ...]:
    """All statistics of orders 1..max_order (reduced tuples), concatenated."""
    k = len(x)
    if k % ell:
        raise ModulusMismatch(f"modulus {ell} does not divide k={k}")
    vals = [int(v) for v in x]
    out = []
    for m in range(1, max_order + 1):
        for t in reduced_tuples(k, m, ell):
            out.append(
                sum(
                    math.prod(vals[(i - 1 + j * ell) % k] for i in t)
                    for j in range(1, k // ell + 1)
                )
            )
    return tuple(out)


def stats_equal_up_to(x: Sequence[int], y: Sequence[int], m_max: int, ell: int = 1) -> bool:
    if len(x) != len(y):
        return False
    k = len(x)
    for m in range(1, m_max + 1):
        for idx in iter_stat_indices(k, m, ell):
            if stat(x, idx) != stat(y, idx):
                return False
    return True


def min_distinguishing_stat(
    x: Sequence[int], y: Sequence[int], ell: int = 1, cap: int = DEFAULT_ORDER_CAP
) -> StatIndex | None:
    """Smallest-order statistic mod ``ell`` separating x and y, lexicographic within an order.

    The lexicographically least separating full tuple is always sorted with first
    entry <= ell, so scanning the reduced tuples in order finds it.
    """
    if len(x) != len(y):
        raise ValueError("sequences must have equal length")
    k = len(x)
    if k % ell:
        raise ModulusMismatch(f"modulus {ell} does not divide k={k}")
    for m in range(1, cap + 1):
        for idx in iter_stat_indices(k, m, ell):
            if stat(x, idx) != stat(y, idx):
                return idx
    return None


def matched_order(x: Sequence[int], y: Sequence[int], cap: int = DEFAULT_ORDER_CAP) -> int:
    """Largest z <= cap such that all ell=1 statistics of order <= z agree."""
    idx = min_distinguishing_stat(x, y, 1, cap)
    return cap if idx is None else idx.order - 1


def symmetry_period(s: Sequence) -> int:
    """Smallest divisor ell of k with s_j = s_{j+ell} for all j."""
    k = len(s)
    s = tuple(s)
    for ell in range(1, k + 1):
        if k % ell == 0 and s[ell:] + s[:ell] == s:
            return ell
    return k


def verify_characterization(
    k: int, max_value: int, cap: int = DEFAULT_ORDER_CAP
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Cyclically distinct pairs in {0..max_value}^k with equal statistics up to ``cap``.

    Sequences are bucketed by their statistic signature; only pairs inside a
    bucket can be counterexamples. Each unordered pair is reported once, x < y.
    """
    buckets: dict[tuple[int, ...], list[tuple[int, ...]]] = defaultdict(list)
    for x in product(range(max_value + 1), repeat=k):
        buckets[signature(x, cap)].append(x)
    found = []
    for members in buckets.values():
        for x, y in combinations(members, 2):
            if not cyclically_equal(x, y):
                found.append((x, y))
    found.sort()
    return found


def counterexample_classes(pairs) -> set[frozenset]:
    """Collapse counterexample pairs to pairs of rotation classes."""
    return {frozenset((canonical_rotation(x), canonical_rotation(y))) for x, y in pairs}
