"""Lower-bound laboratory: probability ratios between permutation-related strings.

For sources ``1 0^{n+x_1} ... 1 0^{n+x_k}`` and the same with y, where y is a
permutation of x, every factor of the trace probability that is symmetric in
the gaps cancels.  What remains is

    D(x) = sum_i prod_j prod_{h = x_j + 1}^{x*} (n - a_{j+i} + h)

with x* = max(x), so the ratio is the exact integer quotient D(x) / D(y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .channel import _as_probability, make_rng
from .cyclicstats import (
    DEFAULT_ORDER_CAP,
    matched_order,
    reduced_tuples,
    signature,
    stats_equal_up_to,
)
from .errors import DomainError, ZeroDenominator
from .gapseq import GapSequence, canonical_rotation, cyclically_equal

PAPER_X = (0, 2, 3, 2, 1, 1, 1, 1, 2, 3, 2, 0)


@dataclass(frozen=True)
class LowerBoundPair:
    x: GapSequence
    y: GapSequence
    matched_order: int
    is_permutation: bool

    def __post_init__(self):
        object.__setattr__(self, "x", GapSequence(self.x))
        object.__setattr__(self, "y", GapSequence(self.y))
        z = self.matched_order
        if len(self.x) != len(self.y):
            raise ValueError("pair sequences differ in length")
        if self.is_permutation != (sorted(self.x) == sorted(self.y)):
            raise ValueError("is_permutation does not match the sequences")
        if cyclically_equal(self.x, self.y):
            raise ValueError("pair sequences are cyclic shifts of each other")
        if not stats_equal_up_to(self.x, self.y, z):
            raise ValueError(f"statistics differ below order {z}")
        if stats_equal_up_to(self.x, self.y, z + 1):
            raise ValueError(f"statistics still agree at order {z + 1}")

    @classmethod
    def from_sequences(cls, x: Sequence[int], y: Sequence[int]) -> "LowerBoundPair":
        z = matched_order(x, y, DEFAULT_ORDER_CAP + 1)
        return cls(GapSequence(x), GapSequence(y), z, sorted(x) == sorted(y))

    def key(self) -> tuple:
        """Identifies the pair up to rotation of either side, swapping, and reversal."""
        fwd = tuple(sorted((canonical_rotation(self.x), canonical_rotation(self.y))))
        rev = tuple(sorted((canonical_rotation(self.x[::-1]), canonical_rotation(self.y[::-1]))))
        return min(fwd, rev)


def paper_pair() -> LowerBoundPair:
    """The length-12 pair x and 3 - x whose statistics agree through order 4."""
    x = GapSequence(PAPER_X)
    y = GapSequence(3 - v for v in x)
    return LowerBoundPair(x, y, 4, True)


def _reduced_weight(gaps: Sequence[int], a: Sequence[int], n: int, top: int) -> int:
    k = len(gaps)
    total = 0
    for i in range(k):
        term = 1
        for j in range(k):
            base = n - a[(j + i) % k]
            for h in range(gaps[j] + 1, top + 1):
                term *= base + h
            if term == 0:
                break
        total += term
    return total


def _pair_xy(pair) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if isinstance(pair, LowerBoundPair):
        return tuple(pair.x), tuple(pair.y)
    x, y = pair
    return tuple(x), tuple(y)


def prob_ratio(pair, a: Sequence[int], n: int, p=Fraction(1, 2)) -> Fraction:
    """P[trace = a | x-source] / P[trace = a | y-source], exact.

    ``pair`` is a LowerBoundPair or an ``(x, y)`` tuple of permutation-related
    sequences.  The deletion probability cancels; it is only range-checked.
    """
    _as_probability(p)
    x, y = _pair_xy(pair)
    if sorted(x) != sorted(y):
        raise ValueError("the ratio formula needs y to be a permutation of x")
    if len(a) != len(x):
        raise ValueError("trace must have k gaps")
    top = max(x)
    if any(v < 0 or v > n + top for v in a):
        raise ZeroDenominator(f"trace {tuple(a)} has probability 0 under both sources")
    num = _reduced_weight(x, a, n, top)
    den = _reduced_weight(y, a, n, top)
    if den == 0:
        raise ZeroDenominator(f"trace {tuple(a)} has probability 0 under the y-source")
    return Fraction(num, den)


def prob_ratio_direct(pair, a: Sequence[int], n: int) -> Fraction:
    """Same ratio from the unreduced binomial sums (independent check)."""
    x, y = _pair_xy(pair)
    k = len(x)

    def weight(g):
        return sum(math.prod(math.comb(n + g[j], a[(j + i) % k]) for j in range(k)) for i in range(k))

    den = weight(y)
    if den == 0:
        raise ZeroDenominator(f"trace {tuple(a)} has probability 0 under the y-source")
    return Fraction(weight(x), den)


def ratio_deviation(pair, a: Sequence[int], n: int) -> float:
    x, y = _pair_xy(pair)
    top = max(x)
    num = _reduced_weight(x, a, n, top)
    den = _reduced_weight(y, a, n, top)
    if den == 0:
        raise ZeroDenominator(f"trace {tuple(a)} has probability 0 under the y-source")
    return abs(num - den) / den


@dataclass(frozen=True)
class SweepRow:
    n: int
    samples_kept: int
    samples_drawn: int
    max_dev: float
    q99_dev: float
    slope_so_far: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    slope: float


def fit_slope(ns: Sequence[float], devs: Sequence[float]) -> float:
    if len(ns) < 2 or any(d <= 0 for d in devs):
        return math.nan
    return float(np.polyfit(np.log(ns), np.log(devs), 1)[0])


def ratio_deviation_sweep(
    pair,
    p: float,
    n_values: Sequence[int],
    samples_per_n: int,
    C_window: float = 3.0,
    seed: int = 0,
) -> SweepResult:
    """Max and 0.99-quantile of ``|ratio - 1|`` over sampled traces, per n.

    Gap tuples come from the x-source with every 1 retained: ``a_j ~ Bin(n + x_j, q)``
    under a uniform rotation.  Tuples with some ``|a_j - n q| > C_window sqrt(n ln n)``
    are discarded; sampling continues until ``samples_per_n`` are kept.
    """
    x, _ = _pair_xy(pair)
    q = 1 - float(p)
    k = len(x)
    rows = []
    for n in n_values:
        rng = make_rng(seed, n)
        half_width = C_window * math.sqrt(n * math.log(n))
        centre = n * q
        devs: list[float] = []
        drawn = 0
        while len(devs) < samples_per_n:
            batch = max(64, samples_per_n - len(devs))
            a = rng.binomial(np.asarray(x, dtype=np.int64) + n, q, size=(batch, k))
            shift = rng.integers(0, k, size=batch)
            a = np.take_along_axis(a, (np.arange(k)[None, :] + shift[:, None]) % k, axis=1)
            drawn += batch
            inside = (np.abs(a - centre) <= half_width).all(axis=1)
            for row in a[inside]:
                if len(devs) == samples_per_n:
                    break
                devs.append(ratio_deviation(pair, [int(v) for v in row], n))
        arr = np.asarray(devs)
        ns = [r.n for r in rows] + [n]
        mx = [r.max_dev for r in rows] + [float(arr.max())]
        rows.append(
            SweepRow(n, len(devs), drawn, float(arr.max()), float(np.quantile(arr, 0.99)), fit_slope(ns, mx))
        )
    return SweepResult(tuple(rows), rows[-1].slope_so_far if rows else math.nan)


def hellinger_sample_bound(d_h: float, epsilon: float) -> int:
    """``floor(ln(1/epsilon) / (9 d_H))`` samples keep the product measures eps-close."""
    if not 0 < d_h <= 0.5:
        raise DomainError(f"Hellinger distance must lie in (0, 1/2], got {d_h}")
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return math.floor(math.log(1 / epsilon) / (9 * d_h))


def hellinger_distance(mu: dict, nu: dict) -> float:
    """``sqrt(sum (sqrt mu - sqrt nu)^2)`` over the union of supports (no 1/sqrt 2 factor)."""
    keys = set(mu) | set(nu)
    return math.sqrt(sum((math.sqrt(mu.get(s, 0)) - math.sqrt(nu.get(s, 0))) ** 2 for s in keys))


def search_matching_pairs(k: int, max_value: int, target_order: int) -> list[LowerBoundPair]:
    """Every permutation pair in {0..max_value}^k whose statistics agree exactly through ``target_order``."""
    reps = sorted({canonical_rotation(x) for x in product(range(max_value + 1), repeat=k)})
    groups: dict[tuple, list] = {}
    for x in reps:
        groups.setdefault((tuple(sorted(x)), signature(x, target_order)), []).append(x)
    found = {}
    for members in groups.values():
        for i, x in enumerate(members):
            for y in members[i + 1:]:
                if stats_equal_up_to(x, y, target_order + 1):
                    continue
                pair = LowerBoundPair(x, y, target_order, True)
                found.setdefault(pair.key(), pair)
    return [found[key] for key in sorted(found)]


def stat_matrix(X: np.ndarray, tuples: Sequence[tuple[int, ...]]) -> np.ndarray:
    """Statistics (ell = 1) for every row of an integer array, one column per tuple."""
    out = np.empty((X.shape[0], len(tuples)), dtype=np.int64)
    for c, t in enumerate(tuples):
        prod = np.ones_like(X)
        for i in t:
            prod = prod * np.roll(X, -(i - 1), axis=1)
        out[:, c] = prod.sum(axis=1)
    return out


def search_complement_pairs(
    k: int, max_value: int, target_order: int, chunk: int = 1 << 20
) -> list[LowerBoundPair]:
    """Pairs (x, max_value - x) matching exactly through ``target_order``.

    Candidates are pruned by the permutation condition, then to one rotation per
    class, then order by order.
    """
    base = max_value + 1
    total = base**k
    weights = base ** np.arange(k - 1, -1, -1, dtype=np.int64)
    survivors = []
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = (codes[:, None] // weights[None, :]) % base
        counts = np.stack([(X == v).sum(axis=1) for v in range(base)], axis=1)
        X = X[(counts == counts[:, ::-1]).all(axis=1)]
        if len(X) == 0:
            continue
        rot_codes = np.stack([np.roll(X, -r, axis=1) @ weights for r in range(k)], axis=1)
        X = X[rot_codes[:, 0] == rot_codes.min(axis=1)]
        for m in range(2, target_order + 1):
            if len(X) == 0:
                break
            tuples = reduced_tuples(k, m)
            keep = (stat_matrix(X, tuples) == stat_matrix(max_value - X, tuples)).all(axis=1)
            X = X[keep]
        survivors.append(X)
    found = {}
    for X in survivors:
        for row in X:
            x = tuple(int(v) for v in row)
            y = tuple(max_value - v for v in x)
            if cyclically_equal(x, y) or stats_equal_up_to(x, y, target_order + 1):
                continue
            pair = LowerBoundPair(x, y, target_order, True)
            found.setdefault(pair.key(), pair)
    return [found[key] for key in sorted(found)]
