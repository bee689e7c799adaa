"""Circular deletion channel: sampling and exact trace probabilities.

Each bit is deleted independently with probability p, then the surviving string
is rotated by a uniform offset.  Sampling uses numpy's Philox (counter-based)
generator; every sampler takes the generator explicitly so replays are exact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import InvalidProbability, TooLarge
from .gapseq import BinaryString, GapSequence, parse_gaps, to_binary

BRUTE_FORCE_CAP = 18


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent Philox stream for ``(seed, *keys)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def _as_probability(p):
    """Fraction for rational input (floats are taken at their exact binary value)."""
    if isinstance(p, str):
        p = Fraction(p)
    if isinstance(p, Rational):
        p = Fraction(p.numerator, p.denominator)
    if not 0 < p < 1:
        raise InvalidProbability(f"deletion probability must lie in (0, 1), got {p}")
    return p


@dataclass(frozen=True)
class ChannelParams:
    p: float
    seed: int = 0
    q: float = field(init=False)

    def __post_init__(self):
        if not 0 < float(self.p) < 1:
            raise InvalidProbability(f"deletion probability must lie in (0, 1), got {self.p}")
        object.__setattr__(self, "q", 1 - self.p)

    def rng(self, *keys: int) -> np.random.Generator:
        return make_rng(self.seed, *keys)


def sample_trace(x: BinaryString, params: ChannelParams, rng: np.random.Generator) -> BinaryString:
    bits = np.frombuffer(x.encode(), dtype=np.uint8) if x else np.zeros(0, dtype=np.uint8)
    keep = rng.random(len(bits)) >= float(params.p)
    kept = bits[keep].tobytes().decode()
    if not kept:
        return ""
    offset = int(rng.integers(len(kept)))
    return kept[offset:] + kept[:offset]


def sample_traces(x: BinaryString, params: ChannelParams, rng: np.random.Generator, count: int) -> list[str]:
    return [sample_trace(x, params, rng) for _ in range(count)]


def sample_gap_trace(x: Sequence[int], params: ChannelParams, rng: np.random.Generator) -> GapSequence | None:
    """Gap tuple of one trace when it keeps all k ones, else None."""
    trace = sample_trace(to_binary(x), params, rng)
    if trace.count("1") != len(x):
        return None
    return parse_gaps(trace)


def sample_gap_traces(
    x: Sequence[int], params: ChannelParams, rng: np.random.Generator, count: int
) -> np.ndarray:
    """Vectorised ``sample_gap_trace`` over ``count`` independent draws.

    Returns an ``(m, k)`` integer array with one row per draw that kept all k
    ones.  Rows are read from the first 1 after a uniform rotation offset, the
    same frame ``sample_gap_trace`` reports.
    """
    gaps = np.asarray(x, dtype=np.int64)
    k = len(gaps)
    q = float(params.q)
    ones_kept = (rng.random((count, k)) < q).all(axis=1)
    m = int(ones_kept.sum())
    z = rng.binomial(np.broadcast_to(gaps, (m, k)), q)
    # position of each 1 in the unrotated trace 1 0^{z_1} 1 0^{z_2} ...
    ends = np.cumsum(z + 1, axis=1)
    starts = ends - (z + 1)
    length = ends[:, -1]
    offset = rng.integers(0, length)
    after = starts >= offset[:, None]
    first = np.where(after.any(axis=1), after.argmax(axis=1), 0)
    cols = (np.arange(k)[None, :] + first[:, None]) % k
    return np.take_along_axis(z, cols, axis=1)


def exact_trace_prob(x: Sequence[int], a: Sequence[int], p) -> Fraction:
    """P[trace == 1 0^{a_1} ... 1 0^{a_k}] for source gaps x.

    ``(1/|a|) * sum_i prod_j C(x_j, a_{j+i}) * p^{|x|-|a|} * q^{|a|}``, exact for
    rational p.
    """
    p = _as_probability(p)
    q = 1 - p
    k = len(x)
    if len(a) != k:
        raise ValueError("trace must have the same number of ones as the source")
    n_x = k + sum(x)
    n_a = k + sum(a)
    if n_a > n_x:
        return Fraction(0)
    count = sum(math.prod(math.comb(x[j], a[(j + i) % k]) for j in range(k)) for i in range(k))
    return Fraction(count, n_a) * p ** (n_x - n_a) * q**n_a


@lru_cache(maxsize=256)
def _rotation_counts(x: str) -> tuple[tuple[str, int], ...]:
    """Number of (deletion subset, rotation offset) pairs producing each string."""
    counts: Counter = Counter()
    n = len(x)
    for keep in product((False, True), repeat=n):
        kept = "".join(b for b, k in zip(x, keep) if k)
        if not kept:
            counts[""] += 1
            continue
        for o in range(len(kept)):
            counts[kept[o:] + kept[:o]] += 1
    return tuple(sorted(counts.items()))


def brute_force_trace_distribution(x: Sequence[int], p) -> dict[str, Fraction]:
    """Exact trace distribution by enumerating every deletion pattern and rotation."""
    bits = to_binary(x)
    if len(bits) > BRUTE_FORCE_CAP:
        raise TooLarge(f"binary length {len(bits)} exceeds the enumeration cap {BRUTE_FORCE_CAP}")
    p = _as_probability(p)
    q = 1 - p
    n = len(bits)
    out = {}
    for s, c in _rotation_counts(bits):
        rotations = max(len(s), 1)
        out[s] = Fraction(c, rotations) * p ** (n - len(s)) * q ** len(s)
    return out


def binomial_pmf(n: int, q, r: int):
    if r < 0 or r > n:
        return 0 * q
    return math.comb(n, r) * q**r * (1 - q) ** (n - r)


def conditioned_gap_prob(x: Sequence[int], a: Sequence[int], p):
    """Probability of gap tuple ``a`` given that every 1 survives.

    The reading frame is a uniform choice among the k ones, so
    ``mu0(a) = (1/k) sum_i prod_j Bin(x_j, q)(a_{j+i})``.  For a k-one string,
    ``exact_trace_prob(x, a, p) == (k / |a|) * q^k * mu0(a)``.
    """
    p = _as_probability(p)
    q = 1 - p
    k = len(x)
    if len(a) != k:
        raise ValueError("trace must have k gaps")
    total = sum(math.prod(binomial_pmf(x[j], q, a[(j + i) % k]) for j in range(k)) for i in range(k))
    return total / k
