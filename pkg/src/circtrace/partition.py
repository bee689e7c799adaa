"""C-separated partitions of real points.

Points closer than ``2 C sqrt(n) log n`` (natural log) are merged greedily until
every pair of clusters is farther apart than that.  Arbitrary reals are then
assigned to the cluster of their nearest input point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_C = 3.0


def scale(n: int) -> float:
    """``sqrt(n) * ln(n)``."""
    return math.sqrt(n) * math.log(n)


@dataclass(frozen=True)
class SeparatedPartition:
    points: tuple[float, ...]
    labels: tuple[int, ...]
    C: float
    n: int

    @property
    def threshold(self) -> float:
        """Merge distance ``2 C sqrt(n) log n``."""
        return 2 * self.C * scale(self.n)

    @property
    def n_clusters(self) -> int:
        return max(self.labels)

    def members(self, cluster: int) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == cluster]

    def __post_init__(self):
        order = sorted(range(len(self.points)), key=lambda i: (self.points[i], i))
        object.__setattr__(self, "_order", np.array(order, dtype=np.int64))
        object.__setattr__(self, "_sorted", np.array([self.points[i] for i in order], dtype=float))


def build_partition(points: Sequence[float], C: float = DEFAULT_C, n: int = 2) -> SeparatedPartition:
    if C <= 0:
        raise ValueError("C must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    pts = [float(v) for v in points]
    if not pts:
        raise ValueError("need at least one point")
    limit = 2 * C * scale(n)
    clusters: list[list[int]] = [[i] for i in range(len(pts))]

    def gap(a: list[int], b: list[int]) -> float:
        return min(abs(pts[i] - pts[j]) for i in a for j in b)

    merged = True
    while merged:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                if clusters[i] and clusters[j] and gap(clusters[i], clusters[j]) <= limit:
                    clusters[i] = clusters[i] + clusters[j]
                    clusters[j] = []
                    merged = True
                    break
            if merged:
                break

    live = sorted((c for c in clusters if c), key=lambda c: min(pts[i] for i in c))
    labels = [0] * len(pts)
    for cid, members in enumerate(live, start=1):
        for i in members:
            labels[i] = cid
    return SeparatedPartition(tuple(pts), tuple(labels), float(C), int(n))


def nearest_point(part: SeparatedPartition, value) -> np.ndarray:
    """Index of the nearest input point; ties go to the lower value, then lower index."""
    v = np.asarray(value, dtype=float)
    srt = part._sorted
    pos = np.searchsorted(srt, v, side="left")
    right = np.clip(pos, 0, len(srt) - 1)
    left = np.clip(pos - 1, 0, len(srt) - 1)
    # first sorted slot holding the left neighbour's value gives the lowest index among equals
    left = np.searchsorted(srt, srt[left], side="left")
    choose_left = np.abs(v - srt[left]) <= np.abs(srt[right] - v)
    slot = np.where(choose_left, left, right)
    return part._order[slot]


def assign(part: SeparatedPartition, value):
    """Cluster id (1-based) for a real value, or an array of ids for an array."""
    labels = np.asarray(part.labels, dtype=np.int64)
    out = labels[nearest_point(part, value)]
    return int(out) if np.ndim(out) == 0 else out


def cluster_means(part: SeparatedPartition, weights: Sequence[float] | None = None) -> dict[int, float]:
    pts = np.asarray(part.points, dtype=float)
    w = np.ones_like(pts) if weights is None else np.asarray(weights, dtype=float)
    labels = np.asarray(part.labels)
    return {
        cid: float(np.sum(pts[labels == cid] * w[labels == cid]) / np.sum(w[labels == cid]))
        for cid in range(1, part.n_clusters + 1)
    }
