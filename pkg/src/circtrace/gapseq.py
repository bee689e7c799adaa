"""Gap-sequence representation of k-sparse circular binary strings.

A binary string with k ones is, up to rotation, ``1 0^{g_1} 1 0^{g_2} ... 1 0^{g_k}``;
the tuple ``(g_1, ..., g_k)`` is its gap sequence.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import NoOnes

BinaryString = str


class GapSequence(tuple):
    """Immutable tuple of k >= 1 nonnegative gap lengths.

    Compares equal to a plain tuple with the same entries.
    """

    def __new__(cls, gaps: Iterable[int]) -> "GapSequence":
        values = tuple(int(g) for g in gaps)
        if not values:
            raise ValueError("a gap sequence needs at least one gap")
        if any(g < 0 for g in values):
            raise ValueError(f"gaps must be nonnegative, got {values}")
        return super().__new__(cls, values)

    @property
    def k(self) -> int:
        return len(self)

    @property
    def binary_length(self) -> int:
        return len(self) + sum(self)

    def __repr__(self) -> str:
        return f"GapSequence({tuple(self)!r})"

    def to_text(self) -> str:
        return ",".join(str(g) for g in self)

    @classmethod
    def from_text(cls, text: str) -> "GapSequence":
        """Parse the comma-separated form, e.g. ``"0,2,3"``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        return cls(int(p) for p in parts)


def to_binary(g: Sequence[int]) -> BinaryString:
    return "".join("1" + "0" * int(v) for v in g)


def parse_gaps(b: BinaryString) -> GapSequence:
    """Read the gap tuple of ``b`` cyclically, starting at its first 1."""
    start = b.find("1")
    if start < 0:
        raise NoOnes(f"binary string {b!r} contains no 1")
    rotated = b[start:] + b[:start]
    # rotated starts with "1"; split yields "" then the zero-runs after each 1
    return GapSequence(len(run) for run in rotated.split("1")[1:])


def cyclic_shift(g: Sequence[int], c: int) -> GapSequence:
    """Return ``r`` with ``r_j = g_{(j + c) mod k}``."""
    k = len(g)
    c %= k
    return GapSequence(tuple(g[c:]) + tuple(g[:c]))


def cyclically_equal(g: Sequence[int], h: Sequence[int]) -> bool:
    if len(g) != len(h):
        return False
    g, h = tuple(g), tuple(h)
    return any(g[c:] + g[:c] == h for c in range(len(g)))


def rotation_to(g: Sequence[int], h: Sequence[int]) -> int | None:
    """Smallest ``c`` with ``cyclic_shift(g, c) == h``, or None."""
    if len(g) != len(h):
        return None
    g, h = tuple(g), tuple(h)
    for c in range(len(g)):
        if g[c:] + g[:c] == h:
            return c
    return None


def canonical_rotation(g: Sequence[int]) -> GapSequence:
    """Lexicographically least rotation of ``g``."""
    g = tuple(g)
    return GapSequence(min(g[c:] + g[:c] for c in range(len(g))))
