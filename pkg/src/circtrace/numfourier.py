"""Fourier coefficients of integer sequences and supporting number theory.

Coefficients use the positive-exponent convention
``xhat_j = sum_l x_l exp(2 pi i j l / k)`` for j = 0..k-1.  Index sets such as
gcd classes are reported over [k] = {1..k}, where j = k stands for coefficient 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

import numpy as np
from sympy import factorint, multiplicity
from sympy.ntheory.modular import crt

from .errors import NotADivisor


@dataclass(frozen=True)
class Spectrum:
    coeffs: np.ndarray
    source_length: int

    def __getitem__(self, j: int) -> complex:
        return complex(self.coeffs[j % self.source_length])

    def as_dict(self) -> dict:
        return {
            "k": self.source_length,
            "real": [float(c.real) for c in self.coeffs],
            "imag": [float(c.imag) for c in self.coeffs],
            "abs": [float(abs(c)) for c in self.coeffs],
        }


@dataclass(frozen=True)
class GcdClass:
    alpha: int
    members: tuple[int, ...]


class ZeroClass(enum.Enum):
    ALL_ZERO = "AllZero"
    ALL_NONZERO = "AllNonzero"
    MIXED = "Mixed"


def dft(x: Sequence[int]) -> Spectrum:
    k = len(x)
    if k < 1:
        raise ValueError("empty sequence")
    j = np.arange(k)
    kernel = np.exp(2j * np.pi * np.outer(j, j) / k)
    return Spectrum(kernel @ np.asarray(x, dtype=float), k)


def divisors(k: int) -> list[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


def gcd_class(k: int, alpha: int) -> GcdClass:
    if alpha < 1 or k % alpha:
        raise NotADivisor(f"{alpha} does not divide {k}")
    return GcdClass(alpha, tuple(j for j in range(1, k + 1) if math.gcd(j, k) == alpha))


def default_zero_tol(x: Sequence[int]) -> float:
    return 1e-6 * (1 + sum(abs(int(v)) for v in x))


def zero_pattern(spec: Spectrum, tol: float) -> dict[int, ZeroClass]:
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = spec.source_length
    out = {}
    for alpha in divisors(k):
        small = [abs(spec[j]) < tol for j in gcd_class(k, alpha).members]
        if all(small):
            out[alpha] = ZeroClass.ALL_ZERO
        elif not any(small):
            out[alpha] = ZeroClass.ALL_NONZERO
        else:
            out[alpha] = ZeroClass.MIXED
    return out


def _close(a: complex, b: complex, tol: float) -> bool:
    scale = max(1.0, abs(a), abs(b))
    return abs(a - b) <= tol * scale


def product_identity_check(x: Sequence[int], y: Sequence[int], m: int, tol: float = 1e-9) -> bool:
    """Whether m-way coefficient products agree on every index tuple summing to 0 mod k.

    Relative comparison above magnitude 1, absolute below.
    """
    k = len(x)
    if len(y) != k:
        raise ValueError("sequences must have equal length")
    xs, ys = dft(x).coeffs, dft(y).coeffs
    for t in combinations_with_replacement(range(k), m):
        if sum(t) % k:
            continue
        px = complex(np.prod(xs[list(t)]))
        py = complex(np.prod(ys[list(t)]))
        if not _close(px, py, tol):
            return False
    return True


def p_adic_valuation(a: int, p: int) -> int:
    if a < 1:
        raise ValueError("valuation needs a positive integer")
    return int(multiplicity(p, a))


def _prime_power_parts(j: int, p: int, a: int, size: int) -> tuple[int, ...]:
    """Residues coprime to p summing to j mod p^a (2 or 3 of them).

    The first candidate expression is taken whenever it is valid.
    """
    pa = p**a
    j %= pa
    if p == 2:
        if size == 2:
            return ((j - 1) % pa, 1)
        return ((j - 2) % pa, 1, 1)
    if size == 2:
        if (j - 1) % p:
            return ((j - 1) % pa, 1)
        return ((j + 1) % pa, pa - 1)
    if (j - 2) % p:
        return ((j - 2) % pa, 1, 1)
    return ((j + 2) % pa, pa - 1, pa - 1)


def coprime_sum_repr(d: int, j: int) -> tuple[int, ...]:
    """Write j mod d as a sum of residues coprime to d.

    Three residues when d is even and j odd, two otherwise.  Each prime-power
    component is solved separately and the parts are glued by CRT.  Residues are
    reported in [d] = {1..d}.
    """
    if d < 1:
        raise ValueError("d must be positive")
    j %= d
    size = 3 if d % 2 == 0 and j % 2 == 1 else 2
    if d == 1:
        return (1,) * size
    factors = sorted(factorint(d).items())
    moduli = [p**a for p, a in factors]
    per_prime = [_prime_power_parts(j, p, a, size) for p, a in factors]
    out = []
    for slot in range(size):
        value, _ = crt(moduli, [parts[slot] for parts in per_prime])
        out.append(int(value) % d or d)
    return tuple(out)


def consistent_shift_constant(k: int, assignments: Mapping[int, int]) -> int | None:
    """Some c in 0..k-1 with (c - c_alpha) * alpha = 0 mod k for every alpha, else None."""
    for alpha in assignments:
        if alpha < 1 or k % alpha:
            raise NotADivisor(f"{alpha} does not divide {k}")
    for c in range(k):
        if all((c - c_a) * alpha % k == 0 for alpha, c_a in assignments.items()):
            return c
    return None
