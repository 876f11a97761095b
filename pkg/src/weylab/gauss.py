"""Generalized quadratic Gauss sums S(a,b,q) = sum_{n=1}^{q} e((a n^2 + b n)/q).

Two independent routes to the magnitude: exact-residue direct summation and
the classical closed-form table keyed by q mod 4 and the parity of b.  Each
serves as the other's oracle; sweeps compare them triple by triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator

import numpy as np


class BParityClass(Enum):
    """Which residues b give a nonvanishing Gauss sum for a given modulus."""

    ALL = "all"
    EVEN = "even"
    ODD = "odd"

    def admits(self, b: int) -> bool:
        if self is BParityClass.ALL:
            return True
        if self is BParityClass.EVEN:
            return b % 2 == 0
        return b % 2 == 1


def admissible_b(q: int) -> BParityClass:
    """Parity class of b with nonvanishing S(a,b,q): all b for odd q,
    even b for q = 0 mod 4, odd b for q = 2 mod 4."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if q % 2 == 1:
        return BParityClass.ALL
    return BParityClass.EVEN if q % 4 == 0 else BParityClass.ODD


@dataclass(frozen=True)
class GaussSumParams:
    """Parameters (a, b, q) with gcd(a, q) = 1.

    b is kept as given.  Its parity class is taken from this original
    integer, not from the residue mod q: for odd q the parity of the residue
    is not well defined, and the closed form is stated for explicit 2b' and
    2b'+1.  (For odd q both parity rows give sqrt(q), so no ambiguity ever
    reaches the magnitude.)
    """

    a: int
    b: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if math.gcd(self.a, self.q) != 1:
            raise ValueError(f"gcd(a={self.a}, q={self.q}) != 1 is rejected")

    @property
    def b_mod_q(self) -> int:
        return self.b % self.q

    @property
    def b_is_even(self) -> bool:
        return self.b % 2 == 0


@lru_cache(maxsize=512)
def _unit_roots(q: int) -> np.ndarray:
    """e(j/q) for j in [0, q); immutable after construction."""
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    roots.setflags(write=False)
    return roots


def gauss_sum_direct(p: GaussSumParams, shift: int = 0) -> complex:
    """Direct summation over n = shift+1 .. shift+q with exact integer phases.

    The residues (a n^2 + b n) mod q are computed in integer arithmetic and
    looked up in the memoized table of q-th roots of unity, so each term is
    exact to one rounding.  The value is invariant under the shift.
    """
    q = p.q
    n = (np.arange(shift + 1, shift + q + 1) % q).astype(np.int64)
    r = (p.a * n * n + p.b * n) % q
    return complex(_unit_roots(q)[r].sum())


def gauss_magnitude_closed_form(p: GaussSumParams) -> float:
    """|S(a,b,q)| from the classical table.

    even b: sqrt(q) for odd q, 0 for q = 2 mod 4, sqrt(2q) for q = 0 mod 4;
    odd b:  sqrt(q) for odd q, sqrt(2q) for q = 2 mod 4, 0 for q = 0 mod 4.
    """
    q = p.q
    if q % 2 == 1:
        return math.sqrt(q)
    if p.b_is_even:
        return 0.0 if q % 4 == 2 else math.sqrt(2 * q)
    return math.sqrt(2 * q) if q % 4 == 2 else 0.0


def coprime_residues(q: int) -> np.ndarray:
    """All a in [1, q) with gcd(a, q) = 1; for q = 1 the single residue 0."""
    if q == 1:
        return np.array([0], dtype=np.int64)
    a = np.arange(1, q, dtype=np.int64)
    return a[np.fromiter((math.gcd(int(v), q) == 1 for v in a), dtype=bool)]


def _abs_sums_for_q(q: int, a_vals: np.ndarray, b_count: int) -> np.ndarray:
    """|S(a,b,q)| for all given a and b in [0, b_count), vectorized.

    For fixed (a, q) the map b -> S(a,b,q) is the discrete Fourier transform
    of the exact residue table e(a m^2 / q), m = 0..q-1, so one length-q
    transform per a evaluates every b at once.  Replacing b by b + q leaves
    every term unchanged ((a n^2 + (b+q) n)/q shifts by the integer n), so
    columns repeat with period q.
    """
    m = np.arange(q, dtype=np.int64)
    r = (a_vals[:, None] * ((m * m) % q)[None, :]) % q
    v = _unit_roots(q)[r]
    sums = np.fft.ifft(v, axis=1) * q  # S(a,b,q) = sum_m v[m] e(bm/q)
    mags = np.abs(sums)
    reps = -(-b_count // q)
    return np.tile(mags, (1, reps))[:, :b_count]


def sweep_rows(
    qmax: int, b_upper_factor: int = 1
) -> Iterator[tuple[int, int, int, float, float, float]]:
    """Rows (q, a, b, |S| direct, closed form, abs err) for 2 <= q <= qmax,
    a coprime to q, 0 <= b < b_upper_factor*q."""
    if qmax < 1:
        return
    for q in range(2, qmax + 1):
        a_vals = coprime_residues(q)
        mags = _abs_sums_for_q(q, a_vals, b_upper_factor * q)
        for i, a in enumerate(a_vals):
            for b in range(b_upper_factor * q):
                cf = gauss_magnitude_closed_form(GaussSumParams(int(a), b, q))
                direct = float(mags[i, b])
                yield q, int(a), b, direct, cf, abs(direct - cf)


def closed_form_max_error(qmax: int, b_upper_factor: int = 2) -> tuple[int, float]:
    """(number of triples checked, max |direct - closed form|) over the sweep."""
    count = 0
    worst = 0.0
    for q in range(2, qmax + 1):
        a_vals = coprime_residues(q)
        mags = _abs_sums_for_q(q, a_vals, b_upper_factor * q)
        b = np.arange(b_upper_factor * q)
        cf = np.empty(len(b))
        for j, bb in enumerate(b):
            cf[j] = gauss_magnitude_closed_form(GaussSumParams(int(a_vals[0]), int(bb), q))
        err = np.abs(mags - cf[None, :]).max()
        worst = max(worst, float(err))
        count += mags.size
    return count, worst
