"""Quadratic Weyl sums and trigonometric polynomials.

The central object is S_N(x,t) = sum_{n=1}^{N} e(n*x + n^2*t) with
e(u) = exp(2*pi*i*u).  All angles are kept as fractional turns (mod 1), never
radians, so rationals with small power-of-two denominators stay exact.

Evaluation uses a phase recurrence: the second difference of the phase
n*x + n^2*t is the constant 2t, so advancing from n to n+1 costs O(1) with no
trig-argument reduction.  The recurrence state is carried in compensated
(hi, lo) float pairs and re-anchored from the exact rational phase every
RENORM_PERIOD steps, which caps drift far below the test tolerances.  Terms
are accumulated with Kahan summation in a fixed left-to-right order; grids are
evaluated in lockstep over the same code path, so grid results are
bit-identical to pointwise calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .errors import AliasingError, WorkBudgetError

TWO_PI = 2.0 * math.pi

#: steps between exact re-anchorings of the recurrence state
RENORM_PERIOD = 1 << 16

#: default cap on points*N for direct grid evaluation
DEFAULT_WORK_BUDGET = 1 << 27


def frac(u: float) -> float:
    """Fractional part in [0, 1)."""
    return u - math.floor(u)


@dataclass(frozen=True)
class TorusPoint:
    """A point (x, t) on the torus [0,1)^2; constructors reduce mod 1."""

    x: float
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", frac(float(self.x)))
        object.__setattr__(self, "t", frac(float(self.t)))


@dataclass(frozen=True)
class GridSpec:
    """Equispaced samples on [0,1): node k sits at (k + points*offset)/points.

    `offset` is an absolute shift in [0, 1/points); the default is half a
    step (midpoint rule), which avoids sampling exactly at the rational
    centers where integrands are atypically large.
    """

    points: int
    offset: float | None = None

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("points must be >= 1")
        if self.offset is None:
            object.__setattr__(self, "offset", 0.5 / self.points)
        elif not 0.0 <= self.offset < 1.0 / self.points:
            raise ValueError("offset must lie in [0, 1/points)")

    @property
    def step(self) -> float:
        return 1.0 / self.points

    @property
    def shift(self) -> float:
        """Offset expressed as a fraction of one step, in [0, 1)."""
        return self.offset * self.points

    def nodes(self) -> np.ndarray:
        return (np.arange(self.points, dtype=np.float64) + self.shift) / self.points


class TrigPoly:
    """Trigonometric polynomial sum_n c_n e(n*theta) with finite support.

    Coefficients are stored as a frequency -> value map; exact zero entries
    are dropped.  Coefficient arithmetic keeps whatever numeric type it is
    given (complex, Fraction, ...); evaluation casts to complex.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, complex]):
        self.coeffs = {int(n): c for n, c in coeffs.items() if c != 0}

    @property
    def degree(self) -> int:
        return max((abs(n) for n in self.coeffs), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, TrigPoly) and self.coeffs == other.coeffs

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0) + c
        return TrigPoly(out)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0) - c
        return TrigPoly(out)

    def scaled(self, factor) -> "TrigPoly":
        return TrigPoly({n: factor * c for n, c in self.coeffs.items()})

    def derivative(self, k: int = 1) -> "TrigPoly":
        """k-th derivative in the frequency multiplier convention c_n -> n^k c_n.

        The multiplier drops the common (2*pi*i)^k factor, which scales both
        sides of any norm inequality identically and keeps |P^(k)| unchanged
        up to a unimodular constant.
        """
        if k < 0:
            raise ValueError("k must be >= 0")
        return TrigPoly({n: (n**k) * c for n, c in self.coeffs.items()})

    def eval_at(self, theta: float) -> complex:
        return sum(
            complex(c) * np.exp(2j * np.pi * ((n * theta) % 1.0))
            for n, c in sorted(self.coeffs.items())
        )

    def __repr__(self) -> str:
        return f"TrigPoly({self.coeffs!r})"


# ---------------------------------------------------------------------------
# compensated float-pair helpers (arrays)
# ---------------------------------------------------------------------------


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    # valid when |a| >= |b|, which holds for all call sites below
    s = a + b
    return s, b - (s - a)


def _pair_add_pair(ahi, alo, bhi, blo):
    s, e = _two_sum(ahi, bhi)
    e = e + (alo + blo)
    return _fast_two_sum(s, e)


def _pair_add_float(ahi, alo, b):
    s, e = _two_sum(ahi, b)
    e = e + alo
    return _fast_two_sum(s, e)


def _pair_reduce(hi, lo):
    # phases stay in [0, 2); subtracting the floor is exact there
    f = np.floor(hi)
    return hi - f, lo


def _exact_pairs(n: int, xf: list[Fraction], tf: list[Fraction]):
    """Exact phase and first-difference pairs at index n, per element."""
    phi_hi = np.empty(len(xf))
    phi_lo = np.empty(len(xf))
    del_hi = np.empty(len(xf))
    del_lo = np.empty(len(xf))
    for i, (fx, ft) in enumerate(zip(xf, tf)):
        p = (n * fx + n * n * ft) % 1
        hi = float(p)
        phi_hi[i] = hi
        phi_lo[i] = float(p - Fraction(hi))
        d = (fx + (2 * n + 1) * ft) % 1
        hi = float(d)
        del_hi[i] = hi
        del_lo[i] = float(d - Fraction(hi))
    return phi_hi, phi_lo, del_hi, del_lo


def _lockstep_weyl(
    N: int,
    x: np.ndarray,
    t: np.ndarray,
    renorm_period: int = RENORM_PERIOD,
) -> np.ndarray:
    """S_N at each (x[i], t[i]), advanced in lockstep over all elements."""
    if N < 1:
        raise ValueError("N must be >= 1")
    x = np.asarray(x, dtype=np.float64).ravel()
    t = np.asarray(t, dtype=np.float64).ravel()
    if x.shape != t.shape:
        raise ValueError("x and t must have matching shapes")
    xf = [Fraction(v) % 1 for v in x.tolist()]
    tf = [Fraction(v) % 1 for v in t.tolist()]

    phi_hi, phi_lo, del_hi, del_lo = _exact_pairs(1, xf, tf)
    # 2t mod 1 is exact in float64 (power-of-two scaling, Sterbenz subtraction)
    two_t = np.array([float((2 * ft) % 1) for ft in tf])

    sum_re = np.zeros_like(phi_hi)
    sum_im = np.zeros_like(phi_hi)
    comp_re = np.zeros_like(phi_hi)
    comp_im = np.zeros_like(phi_hi)

    for n in range(1, N + 1):
        if n > 1 and n % renorm_period == 0:
            phi_hi, phi_lo, del_hi, del_lo = _exact_pairs(n, xf, tf)
        w = TWO_PI * (phi_hi + phi_lo)
        term_re = np.cos(w)
        term_im = np.sin(w)
        # Kahan step, fixed left-to-right order in n
        y = term_re - comp_re
        s = sum_re + y
        comp_re = (s - sum_re) - y
        sum_re = s
        y = term_im - comp_im
        s = sum_im + y
        comp_im = (s - sum_im) - y
        sum_im = s
        if n < N:
            # delta currently holds phase(n+1) - phase(n); apply it first,
            # then bump it by the constant second difference 2t
            phi_hi, phi_lo = _pair_add_pair(phi_hi, phi_lo, del_hi, del_lo)
            phi_hi, phi_lo = _pair_reduce(phi_hi, phi_lo)
            del_hi, del_lo = _pair_add_float(del_hi, del_lo, two_t)
            del_hi, del_lo = _pair_reduce(del_hi, del_lo)
    return sum_re + 1j * sum_im


def weyl_sum(N: int, p: TorusPoint) -> complex:
    """S_N(x, t) = sum_{n=1}^{N} e(n x + n^2 t).

    The sum starts at n=1; a variant starting at n=0 differs by the single
    unimodular term 1, which every asymptotic check here absorbs.
    |result| <= N always.
    """
    return complex(_lockstep_weyl(N, np.array([p.x]), np.array([p.t]))[0])


def weyl_sum_points(
    N: int,
    xs: np.ndarray,
    ts: np.ndarray,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> np.ndarray:
    """S_N over paired coordinate arrays; same code path as `weyl_sum`."""
    xs = np.asarray(xs, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    if xs.size * N > work_budget:
        raise WorkBudgetError(
            f"points*N = {xs.size * N} exceeds work budget {work_budget}"
        )
    return _lockstep_weyl(N, xs, ts).reshape(xs.shape)


def weyl_sum_grid(
    N: int,
    x: float,
    t_grid: GridSpec,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> np.ndarray:
    """S_N(x, t_k) for every node t_k of the grid.

    Lockstep evaluation advances all grid nodes through the identical
    sequence of float operations, so each entry is bit-identical to the
    corresponding pointwise `weyl_sum` call.
    """
    if t_grid.points * N > work_budget:
        raise WorkBudgetError(
            f"points*N = {t_grid.points * N} exceeds work budget {work_budget}"
        )
    ts = t_grid.nodes()
    xs = np.full_like(ts, frac(float(x)))
    return _lockstep_weyl(N, xs, ts)


def weyl_sum_reference(N: int, x: float, t: float) -> complex:
    """Naive term-by-term oracle: exact rational phase reduction per term and
    exact (fsum) accumulation.  Slow; used to pin down recurrence drift.
    """
    fx = Fraction(float(x)) % 1
    ft = Fraction(float(t)) % 1
    re = []
    im = []
    for n in range(1, N + 1):
        ph = float((n * fx + n * n * ft) % 1)
        re.append(math.cos(TWO_PI * ph))
        im.append(math.sin(TWO_PI * ph))
    return complex(math.fsum(re), math.fsum(im))


def trigpoly_eval_direct(P: TrigPoly, grid: GridSpec) -> np.ndarray:
    """Direct O(terms * points) evaluation; the oracle for the fast path."""
    theta = grid.nodes()
    vals = np.zeros(grid.points, dtype=np.complex128)
    for n, c in sorted(P.coeffs.items()):
        vals += complex(c) * np.exp(2j * np.pi * np.mod(n * theta, 1.0))
    return vals


def trigpoly_eval_grid(
    P: TrigPoly, grid: GridSpec, alias_free: bool = False
) -> np.ndarray:
    """Values P(theta_k) on the grid via an FFT of the coefficient array.

    Frequencies fold mod grid.points, which reproduces direct summation
    exactly on the nodes.  When `alias_free` is set the grid must satisfy
    points >= 2*degree + 1 so no two frequencies collide.
    """
    G = grid.points
    if alias_free and G < 2 * P.degree + 1:
        raise AliasingError(
            f"grid of {G} points undersamples degree {P.degree} "
            f"(needs >= {2 * P.degree + 1})"
        )
    buf = np.zeros(G, dtype=np.complex128)
    shift = grid.shift
    for n, c in sorted(P.coeffs.items()):
        # node theta_k = (k + shift)/G, so e(n theta_k) = e(n shift/G) e(nk/G)
        twist = np.exp(2j * np.pi * ((n * shift / G) % 1.0))
        buf[n % G] += complex(c) * twist
    return np.fft.ifft(buf) * G
