"""Major-arc decomposition and its numerical checks.

A major arc M(q,a,b) is the rectangle around (b/q, a/q) with half-widths
1e-2 * N^(eps-1) in x and 1e-2 * N^(eps-2) in t, for 1 <= a < q <= N^(1/2-eps)
coprime and 0 <= b < q.  On an admissible arc the Weyl sum has magnitude
comparable to N/sqrt(q); at the exact center it equals (N/q)|S(a,b,q)| up to
an O(q) remainder from the division algorithm.

Disjointness of the family is decided with exact rational arithmetic on the
centers, never by float comparison of nearby endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gauss
from .errors import InvariantViolation, ResolutionError
from .expsum import GridSpec, TorusPoint, weyl_sum, weyl_sum_points

ARC_WIDTH_FACTOR = 1e-2
MAX_EPS = 1e-2


@dataclass(frozen=True)
class FareyFraction:
    """Reduced fraction a/q locating a major-arc center in t.

    Requires 1 <= a < q and gcd(a, q) = 1.  The single exception (a=0, q=1)
    represents the t ~ 0 pseudo-arc used for desk checks; the standard
    enumeration never produces it.
    """

    a: int
    q: int

    def __post_init__(self):
        if self.a == 0 and self.q == 1:
            return  # the t ~ 0 pseudo-center
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if not 1 <= self.a < self.q:
            raise ValueError("need 1 <= a < q")
        if math.gcd(self.a, self.q) != 1:
            raise ValueError("a and q must be coprime")

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.q)


@dataclass(frozen=True)
class MajorArc:
    """The rectangle I(b,q) x I(a,q) with its defining parameters."""

    center_t: FareyFraction
    b: int
    N: int
    eps: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not 0.0 <= self.eps <= MAX_EPS:
            raise ValueError(f"eps must lie in [0, {MAX_EPS}]")
        if not 0 <= self.b < self.q:
            raise ValueError("need 0 <= b < q")
        if self.q > self.N ** (0.5 - self.eps):
            raise ValueError("q exceeds N^(1/2 - eps)")

    @property
    def q(self) -> int:
        return self.center_t.q

    @property
    def a(self) -> int:
        return self.center_t.a

    @property
    def half_width_x(self) -> float:
        return ARC_WIDTH_FACTOR * self.N ** (self.eps - 1.0)

    @property
    def half_width_t(self) -> float:
        return ARC_WIDTH_FACTOR * self.N ** (self.eps - 2.0)

    @property
    def center_x(self) -> Fraction:
        return Fraction(self.b, self.q)

    def is_admissible(self) -> bool:
        """True when (q, b) lies in the nonvanishing Gauss-sum parity class."""
        return gauss.admissible_b(self.q).admits(self.b)

    def xi_tau(self, p: TorusPoint) -> tuple[float, float]:
        """Offsets (xi, tau) = (x - b/q, t - a/q) of a point from the center."""
        return (
            p.x - self.b / self.q,
            p.t - self.center_t.a / self.center_t.q,
        )


def enumerate_major_arcs(
    N: int,
    eps: float,
    qmax: int,
    admissible_only: bool = False,
    include_t_zero: bool = False,
    allow_eps_zero: bool = False,
) -> list[MajorArc]:
    """All arcs with 2 <= q <= qmax, 1 <= a < q coprime, 0 <= b < q.

    `admissible_only` keeps only the (q, b) parity classes with nonvanishing
    Gauss sum.  `include_t_zero` appends the out-of-family pseudo-arc at
    (0, 0).  eps = 0 (the variant used for the double-integral bound) must be
    opted into with `allow_eps_zero`.
    """
    if eps == 0.0 and not allow_eps_zero:
        raise ValueError("eps = 0 requires allow_eps_zero=True")
    if not (0.0 < eps <= MAX_EPS or (eps == 0.0 and allow_eps_zero)):
        raise ValueError(f"eps must lie in (0, {MAX_EPS}] (or 0 when allowed)")
    if qmax > int(N ** (0.5 - eps)):
        raise ValueError("qmax exceeds floor(N^(1/2-eps))")
    arcs = []
    for q in range(2, qmax + 1):
        parity = gauss.admissible_b(q)
        for a in range(1, q):
            if math.gcd(a, q) != 1:
                continue
            for b in range(q):
                if admissible_only and not parity.admits(b):
                    continue
                arcs.append(MajorArc(FareyFraction(a, q), b, N, eps))
    if include_t_zero:
        arcs.append(MajorArc(FareyFraction(0, 1), 0, N, eps))
    return arcs


# ---------------------------------------------------------------------------
# disjointness
# ---------------------------------------------------------------------------


def _next_up(v: float) -> float:
    return math.nextafter(v, math.inf)


def _intervals_overlap(c1: Fraction, c2: Fraction, w1: float, w2: float) -> bool:
    """Closed intervals [c - w, c + w] overlap; exact center distance against
    an outward-rounded width sum, so float noise can never claim disjointness.
    """
    return abs(c1 - c2) <= Fraction(_next_up(_next_up(w1 + w2)))


def check_disjoint(arcs: list[MajorArc]) -> tuple[bool, tuple[MajorArc, MajorArc] | None]:
    """True iff all pairwise rectangle intersections are empty.

    Arcs are grouped by exact t-center; only groups adjacent in sorted order
    can meet in t (all t-halfwidths are equal), and within a group only
    x-neighbours can meet, so the scan is near-linear.
    Returns (flag, first overlapping pair or None).
    """
    if not arcs:
        return True, None
    N, eps = arcs[0].N, arcs[0].eps
    for arc in arcs:
        if arc.N != N or arc.eps != eps:
            raise ValueError("all arcs must share the same N and eps")
    w_x = arcs[0].half_width_x
    w_t = arcs[0].half_width_t

    groups: dict[Fraction, list[MajorArc]] = {}
    for arc in arcs:
        groups.setdefault(arc.center_t.value, []).append(arc)
    ordered = sorted(groups.items(), key=lambda kv: kv[0])

    def x_overlap_pair(members: list[MajorArc], others: list[MajorArc]):
        # equal halfwidths: only neighbours in x-sorted order can meet
        merged = sorted(members + others, key=lambda m: m.center_x)
        for left, right in zip(merged, merged[1:]):
            if _intervals_overlap(left.center_x, right.center_x, w_x, w_x):
                return left, right
        return None

    for idx, (t_center, members) in enumerate(ordered):
        if len(members) > 1:
            pair = x_overlap_pair(members, [])
            if pair:
                return False, pair
        if idx + 1 < len(ordered):
            t_next, nxt = ordered[idx + 1]
            if _intervals_overlap(t_center, t_next, w_t, w_t):
                pair = x_overlap_pair(members, nxt)
                if pair:
                    return False, pair
    return True, None


# ---------------------------------------------------------------------------
# Fresnel-type oscillatory integral
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FresnelResult:
    value: complex
    error_estimate: float
    converged: bool
    panels: int


def _phase_integrand(z: np.ndarray, tau: float, xi: float) -> np.ndarray:
    return np.exp(2j * np.pi * (tau * z * z + xi * z))


def fresnel_integral(
    z0: float,
    z1: float,
    tau: float,
    xi: float,
    tol: float = 1e-8,
    max_panels: int = 200_000,
) -> FresnelResult:
    """integral_{z0}^{z1} e(tau z^2 + xi z) dz by adaptive Simpson panels.

    The initial partition is sized by the total phase variation
    integral |2 tau z + xi| dz (splitting at the stationary point), so each
    starting panel holds a bounded number of oscillations; panels are then
    bisected until the local Richardson error estimate meets the tolerance.
    On budget exhaustion the running estimate is returned with
    converged=False.
    """
    if not z0 < z1:
        raise ValueError("need z0 < z1")

    def phase_speed(z: float) -> float:
        return abs(2.0 * tau * z + xi)

    # total phase variation in turns, exact for the piecewise-linear speed
    zs = [z0, z1]
    if tau != 0.0:
        z_star = -xi / (2.0 * tau)
        if z0 < z_star < z1:
            zs = [z0, z_star, z1]
    turns = sum(
        0.5 * (phase_speed(lo) + phase_speed(hi)) * (hi - lo)
        for lo, hi in zip(zs, zs[1:])
    )
    n0 = int(min(max(16, math.ceil(4.0 * turns)), 4096))

    def simpson(a: float, fa: complex, b: float, fb: complex, fm: complex) -> complex:
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    width = z1 - z0
    edges = np.linspace(z0, z1, n0 + 1)
    stack = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        f_lo, f_mid, f_hi = (
            complex(_phase_integrand(np.array([v]), tau, xi)[0]) for v in (lo, mid, hi)
        )
        stack.append((lo, hi, f_lo, f_mid, f_hi, simpson(lo, f_lo, hi, f_hi, f_mid)))

    total = 0.0 + 0.0j
    err_total = 0.0
    panels = n0
    converged = True
    while stack:
        lo, hi, f_lo, f_mid, f_hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_lm = complex(_phase_integrand(np.array([lm]), tau, xi)[0])
        f_rm = complex(_phase_integrand(np.array([rm]), tau, xi)[0])
        left = simpson(lo, f_lo, mid, f_mid, f_lm)
        right = simpson(mid, f_mid, hi, f_hi, f_rm)
        err = abs(left + right - whole) / 15.0
        if err <= tol * (hi - lo) / width or panels >= max_panels:
            total += left + right + (left + right - whole) / 15.0
            err_total += err
            if err > tol * (hi - lo) / width:
                converged = False
        else:
            panels += 2
            stack.append((lo, mid, f_lo, f_lm, f_mid, left))
            stack.append((mid, hi, f_mid, f_rm, f_hi, right))
    return FresnelResult(total, err_total, converged, panels)


def fresnel_correction_term(
    N: int, q: int, s: int, tau: float, xi: float, panels_per_period: int = 8
) -> complex:
    """The sawtooth correction (2 pi i / q) * integral_{q+s}^{N+s}
    frac((z-s)/q) (2 q z tau + xi) e(z^2 tau + z xi) dz.

    The integrand jumps where (z-s)/q crosses an integer, so the quadrature
    is composite Simpson on each smooth piece.  Its magnitude is what the
    pointwise lower-bound argument controls by (10 pi / q) N^eps.
    """
    if N <= q:
        raise ValueError("need N > q")
    breaks = [float(q + s)]
    m = 2
    while s + m * q < N + s:
        breaks.append(float(s + m * q))
        m += 1
    breaks.append(float(N + s))

    def integrand(z: np.ndarray) -> np.ndarray:
        saw = (z - s) / q
        saw = saw - np.floor(saw)
        return saw * (2.0 * q * tau * z + xi) * _phase_integrand(z, tau, xi)

    total = 0.0 + 0.0j
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        turns = abs(tau) * (hi * hi - lo * lo) + abs(xi) * (hi - lo)
        n = 2 * max(4, int(math.ceil(panels_per_period * (turns + 1))))
        z = np.linspace(lo, hi, n + 1)
        # open at the right break point: the sawtooth is left-continuous there
        vals = integrand(z)
        vals[-1] = complex(integrand(np.array([hi - 1e-12 * max(1.0, hi)]))[0])
        w = np.ones(n + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        total += (hi - lo) / (3.0 * n) * np.sum(w * vals)
    return 2j * np.pi / q * total


# ---------------------------------------------------------------------------
# arc checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArcCenterCheck:
    measured: float
    predicted: float
    ratio: float


def arc_center_sum_check(arc: MajorArc, error_constant: float = 4.0) -> ArcCenterCheck:
    """|S_N(b/q, a/q)| against (N/q)|S(a,b,q)|.

    The division algorithm makes the two equal up to a remainder of at most
    q unimodular terms plus the truncated fractional block, so
    |measured - predicted| <= error_constant * q is enforced.
    Inadmissible arcs (vanishing Gauss sum) are rejected: the ratio would be
    meaningless.
    """
    if not arc.is_admissible():
        raise ValueError(
            f"arc (q={arc.q}, a={arc.a}, b={arc.b}) has vanishing Gauss sum"
        )
    params = gauss.GaussSumParams(arc.a, arc.b, arc.q)
    predicted = arc.N / arc.q * abs(gauss.gauss_sum_direct(params))
    measured = abs(weyl_sum(arc.N, TorusPoint(arc.b / arc.q, arc.a / arc.q)))
    if abs(measured - predicted) > error_constant * arc.q:
        raise InvariantViolation(
            f"center law violated at (q={arc.q}, a={arc.a}, b={arc.b}, N={arc.N}): "
            f"|{measured:.6g} - {predicted:.6g}| > {error_constant}*q"
        )
    return ArcCenterCheck(measured, predicted, measured / predicted)


def center_law_sweep(
    arcs: list[MajorArc], error_constant: float = 4.0
) -> list[tuple[MajorArc, ArcCenterCheck]]:
    """`arc_center_sum_check` over many arcs with one batched evaluation.

    All arc centers advance through the lockstep recurrence together, so each
    measured value is bit-identical to the pointwise check while the sweep
    runs in one pass.
    """
    if not arcs:
        return []
    N = arcs[0].N
    for arc in arcs:
        if arc.N != N:
            raise ValueError("all arcs must share the same N")
        if not arc.is_admissible():
            raise ValueError(
                f"arc (q={arc.q}, a={arc.a}, b={arc.b}) has vanishing Gauss sum"
            )
    xs = np.array([arc.b / arc.q for arc in arcs])
    ts = np.array([arc.a / arc.q for arc in arcs])
    measured = np.abs(weyl_sum_points(N, xs, ts, work_budget=max(1 << 27, len(arcs) * N)))
    out = []
    for arc, m in zip(arcs, measured):
        params = gauss.GaussSumParams(arc.a, arc.b, arc.q)
        predicted = N / arc.q * abs(gauss.gauss_sum_direct(params))
        if abs(m - predicted) > error_constant * arc.q:
            raise InvariantViolation(
                f"center law violated at (q={arc.q}, a={arc.a}, b={arc.b}, N={N}): "
                f"|{m:.6g} - {predicted:.6g}| > {error_constant}*q"
            )
        out.append((arc, ArcCenterCheck(float(m), predicted, float(m) / predicted)))
    return out


@dataclass(frozen=True)
class ArcScanResult:
    min_abs: float
    max_abs: float
    argmin: TorusPoint
    argmax: TorusPoint


def arc_sup_inf_scan(
    arc: MajorArc,
    x_grid: GridSpec = GridSpec(33),
    t_grid: GridSpec = GridSpec(33),
) -> ArcScanResult:
    """Extremes of |S_N| over a sub-grid of the arc rectangle.

    The grids are mapped affinely onto the arc; the default half-step 33x33
    grid passes through the center.  Grid steps must resolve the oscillation
    scales: t-step <= 1/(8 N^2) and x-step <= 1/(8 N) inside the arc.
    """
    N = arc.N
    t_step = 2.0 * arc.half_width_t / t_grid.points
    x_step = 2.0 * arc.half_width_x / x_grid.points
    if t_step > 1.0 / (8.0 * N * N):
        raise ResolutionError(f"arc t-step {t_step:.3g} exceeds 1/(8N^2)")
    if x_step > 1.0 / (8.0 * N):
        raise ResolutionError(f"arc x-step {x_step:.3g} exceeds 1/(8N)")
    cx = arc.b / arc.q
    ct = arc.a / arc.q
    xs = cx + (2.0 * x_grid.nodes() - 1.0) * arc.half_width_x
    ts = ct + (2.0 * t_grid.nodes() - 1.0) * arc.half_width_t
    X, T = np.meshgrid(xs, ts, indexing="ij")
    mags = np.abs(weyl_sum_points(N, X.ravel(), T.ravel()))
    i_min = int(np.argmin(mags))
    i_max = int(np.argmax(mags))
    return ArcScanResult(
        min_abs=float(mags[i_min]),
        max_abs=float(mags[i_max]),
        argmin=TorusPoint(X.ravel()[i_min], T.ravel()[i_min]),
        argmax=TorusPoint(X.ravel()[i_max], T.ravel()[i_max]),
    )


def ik_upper_bound(N: int, q: int) -> float:
    """2 N / sqrt(q) + sqrt(q) log q, the classical pointwise arc bound for
    the sum started at n=0; our n=1 convention costs one extra unit."""
    return 2.0 * N / math.sqrt(q) + math.sqrt(q) * math.log(q)
