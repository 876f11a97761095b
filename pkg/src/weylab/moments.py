"""L^alpha norms of Weyl sums and their growth exponents.

Even moments are Diophantine counts: integral |S_N|^{2k} over the torus
equals the number of 2k-tuples in [1,N] whose first k entries match the last
k in both linear and quadratic sums.  These are computed exactly by bucketing
k-tuples on the key (sum, sum of squares).  Non-even powers go through
midpoint quadrature with the t-step tied to the fastest phase derivative
(step <= 1/(8 N^2)), with the x-dependence evaluated by an FFT per fixed t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _iter_product

import numpy as np
import scipy.fft as _fft

from . import parallel
from .circle import MajorArc
from .errors import ResolutionError, WorkBudgetError

#: default caps, overridable per call
DOUBLE_N_CAP = 2048
EXACT_CAP = {2: 10_000, 3: 1024}
DEFAULT_WORK_BUDGET = 1 << 31

MODE_DOUBLE = "double"


def marginal_mode(x) -> str:
    return f"marginal(x={x})"


def arc_mode(arc: MajorArc) -> str:
    return f"arc(q={arc.q},a={arc.a},b={arc.b})"


@dataclass(frozen=True)
class NormSample:
    """One norm computation: the integral value (not its alpha-th root)."""

    N: int
    alpha: float
    mode: str
    value: float
    t_step: float
    x_step: float
    unsafe: bool = False

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("integral value must be >= 0")


@dataclass(frozen=True)
class FitResult:
    """Least-squares slope of log(value) against log(N)."""

    exponent: float
    intercept: float
    max_residual: float
    with_log_factor: bool


# ---------------------------------------------------------------------------
# exact even moments
# ---------------------------------------------------------------------------


def _exact_even_brute(N: int, k: int) -> int:
    counts: dict[tuple[int, int], int] = {}
    for tup in _iter_product(range(1, N + 1), repeat=k):
        key = (sum(tup), sum(v * v for v in tup))
        counts[key] = counts.get(key, 0) + 1
    return sum(c * c for c in counts.values())


def _pair_weight_counts(s1: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """(s2 keys, ordered-pair weights) for n1 + n2 = s1, 1 <= n1 <= n2 <= N."""
    lo = max(1, s1 - N)
    hi = s1 // 2
    n1 = np.arange(lo, hi + 1, dtype=np.int64)
    n2 = s1 - n1
    w = np.where(n1 == n2, 1.0, 2.0)
    return n1 * n1 + n2 * n2, w


def _triple_weight_counts(s1: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """(s2 keys, ordered-triple weights) for sorted triples summing to s1."""
    lo1 = max(1, s1 - 2 * N)
    hi1 = s1 // 3
    n1 = np.arange(lo1, hi1 + 1, dtype=np.int64)
    lo2 = np.maximum(n1, s1 - n1 - N)
    hi2 = (s1 - n1) // 2
    lens = np.maximum(hi2 - lo2 + 1, 0)
    keep = lens > 0
    n1, lo2, lens = n1[keep], lo2[keep], lens[keep]
    if len(n1) == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    total = int(lens.sum())
    starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
    r1 = np.repeat(n1, lens)
    r2 = np.repeat(lo2, lens) + (np.arange(total) - np.repeat(starts, lens))
    r3 = s1 - r1 - r2
    eq12 = r1 == r2
    eq23 = r2 == r3
    w = np.where(eq12 & eq23, 1.0, np.where(eq12 | eq23, 3.0, 6.0))
    return r1 * r1 + r2 * r2 + r3 * r3, w


def moment_exact_even(
    N: int, k: int, method: str = "hashed", cap: int | None = None
) -> int:
    """Exact integral of |S_N|^{2k} over the torus, as a Diophantine count.

    Counts ordered 2k-tuples with matching (sum, sum of squares) between the
    two halves: buckets of k-tuples are keyed on that pair and the squared
    bucket sizes are added up.  Exact integer result.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if k not in (2, 3):
        raise ValueError("k must be 2 (alpha=4) or 3 (alpha=6)")
    if method == "brute":
        return _exact_even_brute(N, k)
    if method != "hashed":
        raise ValueError("method must be 'hashed' or 'brute'")
    limit = cap if cap is not None else EXACT_CAP[k]
    if N > limit:
        raise WorkBudgetError(f"N={N} exceeds the k={k} exact-moment cap {limit}")
    keyed = _pair_weight_counts if k == 2 else _triple_weight_counts
    total = 0.0
    for s1 in range(k, k * N + 1):
        keys, weights = keyed(s1, N)
        if len(keys) == 0:
            continue
        offs = keys - keys.min()
        buckets = np.bincount(offs, weights=weights)
        # every operand is an integer below 2^53, so the dot product is exact
        total += float(buckets @ buckets)
    return int(total)


# ---------------------------------------------------------------------------
# quadrature machinery
# ---------------------------------------------------------------------------


def _twisted_square_coeffs(N: int, amplitudes: np.ndarray, G: int, shift: float) -> np.ndarray:
    """Coefficient buffer placing a_k at frequency k^2 on a G-point grid with
    node offset shift/G; requires G > N^2 so squares do not collide."""
    k = np.arange(1, N + 1, dtype=np.int64)
    k2 = k * k
    buf = np.zeros(G, dtype=np.complex128)
    twist = np.exp(2j * np.pi * np.mod(k2 * (shift / G), 1.0))
    buf[k2 % G] = amplitudes * twist
    return buf


def _unit_phases(freqs: np.ndarray, x) -> np.ndarray:
    """e(freq * x) with exact reduction when x is a Fraction."""
    if isinstance(x, Fraction):
        ph = ((freqs % x.denominator) * (x.numerator % x.denominator)) % x.denominator
        return np.exp(2j * np.pi * ph / x.denominator)
    return np.exp(2j * np.pi * np.mod(freqs * float(x), 1.0))


def marginal_values(N: int, x, t_points: int, shift: float = 0.5) -> np.ndarray:
    """S_N(x, t_j) on a t_points grid with nodes (j + shift)/t_points."""
    amps = _unit_phases(np.arange(1, N + 1, dtype=np.int64), x)
    buf = _twisted_square_coeffs(N, amps, t_points, shift)
    return _fft.ifft(buf, norm="forward")


def _double_grid_scan(
    N: int,
    t_points: int,
    x_points: int,
    consume,
    threads: int = 1,
    chunk_rows: int = 512,
) -> np.ndarray:
    """Accumulate consume(|S|^2 block) over the full (t, x) product grid.

    Rows are t-nodes (half-step), columns x-nodes (half-step, FFT per row
    block).  Chunk boundaries are fixed by row index, partial results are
    combined with a pairwise tree, so the outcome does not depend on the
    number of threads.
    """
    n = np.arange(1, N + 1, dtype=np.int64)
    n2 = n * n
    x_twist = np.exp(2j * np.pi * (0.5 * n / x_points))
    two_gt = 2 * t_points

    def work(_idx: int, lo: int, hi: int) -> np.ndarray:
        j = np.arange(lo, hi, dtype=np.int64)
        num = (n2[None, :] * (2 * j[:, None] + 1)) % two_gt
        coeffs = np.exp(2j * np.pi * (num / two_gt)) * x_twist[None, :]
        buf = np.zeros((hi - lo, x_points), dtype=np.complex128)
        buf[:, 1 : N + 1] = coeffs
        vals = _fft.ifft(buf, axis=1, norm="forward")
        return consume(vals.real**2 + vals.imag**2)

    ranges = parallel.chunk_ranges(t_points, chunk_rows)
    return parallel.run_chunked(ranges, work, lambda a, b: a + b, threads=threads)


def _power_sums(u: np.ndarray, alphas: list[float]) -> np.ndarray:
    out = np.empty(len(alphas))
    for i, alpha in enumerate(alphas):
        if alpha == 2.0:
            out[i] = float(np.sum(u))
        elif alpha == 4.0:
            out[i] = float(np.sum(u * u))
        elif alpha == 6.0:
            out[i] = float(np.sum(u * u * u))
        else:
            out[i] = float(np.sum(u ** (0.5 * alpha)))
    return out


def _check_double_grids(
    N: int, t_points: int, x_points: int, unsafe: bool, work_budget: int
) -> None:
    if N > DOUBLE_N_CAP:
        raise WorkBudgetError(f"N={N} exceeds the double-quadrature cap {DOUBLE_N_CAP}")
    if t_points * x_points > work_budget:
        raise WorkBudgetError(
            f"{t_points}*{x_points} grid evaluations exceed budget {work_budget}"
        )
    if unsafe:
        return
    if 1.0 / t_points > 1.0 / (8.0 * N * N):
        raise ResolutionError(f"t-step 1/{t_points} exceeds 1/(8 N^2) for N={N}")
    if 1.0 / x_points > 1.0 / (8.0 * N):
        raise ResolutionError(f"x-step 1/{x_points} exceeds 1/(8 N) for N={N}")


def double_moment_sweep(
    N: int,
    alphas: list[float],
    t_points: int | None = None,
    x_points: int | None = None,
    unsafe: bool = False,
    threads: int = 1,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> list[NormSample]:
    """Double-mode integrals for several alpha in one pass over the grid."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if any(a <= 0 for a in alphas):
        raise ValueError("alpha must be > 0")
    t_points = 8 * N * N if t_points is None else t_points
    x_points = 8 * N if x_points is None else x_points
    _check_double_grids(N, t_points, x_points, unsafe, work_budget)
    sums = _double_grid_scan(
        N, t_points, x_points, lambda u: _power_sums(u, alphas), threads=threads
    )
    scale = 1.0 / (t_points * x_points)
    return [
        NormSample(N, a, MODE_DOUBLE, float(s * scale), 1.0 / t_points, 1.0 / x_points, unsafe)
        for a, s in zip(alphas, sums)
    ]


def _arc_values(arc: MajorArc, t_points: int, shift: float) -> np.ndarray:
    """|S_N| over a t-grid across the arc interval I(a,q) at x = b/q, with
    exact rational phases at the center plus the small offset contribution."""
    N, q, a, b = arc.N, arc.q, arc.a, arc.b
    n = np.arange(1, N + 1, dtype=np.int64)
    base = ((a * ((n * n) % q) + b * (n % q)) % q) / q
    taus = (2.0 * (np.arange(t_points) + shift) / t_points - 1.0) * arc.half_width_t
    phases = base[None, :] + taus[:, None] * (n * n)[None, :].astype(np.float64)
    return np.abs(np.exp(2j * np.pi * phases).sum(axis=1))


def moment_quadrature(
    N: int,
    alpha: float,
    mode: str = MODE_DOUBLE,
    x=None,
    arc: MajorArc | None = None,
    t_points: int | None = None,
    x_points: int | None = None,
    unsafe: bool = False,
    threads: int = 1,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> NormSample:
    """Midpoint-rule value of the requested integral of |S_N|^alpha.

    mode "double": integral over the full torus; grids default to the
    oscillation-resolving sizes 8N^2 (t) and 8N (x).
    mode "marginal": t-integral at fixed x (pass x, ideally a Fraction).
    mode "arc": t-integral over the arc interval I(a,q) at x = b/q.
    Grid preconditions can be overridden with unsafe=True, which marks the
    returned sample.
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    if mode == MODE_DOUBLE:
        return double_moment_sweep(
            N, [alpha], t_points, x_points, unsafe, threads, work_budget
        )[0]
    if mode == "marginal":
        if x is None:
            raise ValueError("marginal mode needs x")
        t_points = 8 * N * N if t_points is None else t_points
        if t_points > work_budget:
            raise WorkBudgetError(f"{t_points} evaluations exceed budget {work_budget}")
        if not unsafe and 1.0 / t_points > 1.0 / (8.0 * N * N):
            raise ResolutionError(f"t-step 1/{t_points} exceeds 1/(8 N^2) for N={N}")
        vals = np.abs(marginal_values(N, x, t_points))
        value = float(np.mean(vals**alpha))
        return NormSample(N, alpha, marginal_mode(x), value, 1.0 / t_points, 0.0, unsafe)
    if mode == "arc":
        if arc is None:
            raise ValueError("arc mode needs an arc")
        if arc.N != N:
            raise ValueError("arc.N must match N")
        t_points = 129 if t_points is None else t_points
        width = 2.0 * arc.half_width_t
        if not unsafe and width / t_points > 1.0 / (8.0 * N * N):
            raise ResolutionError("arc t-grid does not resolve the oscillation scale")
        mags = _arc_values(arc, t_points, 0.5)
        value = float(np.mean(mags**alpha) * width)
        return NormSample(N, alpha, arc_mode(arc), value, width / t_points, 0.0, unsafe)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# scans, ratios, fits
# ---------------------------------------------------------------------------


def default_x_candidates(qmax: int, admissible_only: bool = False) -> list[Fraction]:
    """Reduced fractions b/q with q <= qmax, optionally filtered to the
    nonvanishing-Gauss-sum parity class of (q, b)."""
    from . import gauss

    seen = set()
    out = []
    for q in range(1, qmax + 1):
        parity = gauss.admissible_b(q)
        for b in range(q):
            if math.gcd(b, q) != 1 and not (b == 0 and q == 1):
                continue
            if admissible_only and not parity.admits(b):
                continue
            f = Fraction(b, q)
            if f not in seen:
                seen.add(f)
                out.append(f)
    return sorted(out)


def marginal_sup_scan(
    N: int,
    alpha: float,
    x_candidates: list[Fraction] | None = None,
    t_points: int | None = None,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> tuple[NormSample, Fraction]:
    """Largest marginal t-integral over a finite list of rational x.

    The near-extremizers sit at rationals with small denominator, so a
    rational-candidate scan replaces global optimization.  Candidates default
    to all b/q with q <= 7 in the admissible parity class.
    """
    if x_candidates is None:
        x_candidates = default_x_candidates(7, admissible_only=True)
    for x in x_candidates:
        if x.denominator > math.isqrt(N):
            raise ValueError(f"candidate {x} has q > sqrt(N)")
    best: NormSample | None = None
    best_x: Fraction | None = None
    for x in x_candidates:
        sample = moment_quadrature(
            N, alpha, mode="marginal", x=x, t_points=t_points, work_budget=work_budget
        )
        if best is None or sample.value > best.value:
            best, best_x = sample, x
    assert best is not None and best_x is not None
    return best, best_x


def rudin_ratio(
    N: int,
    alpha: float,
    coeff_mode: str = "constant",
    x=None,
    coeffs: np.ndarray | None = None,
    theta_points: int | None = None,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> float:
    """||sum a_k e(k^2 theta)||_alpha / ||...||_2 on the circle, alpha < 4.

    coeff_mode "constant": a_k = 1; "modulated": a_k = e(k x) (pass x);
    "decreasing": a positive nonincreasing sequence (pass coeffs).
    """
    if not 0 < alpha < 4:
        raise ValueError("alpha must lie in (0, 4)")
    if N < 1:
        raise ValueError("N must be >= 1")
    if coeff_mode == "constant":
        amps = np.ones(N, dtype=np.complex128)
    elif coeff_mode == "modulated":
        if x is None:
            raise ValueError("modulated mode needs x")
        amps = _unit_phases(np.arange(1, N + 1, dtype=np.int64), x)
    elif coeff_mode == "decreasing":
        if coeffs is None:
            raise ValueError("decreasing mode needs coeffs")
        amps = np.asarray(coeffs, dtype=np.float64)
        if len(amps) != N:
            raise ValueError("coeffs must have length N")
        if np.any(amps <= 0) or np.any(np.diff(amps) > 0):
            raise ValueError("coeffs must be positive and nonincreasing")
        amps = amps.astype(np.complex128)
    else:
        raise ValueError(f"unknown coeff_mode {coeff_mode!r}")
    G = 8 * N * N if theta_points is None else theta_points
    if G > work_budget:
        raise WorkBudgetError(f"{G} evaluations exceed budget {work_budget}")
    if 1.0 / G > 1.0 / (8.0 * N * N):
        raise ResolutionError(f"theta-step 1/{G} exceeds 1/(8 N^2)")
    buf = _twisted_square_coeffs(N, amps, G, 0.5)
    mags2 = np.abs(_fft.ifft(buf, norm="forward")) ** 2
    norm_a = float(np.mean(mags2 ** (0.5 * alpha))) ** (1.0 / alpha)
    norm_2 = math.sqrt(float(np.mean(mags2)))
    return norm_a / norm_2


def rudin_modulated_sup(
    N: int, alpha: float, qmax: int = 5, theta_points: int | None = None
) -> tuple[float, Fraction]:
    """max over x in {b/q : q <= qmax} of the modulated-coefficient ratio."""
    best, best_x = -1.0, Fraction(0)
    for x in default_x_candidates(qmax):
        r = rudin_ratio(N, alpha, "modulated", x=x, theta_points=theta_points)
        if r > best:
            best, best_x = r, x
    return best, best_x


def fit_exponent(samples: list[NormSample], divide_log: bool = False) -> FitResult:
    """Least-squares slope of log(value) (optionally log(value/log N))
    against log N.  Requires >= 3 samples with distinct N, one alpha, one mode.
    """
    if len(samples) < 3:
        raise ValueError("need at least 3 samples")
    Ns = [s.N for s in samples]
    if len(set(Ns)) != len(Ns):
        raise ValueError("samples must have distinct N")
    if len({s.alpha for s in samples}) != 1:
        raise ValueError("samples mix different alphas")
    if len({s.mode for s in samples}) != 1:
        raise ValueError("samples mix different modes")
    xs = np.log([s.N for s in samples])
    ys = np.array(
        [
            math.log(s.value) - (math.log(math.log(s.N)) if divide_log else 0.0)
            for s in samples
        ]
    )
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))), divide_log)


def level_set_fraction(
    N: int,
    a: float,
    b: float,
    t_points: int | None = None,
    x_points: int | None = None,
    threads: int = 1,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> float:
    """Fraction of grid points with a sqrt(N) <= |S_N| <= b sqrt(N).

    A finite-N illustration only; no limit value is asserted anywhere.
    """
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    t_points = 8 * N * N if t_points is None else t_points
    x_points = 8 * N if x_points is None else x_points
    # an illustration without a stated resolution contract: budget check only
    if t_points * x_points > work_budget:
        raise WorkBudgetError(
            f"{t_points}*{x_points} grid evaluations exceed budget {work_budget}"
        )
    lo = a * a * N
    hi = b * b * N
    counts = _double_grid_scan(
        N,
        t_points,
        x_points,
        lambda u: np.array([float(np.count_nonzero((u >= lo) & (u <= hi)))]),
        threads=threads,
    )
    return float(counts[0]) / (t_points * x_points)
