"""Dyadic Littlewood-Paley decomposition, square function, Bernstein-type
derivative inequalities, and the decreasing-coefficient ratio test for
quadratic-spectrum polynomials.

Dyadic block convention: block j > 0 holds frequencies 2^j <= n < 2^(j+1),
block j < 0 the mirrored negatives -2^|j| < n <= -2^(|j|-1), and block 0
holds n in {0, 1} (frequency 1 has to live somewhere; attaching it to the
constant block keeps the positive blocks aligned with powers of two).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, InvariantViolation
from .expsum import GridSpec, TrigPoly, trigpoly_eval_grid


def dyadic_block_index(n: int) -> int:
    """Block index of frequency n under the convention above."""
    if n in (0, 1):
        return 0
    if n > 1:
        return n.bit_length() - 1
    return -((-n).bit_length())


@dataclass(frozen=True)
class DyadicBlocks:
    """Coefficient-exact partition of a polynomial into dyadic pieces."""

    blocks: dict[int, TrigPoly]
    source_degree: int

    def reassemble(self) -> TrigPoly:
        out: dict[int, complex] = {}
        for piece in self.blocks.values():
            out.update(piece.coeffs)
        return TrigPoly(out)


def dyadic_split(P: TrigPoly) -> DyadicBlocks:
    """Split P by dyadic frequency block; reassembly reproduces P exactly
    (the blocks partition the coefficient map, no arithmetic happens)."""
    pieces: dict[int, dict[int, complex]] = {}
    for n, c in P.coeffs.items():
        pieces.setdefault(dyadic_block_index(n), {})[n] = c
    return DyadicBlocks(
        {j: TrigPoly(cs) for j, cs in sorted(pieces.items())}, P.degree
    )


def quadratic_block_split(P: TrigPoly) -> DyadicBlocks:
    """Split a polynomial supported on squares k^2 by the k-ranges
    D_j = [2^(j/2), 2^((j+1)/2)).

    k lands in D_j exactly when its frequency k^2 lands in dyadic block j,
    so this agrees block-by-block with `dyadic_split`.
    """
    pieces: dict[int, dict[int, complex]] = {}
    for n, c in P.coeffs.items():
        if n < 1 or math.isqrt(n) ** 2 != n:
            raise ValueError(f"frequency {n} is not a positive perfect square")
        k = math.isqrt(n)
        j = (k * k).bit_length() - 1  # floor(2 log2 k)
        pieces.setdefault(j, {})[n] = c
    return DyadicBlocks(
        {j: TrigPoly(cs) for j, cs in sorted(pieces.items())}, P.degree
    )


def poly_norm(P: TrigPoly, p: float, grid: GridSpec) -> float:
    """||P||_p by midpoint quadrature on the given grid."""
    if p <= 0:
        raise ValueError("p must be > 0")
    vals = np.abs(trigpoly_eval_grid(P, grid))
    return float(np.mean(vals**p)) ** (1.0 / p)


def square_function_norm(P: TrigPoly, alpha: float, grid: GridSpec) -> float:
    """|| (sum_j |S_j(P)|^2)^(1/2) ||_alpha over the dyadic blocks of P."""
    if alpha <= 1:
        raise ValueError("alpha must be > 1")
    if grid.points < 2 * P.degree + 1:
        raise AliasingError(
            f"grid of {grid.points} points undersamples degree {P.degree}"
        )
    acc = np.zeros(grid.points)
    for piece in dyadic_split(P).blocks.values():
        vals = trigpoly_eval_grid(piece, grid)
        acc += vals.real**2 + vals.imag**2
    return float(np.mean(acc ** (0.5 * alpha))) ** (1.0 / alpha)


@dataclass(frozen=True)
class BernsteinRecord:
    lhs: float
    rhs: float
    ratio: float


def _bernstein_grid(degree: int) -> GridSpec:
    # a multiple of 4*degree makes the quarter-period shift map the grid to
    # itself, so the pure-cosine equality case is exact on the nodes
    base = max(4 * max(degree, 1), 4)
    return GridSpec(base * max(1, -(-4096 // base)))

def bernstein_check(
    P: TrigPoly, p: float, k: int, grid: GridSpec | None = None
) -> BernsteinRecord:
    """Compare ||P^(k)||_p against (n!/(n-k)!) ||P||_p for n = degree(P).

    Differentiation is the frequency multiplier c_n -> n^k c_n (the common
    (2 pi i)^k factor cancels between the two sides).  Violations raise; the
    k = 1 bound is sharp exactly for pure top-degree cosines.
    """
    n = P.degree
    if k < 1:
        raise ValueError("k must be >= 1")
    if n == 0:
        # constants: derivative and bound both vanish identically
        return BernsteinRecord(0.0, 0.0, 0.0)
    if k > n:
        raise ValueError(f"k={k} exceeds degree {n}")
    if grid is None:
        grid = _bernstein_grid(n)
    lhs = poly_norm(P.derivative(k), p, grid)
    rhs = math.perm(n, k) * poly_norm(P, p, grid)
    if lhs > rhs * (1.0 + 1e-9):
        raise InvariantViolation(
            f"derivative bound violated: ||P^({k})||_{p} = {lhs:.12g} > "
            f"{math.perm(n, k)} * ||P||_{p} = {rhs:.12g}"
        )
    return BernsteinRecord(lhs, rhs, lhs / rhs if rhs else 0.0)


def cordoba_ratio(
    a: np.ndarray,
    ell: int,
    alpha: float,
    theta_points: int | None = None,
) -> float:
    """LHS/RHS of the decreasing-coefficient bound
    || sum k^{2 ell} a_k e(k^2 theta) ||_alpha <= C (sum k^{4 ell} a_k^2)^(1/2).

    Requires a positive nonincreasing sequence and alpha in [2, 4); the
    interesting content is the stability of the ratio across N.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or len(a) < 1:
        raise ValueError("a must be a nonempty 1-d sequence")
    if np.any(a <= 0):
        raise ValueError("a must be positive")
    if np.any(np.diff(a) > 0):
        raise ValueError("a must be nonincreasing")
    if not 2.0 <= alpha < 4.0:
        raise ValueError("alpha must lie in [2, 4)")
    N = len(a)
    k = np.arange(1, N + 1, dtype=np.float64)
    weighted = k ** (2 * ell) * a
    P = TrigPoly({int(kk * kk): complex(w) for kk, w in zip(range(1, N + 1), weighted)})
    G = 8 * N * N if theta_points is None else theta_points
    G = max(G, 2 * P.degree + 2)
    lhs = poly_norm(P, alpha, GridSpec(G))
    rhs = math.sqrt(float(np.sum(k ** (4 * ell) * a * a)))
    return lhs / rhs


def abel_block_identity(a: np.ndarray, j: int) -> tuple[TrigPoly, TrigPoly]:
    """Both sides of the summation-by-parts rearrangement of a D_j block.

    Left: sum_{k in D_j} a_k (T_k - T_{k-1}) with T_l = sum_{m<=l} m^2 e(m^2 t).
    Right: sum_{k in D_j} (a_k - a_{k+1}) T_k + a_{hi+1} T_hi - a_lo T_{lo-1}
    for D_j = [lo, hi].  Returns the two polynomials; they must be
    coefficient-identical whenever the coefficient type is exact.
    """
    a = list(a)
    N = len(a)
    # k is in D_j exactly when k^2 lies in dyadic block j
    members = [k for k in range(1, N) if (k * k).bit_length() - 1 == j]
    if not members:
        raise ValueError(f"block D_{j} is empty for N={N}")
    lo, hi = members[0], members[-1]

    def T(l: int) -> TrigPoly:
        return TrigPoly({m * m: m * m for m in range(1, l + 1)})

    left = TrigPoly({})
    for k in range(lo, hi + 1):
        left = left + (T(k) - T(k - 1)).scaled(a[k - 1])
    right = TrigPoly({})
    for k in range(lo, hi + 1):
        right = right + T(k).scaled(a[k - 1] - a[k])
    right = right + T(hi).scaled(a[hi]) - T(lo - 1).scaled(a[lo - 1])
    return left, right
