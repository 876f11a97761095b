"""Number-theoretic support: totient and Mobius sieves, weighted totient
summatory asymptotics, zeta values, Bernoulli numbers and Faulhaber sums.

Faulhaber/Bernoulli work in exact rational arithmetic because they feed
identity tests where float slop would mask sign errors; sieves are
numpy-vectorized and exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import WorkBudgetError

EULER_MASCHERONI = 0.5772156649015329

#: default sieve length cap
SIEVE_CAP = 10**8

#: Bernoulli table size; faulhaber_sum supports exponents up to this
BERNOULLI_TABLE_SIZE = 20


def totient_sieve(N: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """phi(1..N) as a length-N vector, by the multiplicative sieve."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > cap:
        raise WorkBudgetError(f"sieve length {N} exceeds cap {cap}")
    phi = np.arange(N + 1, dtype=np.int64)
    for p in range(2, N + 1):
        if phi[p] == p:  # untouched so far => prime
            phi[p::p] -= phi[p::p] // p
    return phi[1:]


def mobius_sieve(N: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """mu(1..N) as a length-N vector."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > cap:
        raise WorkBudgetError(f"sieve length {N} exceeds cap {cap}")
    mu = np.ones(N + 1, dtype=np.int64)
    is_comp = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if not is_comp[p]:
            is_comp[p * p :: p] = True
            mu[p::p] *= -1
            sq = p * p
            if sq <= N:
                mu[sq::sq] = 0
    return mu[1:]


@lru_cache(maxsize=None)
def bernoulli_numbers(count: int = BERNOULLI_TABLE_SIZE) -> tuple[Fraction, ...]:
    """B_0 .. B_count as exact Fractions, in the B_1 = -1/2 convention.

    Derived from the defining recurrence sum_{j<=m} C(m+1, j) B_j = 0, m >= 1.
    """
    table = [Fraction(1)]
    for m in range(1, count + 1):
        s = Fraction(0)
        for j in range(m):
            s += math.comb(m + 1, j) * table[j]
        table.append(-s / (m + 1))
    return tuple(table)


def faulhaber_sum(N: int, ell: int) -> int:
    """sum_{k=1}^{N} k^ell via the Bernoulli formula, exact.

    Implements sum = (1/(ell+1)) * sum_{j=0}^{ell} (-1)^j C(ell+1, j) B_j
    N^{ell+1-j}; the j = 0 term supplies the leading N^{ell+1}.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if ell > BERNOULLI_TABLE_SIZE:
        raise ValueError(f"ell must be <= {BERNOULLI_TABLE_SIZE} (Bernoulli table size)")
    B = bernoulli_numbers(BERNOULLI_TABLE_SIZE)
    total = Fraction(0)
    for j in range(ell + 1):
        total += (-1) ** j * math.comb(ell + 1, j) * B[j] * Fraction(N) ** (ell + 1 - j)
    total /= ell + 1
    assert total.denominator == 1
    return int(total)


# ---------------------------------------------------------------------------
# zeta and related constants
# ---------------------------------------------------------------------------


def zeta(s, M: int = 64, K: int = 12):
    """Riemann zeta by Euler-Maclaurin acceleration; s real or complex, s != 1.

    Accurate to ~1e-14 for Re(s) > -2 with the default truncation; raising M
    extends the range.  Exact Bernoulli numbers avoid coefficient error.
    """
    s = complex(s) if isinstance(s, complex) else float(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    B = bernoulli_numbers(2 * K + 2)
    n = np.arange(1, M, dtype=np.float64)
    if isinstance(s, complex):
        head = np.sum(n ** (-s))
    else:
        head = float(np.sum(n ** (-s)))
    total = head + M ** (1 - s) / (s - 1) + 0.5 * M ** (-s)
    # correction sum_{k>=1} B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{-s-2k+1}
    rising = s
    for k in range(1, K + 1):
        coeff = float(B[2 * k]) / math.factorial(2 * k)
        total += coeff * rising * M ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return total


def zeta_prime(s: float, h: float = 1e-150) -> float:
    """zeta'(s) by complex-step differentiation (no cancellation error)."""
    return float(zeta(complex(s, h)).imag / h)


def mobius_log_constant() -> float:
    """A = sum_{n>=1} mu(n) log(n) / n^2, evaluated as zeta'(2)/zeta(2)^2.

    Differentiating sum mu(n) n^{-s} = 1/zeta(s) gives
    sum mu(n) log(n) n^{-s} = zeta'(s)/zeta(s)^2.  Direct truncation with the
    tail bound (log M + 1)/M would need M ~ 3e11 for 1e-10, so the closed
    form is used and the partial sum serves as a cross-check in the tests.
    """
    z2 = float(zeta(2))
    return zeta_prime(2) / (z2 * z2)


def mobius_log_partial_sum(M: int) -> tuple[float, float]:
    """(sum_{n<=M} mu(n) log(n)/n^2, rigorous tail bound (log M + 1)/M)."""
    mu = mobius_sieve(M)
    n = np.arange(1, M + 1, dtype=np.float64)
    val = float(np.sum(mu * np.log(n) / (n * n)))
    return val, (math.log(M) + 1.0) / M


def zeta_constants(s_values: tuple[float, ...] = (2.0, 3.0)) -> dict:
    """zeta at the requested points plus the Euler-Mascheroni constant and A."""
    for s in s_values:
        if s <= 1:
            raise ValueError(f"zeta_constants requires s > 1, got {s}")
    return {
        "zeta": {s: float(zeta(s)) for s in s_values},
        "euler_mascheroni": EULER_MASCHERONI,
        "A": mobius_log_constant(),
    }


# ---------------------------------------------------------------------------
# weighted totient summatory comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TotientSumEstimate:
    """Exact sum_{n<=N} phi(n)/n^beta against its main-term asymptotics.

    `ratio` = |exact - main_terms| / error_bound_scale is the testable
    content of the O-term: it should stay bounded along an N-ladder.
    """

    N: int
    beta: float
    exact: float
    main_terms: float
    error_bound_scale: float
    ratio: float


def totient_sum_main_terms(N: int, beta: float) -> tuple[float, float]:
    """(main terms, error bound scale) for sum phi(n)/n^beta.

    beta > 1, beta != 2: N^(2-b)/((2-b) zeta(2)) + zeta(b-1)/zeta(b),
                         error scale N^(1-b) log N;
    beta <= 1:           N^(2-b)/((2-b) zeta(2)), same error scale;
    beta == 2:           log(N)/zeta(2) + C/zeta(2) - A, error scale log(N)/N.
    """
    z2 = float(zeta(2))
    logN = math.log(N)
    if beta == 2:
        main = logN / z2 + EULER_MASCHERONI / z2 - mobius_log_constant()
        return main, logN / N
    main = N ** (2 - beta) / ((2 - beta) * z2)
    if beta > 1:
        main += float(zeta(beta - 1)) / float(zeta(beta))
    return main, N ** (1 - beta) * logN


def totient_sum_compare(
    N: int, beta: float, phi: np.ndarray | None = None
) -> TotientSumEstimate:
    """Exact sieve sum versus the closed main terms, with the O-term ratio.

    Pass a precomputed phi(1..M) vector with M >= N to amortize the sieve
    over an N-ladder.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if phi is None:
        phi = totient_sieve(N)
    elif len(phi) < N:
        raise ValueError("supplied phi vector is shorter than N")
    n = np.arange(1, N + 1, dtype=np.float64)
    if beta == 0:
        exact = float(np.sum(phi[:N]))
    else:
        exact = float(np.sum(phi[:N].astype(np.float64) / n**beta))
    main, scale = totient_sum_main_terms(N, beta)
    return TotientSumEstimate(
        N=N,
        beta=beta,
        exact=exact,
        main_terms=main,
        error_bound_scale=scale,
        ratio=abs(exact - main) / scale,
    )
