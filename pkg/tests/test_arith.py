import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylab.arith import (
    EULER_MASCHERONI,
    TotientSumEstimate,
    bernoulli_numbers,
    faulhaber_sum,
    mobius_log_constant,
    mobius_log_partial_sum,
    mobius_sieve,
    totient_sieve,
    totient_sum_compare,
    totient_sum_main_terms,
    zeta,
    zeta_constants,
    zeta_prime,
)
from weylab.errors import WorkBudgetError


def test_totient_first_values():
    assert list(totient_sieve(1)) == [1]
    assert list(totient_sieve(10)) == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    assert totient_sieve(10).sum() == 32


def test_totient_gcd_count_brute():
    phi = totient_sieve(2048)
    for n in range(1, 2049):
        expected = sum(1 for m in range(1, n + 1) if math.gcd(m, n) == 1)
        assert phi[n - 1] == expected


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def test_totient_and_mobius_by_factorization():
    N = 10_000
    phi = totient_sieve(N)
    mu = mobius_sieve(N)
    for n in range(2, N + 1):
        fac = _factorize(n)
        expected_phi = n
        for p in fac:
            expected_phi = expected_phi // p * (p - 1)
        assert phi[n - 1] == expected_phi
        if any(e > 1 for e in fac.values()):
            assert mu[n - 1] == 0
        else:
            assert mu[n - 1] == (-1) ** len(fac)


def test_totient_primes():
    phi = totient_sieve(10_000)
    for p in (2, 3, 5, 7, 97, 991, 7919, 9973):
        assert phi[p - 1] == p - 1


def test_mobius_values():
    mu = mobius_sieve(12)
    assert mu[0] == 1 and mu[3] == 0 and mu[5] == 1 and mu[11] == 0


def test_mobius_convolution_identity():
    N = 10_000
    mu = mobius_sieve(N)
    acc = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        acc[d::d] += mu[d - 1]
    assert acc[1] == 1
    assert not acc[2:].any()


def test_sieve_caps():
    with pytest.raises(WorkBudgetError):
        totient_sieve(100, cap=10)
    with pytest.raises(WorkBudgetError):
        mobius_sieve(100, cap=10)


# ---------------------------------------------------------------------------
# Bernoulli / Faulhaber
# ---------------------------------------------------------------------------


def test_bernoulli_convention_and_recurrence():
    B = bernoulli_numbers(12)
    assert B[0] == 1 and B[1] == Fraction(-1, 2)
    assert B[2] == Fraction(1, 6) and B[4] == Fraction(-1, 30)
    for m in range(1, 12):
        assert sum(math.comb(m + 1, j) * B[j] for j in range(m + 1)) == 0


def test_faulhaber_base_cases():
    assert faulhaber_sum(7, 0) == 7
    assert faulhaber_sum(10, 2) == 385
    assert faulhaber_sum(10, 1) == 55


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=1000), st.integers(min_value=0, max_value=10))
def test_faulhaber_matches_direct(N, ell):
    assert faulhaber_sum(N, ell) == sum(k**ell for k in range(1, N + 1))


def test_faulhaber_quartic_lower_bound():
    # sum k^4 has leading coefficient 1/5
    for N in (10, 100, 1000, 10_000):
        assert 5 * faulhaber_sum(N, 4) >= N**5


def test_faulhaber_range_check():
    with pytest.raises(ValueError):
        faulhaber_sum(10, 21)


# ---------------------------------------------------------------------------
# zeta machinery
# ---------------------------------------------------------------------------


def test_zeta_closed_forms():
    assert zeta(2) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert zeta(4) == pytest.approx(math.pi**4 / 90, abs=1e-12)


@pytest.mark.parametrize("s", [0.5, 1.5, 2.5, 3.0, 5.0, -0.5])
def test_zeta_against_mpmath(s):
    assert zeta(s) == pytest.approx(float(mpmath.zeta(s)), abs=1e-12)


def test_zeta_pole_rejected():
    with pytest.raises(ValueError):
        zeta(1.0)
    with pytest.raises(ValueError):
        zeta_constants((0.5,))


def test_zeta_prime():
    assert zeta_prime(2) == pytest.approx(float(mpmath.diff(mpmath.zeta, 2)), abs=1e-12)


def test_mobius_partial_sum_vs_inverse_zeta():
    mu = mobius_sieve(10**6)
    d = np.arange(1, 10**6 + 1, dtype=np.float64)
    partial = float(np.sum(mu / (d * d)))
    assert abs(partial - 1.0 / zeta(2)) < 1e-5


def test_euler_mascheroni_by_extrapolation():
    # Richardson: C_N = H_N - log N  ~ C + 1/(2N) - 1/(12 N^2), cancel 1/(2N)
    def harmonic_gap(N: int) -> float:
        return float(sum(Fraction(1, k) for k in range(1, N + 1))) - math.log(N)

    c1, c2 = harmonic_gap(20_000), harmonic_gap(40_000)
    extrapolated = 2 * c2 - c1
    assert extrapolated == pytest.approx(EULER_MASCHERONI, abs=1e-9)


def test_mobius_log_constant_routes():
    closed = mobius_log_constant()
    partial, tail = mobius_log_partial_sum(200_000)
    assert abs(closed - partial) <= tail
    assert closed == pytest.approx(-0.34649473470180225, abs=1e-10)


def test_zeta_constants_payload():
    out = zeta_constants((2.0, 3.0))
    assert out["zeta"][2.0] == pytest.approx(math.pi**2 / 6)
    assert out["euler_mascheroni"] == EULER_MASCHERONI
    assert out["A"] == pytest.approx(-0.34649473470180225, abs=1e-10)


# ---------------------------------------------------------------------------
# totient summatory comparison
# ---------------------------------------------------------------------------


def test_totient_sum_small_example():
    est = totient_sum_compare(10, 0.0)
    assert est.exact == 32
    assert est.main_terms == pytest.approx(100 / (2 * math.pi**2 / 6), rel=1e-12)
    assert est.error_bound_scale == pytest.approx(10 * math.log(10))


def test_totient_sum_beta3():
    phi = totient_sieve(100_000)
    est = totient_sum_compare(100_000, 3.0, phi=phi)
    main = 100_000 ** (-1.0) / (-1.0) / zeta(2) + zeta(2) / zeta(3)
    assert est.main_terms == pytest.approx(main, rel=1e-12)
    assert est.ratio < 10.0


def test_totient_sum_beta2_uses_log_form():
    main, scale = totient_sum_main_terms(10**6, 2.0)
    expected = math.log(10**6) / zeta(2) + EULER_MASCHERONI / zeta(2) - mobius_log_constant()
    assert main == pytest.approx(expected, rel=1e-12)
    assert scale == pytest.approx(math.log(10**6) / 10**6)


def test_totient_sum_beta_between_one_and_two():
    # needs zeta(beta - 1) below 1, i.e. the continued zeta
    est = totient_sum_compare(10_000, 1.5)
    main = 10_000**0.5 / (0.5 * zeta(2)) + zeta(0.5) / zeta(1.5)
    assert est.main_terms == pytest.approx(main, rel=1e-12)
    assert est.ratio < 1.0


def test_totient_sum_validation():
    with pytest.raises(ValueError):
        totient_sum_compare(1, 0.0)
    with pytest.raises(ValueError):
        totient_sum_compare(10, -1.0)
    with pytest.raises(ValueError):
        totient_sum_compare(100, 0.0, phi=totient_sieve(10))
