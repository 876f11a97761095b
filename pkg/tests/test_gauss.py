import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylab.gauss import (
    BParityClass,
    GaussSumParams,
    _abs_sums_for_q,
    admissible_b,
    closed_form_max_error,
    coprime_residues,
    gauss_magnitude_closed_form,
    gauss_sum_direct,
    sweep_rows,
)


def test_single_term_modulus():
    assert gauss_sum_direct(GaussSumParams(1, 0, 1)) == pytest.approx(1.0)


def test_three_term_value():
    # 1 + 2 e(1/3) = i sqrt(3)
    val = gauss_sum_direct(GaussSumParams(1, 0, 3))
    assert val == pytest.approx(1j * math.sqrt(3), abs=1e-12)
    assert abs(val) == pytest.approx(math.sqrt(3), abs=1e-12)


def test_two_term_value():
    assert gauss_sum_direct(GaussSumParams(1, 1, 2)) == pytest.approx(2.0, abs=1e-12)


def test_coprimality_enforced():
    with pytest.raises(ValueError):
        GaussSumParams(2, 0, 4)
    with pytest.raises(ValueError):
        GaussSumParams(3, 1, 9)


@pytest.mark.parametrize(
    "a,b,q,expected",
    [
        (1, 0, 3, math.sqrt(3)),
        (1, 0, 2, 0.0),
        (1, 2, 4, math.sqrt(8)),
        (1, 1, 4, 0.0),
    ],
)
def test_closed_form_rows(a, b, q, expected):
    assert gauss_magnitude_closed_form(GaussSumParams(a, b, q)) == pytest.approx(expected)


def test_closed_form_cross_check_q4():
    # q = 0 mod 4 with even b: direct sum is 2 + 2i up to conjugation
    val = gauss_sum_direct(GaussSumParams(1, 2, 4))
    assert abs(val) == pytest.approx(math.sqrt(8), abs=1e-12)


def test_admissible_classes():
    assert admissible_b(5) is BParityClass.ALL
    assert admissible_b(4) is BParityClass.EVEN
    assert admissible_b(6) is BParityClass.ODD
    assert admissible_b(4).admits(2) and not admissible_b(4).admits(3)
    with pytest.raises(ValueError):
        admissible_b(0)


def test_direct_matches_closed_form_small_sweep():
    count, worst = closed_form_max_error(60, 2)
    assert worst < 1e-9
    assert count == sum(len(coprime_residues(q)) * 4 * q // 2 for q in range(2, 61))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=-5, max_value=5),
)
def test_shift_invariance(q, b, c):
    a_vals = coprime_residues(q)
    a = int(a_vals[b % len(a_vals)])
    p = GaussSumParams(a, b, q)
    assert gauss_sum_direct(p, shift=c) == pytest.approx(gauss_sum_direct(p), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=50), st.integers(min_value=-20, max_value=40))
def test_b_plus_2q_exact(q, b):
    a = int(coprime_residues(q)[0])
    # residues agree term by term, so the float sums are bitwise equal
    assert gauss_sum_direct(GaussSumParams(a, b + 2 * q, q)) == gauss_sum_direct(
        GaussSumParams(a, b, q)
    )


def test_vectorized_sweep_matches_direct():
    for q in range(2, 41):
        a_vals = coprime_residues(q)
        mags = _abs_sums_for_q(q, a_vals, 2 * q)
        for i, a in enumerate(a_vals):
            for b in range(2 * q):
                expected = abs(gauss_sum_direct(GaussSumParams(int(a), b, q)))
                assert mags[i, b] == pytest.approx(expected, abs=1e-12)


def test_sweep_rows_count_qmax4():
    rows = list(sweep_rows(4))
    assert len(rows) == 16  # q=2 -> 2, q=3 -> 6, q=4 -> 8
    assert all(err < 1e-12 for *_, err in rows)


def test_parity_from_original_b():
    # for odd q the parity of b mod q flips, but the magnitude is sqrt(q) anyway
    p_even = GaussSumParams(1, 4, 5)
    p_odd = GaussSumParams(1, 9, 5)
    assert p_even.b_is_even and not p_odd.b_is_even
    assert gauss_magnitude_closed_form(p_even) == gauss_magnitude_closed_form(p_odd)
