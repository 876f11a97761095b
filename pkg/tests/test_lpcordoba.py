import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylab.errors import AliasingError, InvariantViolation
from weylab.expsum import GridSpec, TrigPoly, trigpoly_eval_direct
from weylab.lpcordoba import (
    abel_block_identity,
    bernstein_check,
    cordoba_ratio,
    dyadic_block_index,
    dyadic_split,
    poly_norm,
    quadratic_block_split,
    square_function_norm,
)


def test_block_index_convention():
    assert dyadic_block_index(0) == 0 and dyadic_block_index(1) == 0
    assert dyadic_block_index(2) == 1 and dyadic_block_index(3) == 1
    assert dyadic_block_index(4) == 2 and dyadic_block_index(7) == 2
    assert dyadic_block_index(-1) == -1
    assert dyadic_block_index(-2) == -2 and dyadic_block_index(-3) == -2
    assert dyadic_block_index(-4) == -3 and dyadic_block_index(-7) == -3


def test_split_constant_single_block():
    blocks = dyadic_split(TrigPoly({0: 3.5})).blocks
    assert set(blocks) == {0}


def test_split_first_five_frequencies():
    blocks = dyadic_split(TrigPoly({n: 1.0 for n in range(1, 6)})).blocks
    assert {j: sorted(b.coeffs) for j, b in blocks.items()} == {
        0: [1],
        1: [2, 3],
        2: [4, 5],
    }


def test_split_negative_frequency():
    blocks = dyadic_split(TrigPoly({-3: 1.0})).blocks
    assert set(blocks) == {-2}


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_reassembly_exact(seed):
    rng = np.random.default_rng(seed)
    freqs = rng.integers(-4096, 4097, size=60)
    P = TrigPoly({int(n): complex(*rng.standard_normal(2)) for n in freqs})
    assert dyadic_split(P).reassemble() == P


def test_square_function_single_block_equals_norm():
    P = TrigPoly({4: 1.0, 5: -2.0, 7: 0.5j})  # one dyadic block (j=2)
    g = GridSpec(64)
    assert square_function_norm(P, 3.0, g) == pytest.approx(poly_norm(P, 3.0, g), rel=1e-12)


def test_square_function_parseval():
    rng = np.random.default_rng(3)
    P = TrigPoly({int(n): complex(*rng.standard_normal(2)) for n in rng.integers(-300, 301, 80)})
    g = GridSpec(1024)
    assert square_function_norm(P, 2.0, g) == pytest.approx(poly_norm(P, 2.0, g), abs=1e-9)


def test_square_function_against_dense_oracle():
    P = TrigPoly({0: 1.0, 2: 1.0, 5: 1.0})
    g = GridSpec(10**6)
    # blocks: {0}, {2}(j=1), {5}(j=2); brute force the square function norm
    theta = g.nodes()
    acc = np.zeros(len(theta))
    for piece in ({0: 1.0}, {2: 1.0}, {5: 1.0}):
        vals = trigpoly_eval_direct(TrigPoly(piece), g)
        acc += np.abs(vals) ** 2
    oracle = float(np.mean(acc**2)) ** 0.25
    assert square_function_norm(P, 4.0, GridSpec(64)) == pytest.approx(oracle, abs=1e-6)


def test_square_function_alias_guard():
    P = TrigPoly({n: 1.0 for n in range(40)})
    with pytest.raises(AliasingError):
        square_function_norm(P, 2.5, GridSpec(64))
    with pytest.raises(ValueError):
        square_function_norm(P, 1.0, GridSpec(256))


# ---------------------------------------------------------------------------
# Bernstein-type inequalities
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0, 4.0])
def test_cosine_equality_first_derivative(p):
    n = 16
    P = TrigPoly({n: 0.5, -n: 0.5})
    rec = bernstein_check(P, p, 1)
    assert rec.ratio == pytest.approx(1.0, abs=1e-6)


def test_constant_polynomial_trivial():
    rec = bernstein_check(TrigPoly({0: 1.0}), 2.0, 1)
    assert rec.lhs == rec.rhs == 0.0


def test_random_degree16_second_derivative():
    rng = np.random.default_rng(11)
    P = TrigPoly({int(n): complex(*rng.standard_normal(2)) for n in range(-16, 17)})
    rec = bernstein_check(P, 3.0, 2)
    assert rec.lhs <= 16 * 15 * poly_norm(P, 3.0, _grid_for(P)) * (1 + 1e-9)
    assert rec.ratio <= 1.0


def _grid_for(P):
    from weylab.lpcordoba import _bernstein_grid

    return _bernstein_grid(P.degree)


def test_k_exceeding_degree_rejected():
    with pytest.raises(ValueError):
        bernstein_check(TrigPoly({2: 1.0}), 2.0, 3)


def test_cosine_second_derivative_violates_factorial_constant():
    # ||P''|| = n^2 ||P|| for a pure cosine, above the n(n-1) bound
    P = TrigPoly({8: 0.5, -8: 0.5})
    with pytest.raises(InvariantViolation):
        bernstein_check(P, 2.0, 2)


# ---------------------------------------------------------------------------
# quadratic-spectrum machinery
# ---------------------------------------------------------------------------


def test_quadratic_block_boundaries():
    P = TrigPoly({k * k: 1.0 for k in range(1, 6)})
    blocks = quadratic_block_split(P).blocks
    assert {j: sorted(b.coeffs) for j, b in blocks.items()} == {
        0: [1],
        2: [4],
        3: [9],
        4: [16, 25],
    }


def test_quadratic_block_single():
    blocks = quadratic_block_split(TrigPoly({1: 2.0})).blocks
    assert set(blocks) == {0}


def test_quadratic_blocks_match_dyadic():
    P = TrigPoly({k * k: complex(k) for k in range(1, 40)})
    assert quadratic_block_split(P).blocks == dyadic_split(P).blocks


def test_quadratic_split_rejects_nonsquare():
    with pytest.raises(ValueError):
        quadratic_block_split(TrigPoly({3: 1.0}))
    with pytest.raises(ValueError):
        quadratic_block_split(TrigPoly({-4: 1.0}))


def test_cordoba_single_term():
    assert cordoba_ratio(np.array([5.0]), 2, 3.0) == pytest.approx(1.0, rel=1e-12)


def test_cordoba_constant_sequence_stable():
    vals = [cordoba_ratio(np.ones(N), 0, 3.0) for N in (64, 128, 256)]
    assert max(vals) / min(vals) < 1.10


def test_cordoba_inverse_sequence_regression():
    expected = {64: 1.180974, 128: 1.190409, 256: 1.199987}
    for N, want in expected.items():
        got = cordoba_ratio(1.0 / np.arange(1, N + 1), 1, 3.5)
        assert got == pytest.approx(want, rel=1e-5)


def test_cordoba_validation():
    with pytest.raises(ValueError):
        cordoba_ratio(np.array([1.0, 2.0]), 0, 3.0)  # increasing
    with pytest.raises(ValueError):
        cordoba_ratio(np.array([1.0, -1.0]), 0, 3.0)  # not positive
    with pytest.raises(ValueError):
        cordoba_ratio(np.ones(4), 0, 4.0)  # alpha out of range
    with pytest.raises(ValueError):
        cordoba_ratio(np.ones(4), 0, 1.5)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=5000))
def test_abel_identity_exact(j, seed):
    rng = np.random.default_rng(seed)
    # positive strictly decreasing rationals keep every coefficient exact
    steps = [Fraction(int(v), 64) for v in rng.integers(1, 20, size=40)]
    a = []
    total = Fraction(100)
    for s in steps:
        a.append(total)
        total -= s
    left, right = abel_block_identity(a, j)
    assert left == right
