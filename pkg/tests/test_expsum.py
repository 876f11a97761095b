import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylab.errors import AliasingError, WorkBudgetError
from weylab.expsum import (
    GridSpec,
    TorusPoint,
    TrigPoly,
    trigpoly_eval_direct,
    trigpoly_eval_grid,
    weyl_sum,
    weyl_sum_grid,
    weyl_sum_points,
    weyl_sum_reference,
)


def test_torus_point_reduces_mod_one():
    p = TorusPoint(1.25, -0.25)
    assert p.x == 0.25 and p.t == 0.75
    assert TorusPoint(0.0, 0.0).x == 0.0


def test_grid_spec_half_step_default():
    g = GridSpec(4)
    assert np.allclose(g.nodes(), [0.125, 0.375, 0.625, 0.875])
    assert g.step == 0.25


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(0)
    with pytest.raises(ValueError):
        GridSpec(4, offset=0.25)  # offset must be < 1/points


def test_weyl_sum_all_terms_one():
    assert weyl_sum(3, TorusPoint(0, 0)) == pytest.approx(3.0)


def test_weyl_sum_two_term_cancellation():
    # e(1/2) + e(2) = -1 + 1
    assert abs(weyl_sum(2, TorusPoint(0, 0.5))) < 1e-12


def test_weyl_sum_even_phase():
    # n + n^2 is even, so every term is e(integer) = 1
    assert weyl_sum(4, TorusPoint(0.5, 0.5)) == pytest.approx(4.0)


def test_weyl_sum_grid_single_term():
    vals = weyl_sum_grid(1, 0.0, GridSpec(4, offset=0.0))
    assert np.allclose(vals, [1, 1j, -1, -1j], atol=1e-14)


def test_weyl_sum_grid_one_node():
    assert np.allclose(weyl_sum_grid(3, 0.0, GridSpec(1, offset=0.0)), [3.0])


def test_weyl_sum_grid_two_nodes():
    vals = weyl_sum_grid(2, 0.0, GridSpec(2, offset=0.0))
    assert np.allclose(vals, [2.0, 0.0], atol=1e-13)


def test_grid_bit_identical_to_pointwise():
    g = GridSpec(7)
    vals = weyl_sum_grid(513, 0.217, g)
    for k in (0, 3, 6):
        assert vals[k] == weyl_sum(513, TorusPoint(0.217, g.nodes()[k]))


def test_weyl_sum_grid_budget():
    with pytest.raises(WorkBudgetError):
        weyl_sum_grid(10**6, 0.0, GridSpec(10**4))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=1, max_value=300),
    st.floats(0, 1, exclude_max=True),
    st.floats(0, 1, exclude_max=True),
)
def test_weyl_sum_triangle_bound(N, x, t):
    assert abs(weyl_sum(N, TorusPoint(x, t))) <= N + 1e-9


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=1, max_value=200),
    st.integers(min_value=0, max_value=(1 << 26) - 1),
    st.integers(min_value=0, max_value=(1 << 26) - 1),
)
def test_weyl_sum_conjugate_symmetry(N, xk, tk):
    # dyadic coordinates so the mirrored point (1-x, 1-t) is exact in floats
    x, t = xk / (1 << 26), tk / (1 << 26)
    direct = weyl_sum(N, TorusPoint(x, t))
    mirrored = weyl_sum(N, TorusPoint(-x, -t))
    assert mirrored == pytest.approx(direct.conjugate(), abs=1e-12)


@pytest.mark.parametrize("N", [100, 4096, 100_000])
def test_recurrence_drift_against_reference(N):
    x, t = 0.123456789, 0.987654321
    assert abs(weyl_sum(N, TorusPoint(x, t)) - weyl_sum_reference(N, x, t)) < 1e-10


def test_weyl_sum_points_matches_scalar():
    xs = np.array([0.1, 0.7, 0.3])
    ts = np.array([0.9, 0.2, 0.5])
    vals = weyl_sum_points(64, xs, ts)
    for i in range(3):
        assert vals[i] == weyl_sum(64, TorusPoint(xs[i], ts[i]))


# ---------------------------------------------------------------------------
# trigonometric polynomials
# ---------------------------------------------------------------------------


def test_trigpoly_single_frequency():
    vals = trigpoly_eval_grid(TrigPoly({1: 1}), GridSpec(4, offset=0.0))
    assert np.allclose(vals, [1, 1j, -1, -1j], atol=1e-14)


def test_trigpoly_constant():
    vals = trigpoly_eval_grid(TrigPoly({0: 5}), GridSpec(9))
    assert np.allclose(vals, 5.0)


def test_trigpoly_cosine_pair():
    vals = trigpoly_eval_grid(TrigPoly({1: 1, -1: 1}), GridSpec(2, offset=0.0))
    assert np.allclose(vals, [2.0, -2.0], atol=1e-14)


def test_trigpoly_fast_path_matches_direct_high_degree():
    rng = np.random.default_rng(7)
    freqs = rng.choice(np.arange(-4096, 4097), size=120, replace=False)
    P = TrigPoly({int(n): complex(*rng.standard_normal(2)) for n in freqs})
    grid = GridSpec(2 * 4096 + 3)
    fast = trigpoly_eval_grid(P, grid, alias_free=True)
    direct = trigpoly_eval_direct(P, grid)
    scale = np.max(np.abs(direct))
    assert np.max(np.abs(fast - direct)) < 1e-12 * scale


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=64), st.integers(min_value=3, max_value=257))
def test_trigpoly_fast_path_matches_direct(seed, points):
    rng = np.random.default_rng(seed)
    freqs = rng.integers(-40, 41, size=10)
    P = TrigPoly({int(n): complex(*rng.standard_normal(2)) for n in freqs})
    grid = GridSpec(points)
    fast = trigpoly_eval_grid(P, grid)
    direct = trigpoly_eval_direct(P, grid)
    scale = max(np.max(np.abs(direct)), 1.0)
    assert np.max(np.abs(fast - direct)) < 1e-12 * scale


def test_trigpoly_alias_error():
    P = TrigPoly({n: 1.0 for n in range(-8, 9)})
    with pytest.raises(AliasingError):
        trigpoly_eval_grid(P, GridSpec(16), alias_free=True)
    # without the flag, folding is allowed and matches direct summation
    vals = trigpoly_eval_grid(P, GridSpec(16))
    assert np.allclose(vals, trigpoly_eval_direct(P, GridSpec(16)), atol=1e-12)


def test_trigpoly_algebra_and_degree():
    P = TrigPoly({2: 1.0, -3: 2.0})
    Q = TrigPoly({2: -1.0, 0: 4.0})
    assert (P + Q).coeffs == {-3: 2.0, 0: 4.0}
    assert P.degree == 3 and TrigPoly({}).degree == 0
    assert P.derivative(2).coeffs == {2: 4.0, -3: 18.0}
