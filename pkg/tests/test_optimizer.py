import math

import numpy as np
import pytest
from scipy.optimize import OptimizeResult

from optimizer.minimize import (
    STATUS_GRADIENT,
    STATUS_LINE_SEARCH,
    STATUS_MAX_ITER,
    STATUS_NONFINITE,
    BoxBounds,
    OptimizerConfig,
    finite_diff_gradient,
    minimize,
    projected_gradient_norm,
)
from vehicle.errors import DimensionError, NumericError


def _quadratic(curvature, centre):
    def objective(x):
        d = x - centre
        return float(np.sum(curvature * d * d))
    return objective


def test_bounded_quadratics_match_clipped_minimizer(rng):
    bounds = BoxBounds.uniform(40)
    for _ in range(100):
        curvature = rng.uniform(0.5, 5.0, size=40)
        centre = rng.uniform(-1.0, 2.0, size=40)
        x0 = rng.uniform(0.0, 1.0, size=40)
        result = minimize(_quadratic(curvature, centre), x0, bounds)
        assert result.success
        assert np.max(np.abs(result.x - np.clip(centre, 0.0, 1.0))) < 1e-5
        assert np.all(np.diff(result.history) <= 0.0)


def test_converged_point_is_stationary_on_the_box(rng):
    bounds = BoxBounds.uniform(12)
    curvature = rng.uniform(0.5, 5.0, size=12)
    centre = rng.uniform(-1.0, 2.0, size=12)
    objective = _quadratic(curvature, centre)
    result = minimize(objective, np.full(12, 0.5), bounds)
    assert result.status == STATUS_GRADIENT
    grad = finite_diff_gradient(objective, result.x, 1e-6, bounds)
    assert projected_gradient_norm(result.x, grad, bounds) <= 1e-6


def test_result_is_scipy_optimize_result():
    bounds = BoxBounds.uniform(3)
    result = minimize(_quadratic(np.ones(3), np.full(3, 0.25)), np.zeros(3), bounds)
    assert isinstance(result, OptimizeResult)
    assert result.nit >= 1
    assert result.nfev > result.nit
    assert result.history[0] == pytest.approx(3 * 0.25 ** 2)
    assert result.fun == result.history[-1]
    assert not result.nonfinite


def test_starting_point_is_projected():
    bounds = BoxBounds.uniform(2)
    result = minimize(_quadratic(np.ones(2), np.full(2, 5.0)), np.array([-3.0, 7.0]), bounds)
    assert np.allclose(result.x, 1.0)


def test_iteration_limit():
    bounds = BoxBounds.uniform(10, -10.0, 10.0)
    curvature = np.logspace(0, 4, 10)
    cfg = OptimizerConfig(max_iterations=2)
    result = minimize(_quadratic(curvature, np.full(10, 3.0)), np.zeros(10), bounds, cfg)
    assert result.status == STATUS_MAX_ITER
    assert result.nit == 2
    assert not result.success


def test_non_finite_start_is_an_error():
    with pytest.raises(NumericError):
        minimize(lambda x: math.inf, np.zeros(2), BoxBounds.uniform(2))


def test_non_finite_region_is_avoided():
    def objective(x):
        return math.nan if x[0] > 0.6 else float((x[0] - 1.0) ** 2)

    result = minimize(objective, np.array([0.0]), BoxBounds.uniform(1))
    assert result.x[0] <= 0.6
    assert result.fun < 1.0
    assert result.nonfinite or result.status in (STATUS_NONFINITE, STATUS_LINE_SEARCH)


def test_x0_size_must_match_bounds():
    with pytest.raises(DimensionError):
        minimize(lambda x: 0.0, np.zeros(3), BoxBounds.uniform(4))


def test_central_difference_is_exact_for_quadratics():
    bounds = BoxBounds.uniform(3, -5.0, 5.0)
    grad = finite_diff_gradient(_quadratic(np.array([1.0, 2.0, 3.0]), np.zeros(3)), np.ones(3), 1e-4, bounds)
    assert np.allclose(grad, [2.0, 4.0, 6.0], atol=1e-8)


def test_one_sided_difference_at_the_bounds():
    bounds = BoxBounds.uniform(2)
    grad = finite_diff_gradient(lambda x: float(x[0] + 2.0 * x[1]), np.array([0.0, 1.0]), 1e-6, bounds)
    assert np.allclose(grad, [1.0, 2.0], atol=1e-6)


def test_box_bounds_validation():
    with pytest.raises(DimensionError):
        BoxBounds(np.zeros(2), np.ones(3))
    with pytest.raises(NumericError):
        BoxBounds(np.zeros(2), np.array([1.0, math.inf]))
    with pytest.raises(ValueError):
        BoxBounds(np.ones(2), np.zeros(2))


def test_optimizer_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(max_iterations=0)
    with pytest.raises(ValueError):
        OptimizerConfig(line_search_shrink=1.0)
    assert OptimizerConfig.from_mapping({"memory": "4"}).memory == 4


def test_stationary_start_returns_without_iterating():
    bounds = BoxBounds.uniform(4)
    centre = np.array([0.25, 0.5, 1.5, -0.5])
    result = minimize(_quadratic(np.ones(4), centre), np.clip(centre, 0.0, 1.0), bounds)
    assert result.nit == 0
    assert result.status == STATUS_GRADIENT
    assert result.success


def test_small_scale_objective_is_not_stopped_by_its_small_cost_changes():
    bounds = BoxBounds.uniform(4)
    result = minimize(_quadratic(np.full(4, 1e-4), np.full(4, 0.5)), np.zeros(4), bounds)
    assert result.status == STATUS_GRADIENT
    assert np.allclose(result.x, 0.5, atol=1e-5)


def test_projected_gradient_norm_ignores_blocked_directions():
    bounds = BoxBounds.uniform(3)
    x = np.array([0.0, 1.0, 0.5])
    assert projected_gradient_norm(x, np.array([2.0, -3.0, 0.0]), bounds) == 0.0
    assert projected_gradient_norm(x, np.array([-2.0, 0.0, 0.25]), bounds) == pytest.approx(1.0)
