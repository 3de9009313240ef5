"""
optimizer/minimize.py

Box-constrained minimization by projected limited-memory quasi-Newton descent:

    min f(x)   subject to   lower <= x <= upper

Gradients come from finite differences (central, one-sided at the bounds),
curvature from limited-memory secant pairs restricted to the free variables,
and every trial point is projected back onto the box. Non-finite objective
values met during a line search are treated as +inf, so the step is rejected.
No randomness anywhere: identical inputs give bit-identical results.
"""

import logging
import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.optimize import OptimizeResult

import config
from vehicle.errors import DimensionError, NumericError

logger = logging.getLogger(__name__)

# Armijo sufficient-decrease constant
ARMIJO = 1e-4
# Skip secant pairs with too little curvature
CURVATURE_EPS = 1e-12

STATUS_COST = 0
STATUS_STEP = 1
STATUS_MAX_ITER = 2
STATUS_LINE_SEARCH = 3
STATUS_NONFINITE = 4
STATUS_GRADIENT = 5

MESSAGES = {
    STATUS_GRADIENT: "projected gradient below tolerance",
    STATUS_COST: "cost stalled below tolerance",
    STATUS_STEP: "step below tolerance",
    STATUS_MAX_ITER: "iteration limit reached",
    STATUS_LINE_SEARCH: "line search found no decrease",
    STATUS_NONFINITE: "non-finite objective or gradient",
}


@dataclass(frozen=True)
class BoxBounds:
    """Element-wise bounds lower <= x <= upper."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape:
            raise DimensionError(f"bound shapes differ: {lower.shape} vs {upper.shape}")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise NumericError("bounds must be finite")
        if np.any(lower > upper):
            raise ValueError("lower bound exceeds upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, size, lower=0.0, upper=1.0):
        return cls(np.full(size, float(lower)), np.full(size, float(upper)))

    @property
    def size(self):
        return self.lower.size

    def project(self, x):
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class OptimizerConfig:
    """Stopping and line-search settings."""

    max_iterations: int = config.OPTIMIZER_DEFAULTS["max_iterations"]
    gradient_tolerance: float = config.OPTIMIZER_DEFAULTS["gradient_tolerance"]
    cost_tolerance: float = config.OPTIMIZER_DEFAULTS["cost_tolerance"]
    stall_iterations: int = config.OPTIMIZER_DEFAULTS["stall_iterations"]
    step_tolerance: float = config.OPTIMIZER_DEFAULTS["step_tolerance"]
    fd_step: float = config.OPTIMIZER_DEFAULTS["fd_step"]
    line_search_shrink: float = config.OPTIMIZER_DEFAULTS["line_search_shrink"]
    line_search_max: int = config.OPTIMIZER_DEFAULTS["line_search_max"]
    memory: int = config.OPTIMIZER_DEFAULTS["memory"]

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        if not 0.0 < self.line_search_shrink < 1.0:
            raise ValueError("line_search_shrink must lie in (0, 1)")

    @classmethod
    def from_mapping(cls, mapping):
        return cls(**config.merge_defaults(config.OPTIMIZER_DEFAULTS, mapping))


def finite_diff_gradient(objective, x, fd_step, bounds, f0=None):
    """
    Central-difference gradient; coordinates whose central stencil would leave
    the box fall back to a one-sided difference pointing into it.
    """
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    probe = x.copy()
    for i in range(x.size):
        h = fd_step
        fwd_ok = x[i] + h <= bounds.upper[i]
        bwd_ok = x[i] - h >= bounds.lower[i]
        if fwd_ok and bwd_ok:
            probe[i] = x[i] + h
            f_plus = objective(probe)
            probe[i] = x[i] - h
            f_minus = objective(probe)
            grad[i] = (f_plus - f_minus) / (2.0 * h)
        else:
            if f0 is None:
                f0 = objective(x)
            if fwd_ok:
                probe[i] = x[i] + h
                grad[i] = (objective(probe) - f0) / h
            elif bwd_ok:
                probe[i] = x[i] - h
                grad[i] = (f0 - objective(probe)) / h
            else:
                # box narrower than the stencil
                grad[i] = 0.0
        probe[i] = x[i]
        if not math.isfinite(grad[i]):
            raise NumericError(f"non-finite objective sample around coordinate {i}")
    return grad


def _free_mask(x, grad, bounds):
    """Variables not held at a bound by the gradient sign."""
    at_lower = (x <= bounds.lower) & (grad > 0.0)
    at_upper = (x >= bounds.upper) & (grad < 0.0)
    return ~(at_lower | at_upper)


def _two_loop(grad, pairs, free):
    """Limited-memory inverse-Hessian product restricted to the free variables."""
    q = np.where(free, grad, 0.0)
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * np.dot(s * free, q)
        alphas.append(a)
        q = q - a * (y * free)
    if pairs:
        s, y, _ = pairs[-1]
        sy = np.dot(s * free, y * free)
        yy = np.dot(y * free, y * free)
        if sy > CURVATURE_EPS and yy > 0.0:
            q = q * (sy / yy)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * np.dot(y * free, q)
        q = q + (a - b) * (s * free)
    return -q


def projected_gradient_norm(x, grad, bounds):
    """Max-norm of the projected gradient step; zero exactly at a box-constrained stationary point."""
    return float(np.max(np.abs(bounds.project(x - grad) - x), initial=0.0))


def minimize(objective, x0, bounds, cfg=None):
    """
    Minimize `objective` over the box.

    Converges when the projected gradient falls below gradient_tolerance, when
    the relative cost change stays below cost_tolerance for stall_iterations
    accepted steps in a row, or when a step is shorter than step_tolerance.

    Returns a scipy OptimizeResult with fields x, fun, nit, nfev, success
    (converged), status, message, history (best cost after each iteration) and
    nonfinite (whether a non-finite value was met mid-run).
    """
    cfg = cfg or OptimizerConfig()
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape != (bounds.size,):
        raise DimensionError(f"x0 has {x0.size} entries, bounds have {bounds.size}")

    nfev = 0
    saw_nonfinite = False

    def f(x):
        nonlocal nfev, saw_nonfinite
        nfev += 1
        value = float(objective(x))
        if not math.isfinite(value):
            saw_nonfinite = True
            return math.inf
        return value

    x = bounds.project(x0)
    fx = f(x)
    if not math.isfinite(fx):
        raise NumericError("objective is not finite at the starting point")

    def gradient(point, value):
        return finite_diff_gradient(f, point, cfg.fd_step, bounds, f0=value)

    try:
        grad = gradient(x, fx)
    except NumericError:
        return _result(x, fx, 0, nfev, STATUS_NONFINITE, [fx], True)

    history = [fx]
    if projected_gradient_norm(x, grad, bounds) <= cfg.gradient_tolerance:
        return _result(x, fx, 0, nfev, STATUS_GRADIENT, history, saw_nonfinite)

    pairs = []
    stalled = 0
    status = STATUS_MAX_ITER
    iteration = 0
    while iteration < cfg.max_iterations:
        iteration += 1
        free = _free_mask(x, grad, bounds)
        direction = _two_loop(grad, pairs, free)
        slope = np.dot(grad, direction)
        if not pairs or slope >= 0.0:
            # steepest descent, scaled so the first trial step has unit length
            pairs = []
            direction = -np.where(free, grad, 0.0)
            norm = np.linalg.norm(direction)
            if norm == 0.0:
                status = STATUS_GRADIENT
                break
            direction /= max(1.0, norm)

        accepted = None
        alpha = 1.0
        for _ in range(cfg.line_search_max):
            trial = bounds.project(x + alpha * direction)
            f_trial = f(trial)
            decrease = np.dot(grad, trial - x)
            if f_trial <= fx + ARMIJO * min(decrease, 0.0) and f_trial <= fx:
                accepted = trial
                break
            alpha *= cfg.line_search_shrink

        if accepted is None:
            if not pairs:
                status = STATUS_LINE_SEARCH
                break
            # retry this iteration from steepest descent
            pairs = []
            iteration -= 1
            continue

        step = accepted - x
        cost_change = fx - f_trial
        x, fx = accepted, f_trial
        history.append(fx)

        if np.linalg.norm(step) < cfg.step_tolerance:
            status = STATUS_STEP
            break

        try:
            new_grad = gradient(x, fx)
        except NumericError:
            status = STATUS_NONFINITE
            break
        if projected_gradient_norm(x, new_grad, bounds) <= cfg.gradient_tolerance:
            status = STATUS_GRADIENT
            break
        stalled = stalled + 1 if cost_change <= cfg.cost_tolerance * max(1.0, abs(fx)) else 0
        if stalled >= cfg.stall_iterations:
            status = STATUS_COST
            break

        y = new_grad - grad
        sy = np.dot(step, y)
        if sy > CURVATURE_EPS:
            pairs.append((step, y, 1.0 / sy))
            if len(pairs) > cfg.memory:
                pairs.pop(0)
        grad = new_grad

    result = _result(x, fx, iteration, nfev, status, history, saw_nonfinite)
    logger.debug("minimize: %s after %d iterations, f=%.6g, nfev=%d", result.message, iteration, fx, nfev)
    return result


def _result(x, fx, nit, nfev, status, history, nonfinite):
    return OptimizeResult(
        x=x,
        fun=fx,
        nit=nit,
        nfev=nfev,
        status=status,
        success=status in (STATUS_GRADIENT, STATUS_COST, STATUS_STEP),
        message=MESSAGES[status],
        history=np.array(history),
        nonfinite=nonfinite,
    )
