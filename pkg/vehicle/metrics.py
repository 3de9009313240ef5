"""
vehicle/metrics.py

Tracking-error measures between a platform and a target trajectory.
"""

from dataclasses import dataclass, field

import numpy as np

from vehicle.errors import DimensionError
from vehicle.state import STATE_SIZE

# Position-only tracking: only x, y, z errors are penalized.
POSITION_ONLY_WEIGHTS = (1.0, 1.0, 1.0) + (0.0,) * (STATE_SIZE - 3)


@dataclass(frozen=True)
class CostWeights:
    """Quadratic per-state weights plus one weight shared by every control channel."""

    state_weights: np.ndarray = field(default_factory=lambda: np.array(POSITION_ONLY_WEIGHTS))
    control_weight: float = 0.5

    def __post_init__(self):
        weights = np.array(self.state_weights, dtype=float).reshape(-1)
        if weights.shape != (STATE_SIZE,):
            raise DimensionError(f"state_weights must have {STATE_SIZE} entries, got {weights.size}")
        if np.any(weights < 0.0) or self.control_weight < 0.0:
            raise ValueError("cost weights must be non-negative")
        weights.setflags(write=False)
        object.__setattr__(self, "state_weights", weights)
        object.__setattr__(self, "control_weight", float(self.control_weight))


def _check_comparable(a, b):
    if len(a.state_matrix) != len(b.state_matrix):
        raise DimensionError(f"trajectory lengths differ: {len(a.state_matrix)} vs {len(b.state_matrix)}")
    if len(a.state_matrix) < 1:
        raise DimensionError("trajectories must hold at least one state")
    if abs(a.dt - b.dt) > 1e-9:
        raise DimensionError(f"sample periods differ: {a.dt} vs {b.dt}")


def mse_per_axis(a, b):
    """Mean squared position error along x, y and z [m^2]."""
    _check_comparable(a, b)
    diff = a.positions - b.positions
    return np.mean(diff * diff, axis=0)


def peak_position_error(a, b):
    """Largest Euclidean position error over the samples [m]."""
    _check_comparable(a, b)
    return float(np.max(np.linalg.norm(a.positions - b.positions, axis=1)))


def tracking_loss(a, b, weights=None):
    """Sum over samples of the weighted squared state error."""
    _check_comparable(a, b)
    weights = weights or CostWeights()
    diff = a.state_matrix - b.state_matrix
    # angle differences are taken on the circle
    diff[:, 6] = (diff[:, 6] + np.pi) % (2.0 * np.pi) - np.pi
    diff[:, 8] = (diff[:, 8] + np.pi) % (2.0 * np.pi) - np.pi
    return float(np.sum(diff * diff @ weights.state_weights))
