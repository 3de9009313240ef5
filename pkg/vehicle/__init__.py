from vehicle.errors import *  # noqa: F401,F403
from vehicle.metrics import CostWeights, mse_per_axis, peak_position_error, tracking_loss
from vehicle.state import ControlKind, ControlVector, VehicleState, wrap_attitude
from vehicle.trajectory import Trajectory
