from dynamics.fixedwing import FixedWingParams, simulate, step_fw, trim
from dynamics.multirotor import MotorState, MultiRotorParams, apply_lag, forces_and_torques, rollout, step
