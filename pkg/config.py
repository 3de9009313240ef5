# config.py
"""
Configuration file for the Platform Mimic Tool.

This module contains the default constants and option dictionaries used across
the tool (vehicle parameters, controller and optimizer settings, experiment
defaults) together with the reader for the flat key-value files that override
them.
"""

import math
import os
from pathlib import Path

from vehicle.errors import ConfigError

VERSION = "1.0.0"

GRAVITY = 9.81  # m/s²

# Environment variable naming the default root for run artifacts.
OUTPUT_DIR_ENV = "MIMIC_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "runs"

# -----------------------------
# Platform (multi-rotor) defaults
# -----------------------------
# Thrust-to-weight of exactly 2:1: each motor lifts half the vehicle weight.
_MR_MASS = 1.5
MULTIROTOR_DEFAULTS = {
    "mass": _MR_MASS,                                    # kg
    "inertia_diag": (0.02, 0.02, 0.04),                  # kg·m²
    "arm_length": 0.25,                                  # m
    "max_thrust_per_motor": 0.5 * _MR_MASS * GRAVITY,    # N
    "torque_coefficient": 0.016,                         # N·m per N
    "linear_drag_coeffs": (0.1, 0.1, 0.1),               # N·s/m
    "angular_drag_coeffs": (0.01, 0.01, 0.01),           # N·m·s/rad
    "gravity": GRAVITY,                                  # m/s²
    "lag_time_constant": 1.0 / 30.0,                     # s
}

# -----------------------------
# Target (fixed-wing surrogate) defaults
# -----------------------------
# x8-sized flying wing; control coefficients are per unit normalized command.
FIXEDWING_DEFAULTS = {
    "mass": 3.5,                          # kg
    "inertia_diag": (1.23, 0.17, 0.88),   # kg·m²
    "reference_area": 0.75,               # m²
    "reference_chord": 0.357,             # m
    "reference_span": 2.1,                # m
    "air_density": 1.225,                 # kg/m³
    "trim_airspeed": 18.0,                # m/s
    "cl0": 0.087,
    "cl_alpha": 4.02,
    "cd0": 0.0197,
    "induced_drag_factor": 0.0677,
    "cy_beta": -0.2,
    "cl_beta": -0.03,
    "cl_p": -0.4,
    "cm0": 0.0227,
    "cm_alpha": -0.4629,
    "cm_q": -1.3012,
    "cn_beta": 0.03,
    "cn_r": -0.03,
    # aileron (roll moment), elevator (pitch moment), throttle (thrust gain), rudder (yaw moment)
    "control_effectiveness": (0.09, -0.12, 1.0, 0.005),
    "max_thrust": 15.0,                   # N
    "gravity": GRAVITY,                   # m/s²
}

# Model validity floor for the surrogate.
MIN_AIRSPEED = 1.0  # m/s

# -----------------------------
# Controller and optimizer defaults
# -----------------------------
OPTIMIZER_DEFAULTS = {
    "max_iterations": 100,
    "gradient_tolerance": 1e-6,  # projected-gradient max-norm
    "cost_tolerance": 1e-12,     # relative, sustained over stall_iterations
    "stall_iterations": 3,
    "step_tolerance": 1e-8,
    "fd_step": 1e-6,
    "line_search_shrink": 0.5,
    "line_search_max": 20,
    "memory": 10,
}

MPC_DEFAULTS = {
    "horizon": 1.0,          # s
    "control_dt": 0.1,       # s, N = 10 decision steps
    "physics_substeps": 12,  # physics dt = 1/120 s
    "state_weights": (1.0, 1.0, 1.0) + (0.0,) * 9,
    "control_weight": 0.5,
    "control_lower": 0.0,
    "control_upper": 1.0,
    "model_lag": False,
}

# -----------------------------
# Experiment defaults
# -----------------------------
# Disturbance: half of full deflection held for 0.2 s.
DISTURBANCE_MAGNITUDE = 0.5
DISTURBANCE_DURATION = 0.2  # s

EXPERIMENT_DEFAULTS = {
    "duration": 10.0,            # s
    "disturbance_start": 2.0,    # s
    "lag_enabled": False,
    "initial_altitude": 100.0,   # m
    "hold_last": True,
    "open_loop": False,          # frozen hover controls, no controller
    "cold_start": False,         # disable warm starting
}

# Bound-proximity used to flag a saturated channel.
SATURATION_TOLERANCE = 1e-9

# Number of significant digits for console output.
PRINT_DIGITS = 6


def default_output_dir():
    """Artifact root: $MIMIC_OUTPUT_DIR if set, else ./runs."""
    return Path(os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR))


def read_key_values(path):
    """
    Read a flat `key = value` file.

    Blank lines and `#` comments are ignored; values stay strings and are
    converted by the consumer. Duplicate keys and lines without `=` are errors.
    """
    entries = {}
    with open(path, encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{number}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{number}: empty key")
            if key in entries:
                raise ConfigError(f"{path}:{number}: duplicate key {key!r}")
            entries[key] = value
    return entries


def parse_float(value, key):
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    if not math.isfinite(number):
        raise ConfigError(f"{key}: expected a finite number, got {value!r}")
    return number


def parse_vector(value, key, size):
    if isinstance(value, str):
        parts = [p for p in value.replace(";", ",").split(",") if p.strip()]
    else:
        parts = list(value)
    if len(parts) != size:
        raise ConfigError(f"{key}: expected {size} comma-separated numbers, got {value!r}")
    return tuple(parse_float(p, key) for p in parts)


def parse_bool(value, key):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {value!r}")


def merge_defaults(defaults, overrides, vector_sizes=None):
    """
    Overlay string (or typed) overrides on a defaults table.

    Keys missing from `defaults` are rejected; numbers and vectors are parsed
    according to the type of the default.
    """
    vector_sizes = vector_sizes or {}
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    merged = dict(defaults)
    for key, value in overrides.items():
        default = defaults[key]
        if isinstance(default, bool):
            merged[key] = parse_bool(value, key)
        elif isinstance(default, tuple):
            merged[key] = parse_vector(value, key, vector_sizes.get(key, len(default)))
        elif isinstance(default, int):
            number = parse_float(value, key)
            if number != int(number):
                raise ConfigError(f"{key}: expected an integer, got {value!r}")
            merged[key] = int(number)
        else:
            merged[key] = parse_float(value, key)
    return merged
