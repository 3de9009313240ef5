"""
vehicle/errors.py

Exception hierarchy shared by every package in the tool.
"""


class MimicError(Exception):
    """Base class for all errors raised by the tool."""


class DimensionError(MimicError, ValueError):
    """Trajectories or vectors whose shapes, lengths or sample periods disagree."""


class NumericError(MimicError, ArithmeticError):
    """A non-finite value appeared where a finite one is required."""


class SingularityError(NumericError):
    """Pitch entered the gimbal-singular band of the Euler representation."""


class ControlKindError(MimicError, TypeError):
    """A control vector of the wrong vehicle kind was supplied."""


class ControlBoundsError(MimicError, ValueError):
    """A control channel lies outside its admissible range."""


class ModelDomainError(MimicError):
    """The vehicle model was evaluated outside its region of validity."""


class WindowRangeError(MimicError, IndexError):
    """A requested time window is not covered by a schedule or log."""


class ConfigError(MimicError, ValueError):
    """Malformed or unknown configuration entries."""


class LogParseError(MimicError, ValueError):
    """A trajectory CSV could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SimulationError(MimicError):
    """Wraps a model error with the simulation time at which it occurred."""

    def __init__(self, message, sim_time):
        super().__init__(f"t={sim_time:.6g} s: {message}")
        self.sim_time = sim_time
