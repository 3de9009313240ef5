"""
experiments/spec.py

Experiment definitions read from flat `key = value` spec files.

Recognized keys: name, scenario (pitch | roll | log | hover | custom), path
(recorded log or control schedule, relative to the spec file), output_dir and
the EXPERIMENT_DEFAULTS keys. Keys prefixed `mpc.`, `platform.` and `target.`
override the controller, multi-rotor and fixed-wing settings.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import config
from controller.mpc import MpcConfig
from dynamics.fixedwing import FixedWingParams
from dynamics.multirotor import MultiRotorParams
from vehicle.errors import ConfigError

_SECTIONS = ("mpc", "platform", "target")


class Scenario(Enum):
    PITCH_DISTURBANCE = "pitch"
    ROLL_DISTURBANCE = "roll"
    LOG_REPLAY = "log"
    HOVER = "hover"
    CUSTOM = "custom"

    @property
    def is_disturbance(self):
        return self in (Scenario.PITCH_DISTURBANCE, Scenario.ROLL_DISTURBANCE)

    @property
    def needs_path(self):
        return self in (Scenario.LOG_REPLAY, Scenario.CUSTOM)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str = "experiment"
    scenario: Scenario = Scenario.HOVER
    scenario_path: Optional[Path] = None
    duration: float = config.EXPERIMENT_DEFAULTS["duration"]
    disturbance_start: float = config.EXPERIMENT_DEFAULTS["disturbance_start"]
    lag_enabled: bool = config.EXPERIMENT_DEFAULTS["lag_enabled"]
    initial_altitude: float = config.EXPERIMENT_DEFAULTS["initial_altitude"]
    hold_last: bool = config.EXPERIMENT_DEFAULTS["hold_last"]
    open_loop: bool = config.EXPERIMENT_DEFAULTS["open_loop"]
    cold_start: bool = config.EXPERIMENT_DEFAULTS["cold_start"]
    output_dir: Optional[Path] = None
    mpc: MpcConfig = field(default_factory=MpcConfig)
    platform: MultiRotorParams = field(default_factory=MultiRotorParams)
    target: FixedWingParams = field(default_factory=FixedWingParams)

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if not self.duration > 0.0:
            raise ConfigError(f"duration must be positive, got {self.duration}")
        if self.scenario.is_disturbance and not 0.0 <= self.disturbance_start < self.duration:
            raise ConfigError(
                f"disturbance_start {self.disturbance_start} s must lie in [0, duration={self.duration}) s"
            )
        if self.scenario.needs_path and self.scenario_path is None:
            raise ConfigError(f"scenario {self.scenario.value!r} needs a 'path' entry")
        if self.scenario_path is not None:
            object.__setattr__(self, "scenario_path", Path(self.scenario_path))
        if self.output_dir is not None:
            object.__setattr__(self, "output_dir", Path(self.output_dir))

    @classmethod
    def from_mapping(cls, mapping, base_dir=None):
        sections = {name: {} for name in _SECTIONS}
        plain = {}
        for key, value in mapping.items():
            prefix, dot, rest = key.partition(".")
            if dot and prefix in sections:
                sections[prefix][rest] = value
            else:
                plain[key] = value

        name = plain.pop("name", cls.name)
        try:
            scenario = Scenario(plain.pop("scenario", Scenario.HOVER.value))
        except ValueError:
            choices = ", ".join(s.value for s in Scenario)
            raise ConfigError(f"scenario must be one of {choices}") from None
        path = plain.pop("path", None)
        if path is not None and base_dir is not None:
            path = Path(base_dir) / path
        output_dir = plain.pop("output_dir", None)

        return cls(
            name=name,
            scenario=scenario,
            scenario_path=path,
            output_dir=output_dir,
            mpc=MpcConfig.from_mapping(sections["mpc"]),
            platform=MultiRotorParams.from_mapping(sections["platform"]),
            target=FixedWingParams.from_mapping(sections["target"]),
            **config.merge_defaults(config.EXPERIMENT_DEFAULTS, plain),
        )

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        return cls.from_mapping(config.read_key_values(path), base_dir=path.parent)

    def resolved_output_dir(self, override=None):
        if override is not None:
            return Path(override)
        if self.output_dir is not None:
            return self.output_dir
        return config.default_output_dir() / self.name
