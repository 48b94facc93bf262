"""TOML configuration: schema-checked loading and effective-value echo.

Every tunable lives in one of the sections below; unknown sections or
keys are hard errors so typos cannot silently fall back to defaults.
The sliding-surface gain ``c`` is set once under ``[gains]`` and shared
with the trigger threshold, which is derived from it.
"""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python 3.10
    import tomli as tomllib

from .control import GainSet
from .engine import DisturbanceSpec, SimConfig
from .errors import ConfigError
from .params import LimbParams
from .trajectory import GaitSpec, TabulatedTrajectory
from .trigger import TriggerParams

_SECTION_TYPES = {
    "limb": LimbParams,
    "gains": GainSet,
    "trigger": TriggerParams,
    "gait": GaitSpec,
    "sim": SimConfig,
    "disturbance": DisturbanceSpec,
}

# keys that are not plain floats
_INT_KEYS = {("sim", "seed"), ("disturbance", "harmonics")}
_STR_KEYS = {("sim", "hold_mode"), ("trajectory", "csv")}

# trigger.c is derived from gains.c, never set directly
_HIDDEN_KEYS = {("trigger", "c")}

# published config keys that differ from the dataclass field names
_KEY_TO_FIELD = {
    "trigger": {
        "L": "lipschitz",
        "lambda": "lambda_est",
        "h": "h_bound",
        "d0": "d0_bound",
    },
}
_FIELD_TO_KEY = {
    section: {f: k for k, f in mapping.items()}
    for section, mapping in _KEY_TO_FIELD.items()
}


def _field_name(section: str, key: str) -> str:
    return _KEY_TO_FIELD.get(section, {}).get(key, key)


def _key_name(section: str, field_name: str) -> str:
    return _FIELD_TO_KEY.get(section, {}).get(field_name, field_name)


def _section_keys(section: str) -> tuple[str, ...]:
    if section == "trajectory":
        return ("csv",)
    if section == "actuator":
        return ("damping",)
    cls = _SECTION_TYPES[section]
    return tuple(
        _key_name(section, f.name) for f in dataclasses.fields(cls)
        if (section, f.name) not in _HIDDEN_KEYS
    )


_ALL_SECTIONS = tuple(_SECTION_TYPES) + ("trajectory", "actuator")


@dataclasses.dataclass(frozen=True)
class FullConfig:
    limb: LimbParams
    gains: GainSet
    trigger: TriggerParams
    gait: GaitSpec
    trajectory_csv: str | None
    sim: SimConfig
    disturbance: DisturbanceSpec
    actuator_damping: float

    def trajectory(self):
        if self.trajectory_csv is not None:
            return TabulatedTrajectory.from_csv(self.trajectory_csv)
        return self.gait

    def run_kwargs(self) -> dict:
        return dict(
            limb=self.limb,
            gains=self.gains,
            trigger_params=self.trigger,
            traj=self.trajectory(),
            sim=self.sim,
            disturbance=self.disturbance,
            damping=self.actuator_damping,
        )

    def validate(self) -> None:
        self.limb.validate()
        self.gains.validate()
        self.trigger.validate()
        self.gait.validate()
        self.sim.validate()
        self.disturbance.validate()
        if not (self.actuator_damping > 0.0
                and math.isfinite(self.actuator_damping)):
            raise ConfigError("actuator.damping must be finite and positive")


def default_config() -> FullConfig:
    gains = GainSet()
    return FullConfig(
        limb=LimbParams(),
        gains=gains,
        trigger=TriggerParams(c=gains.c),
        gait=GaitSpec(),
        trajectory_csv=None,
        sim=SimConfig(),
        disturbance=DisturbanceSpec(),
        actuator_damping=48.0,
    )


def _coerce(section: str, key: str, value):
    where = f"{section}.{key}"
    if (section, key) in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(f"{where} must be a string")
        return value
    if isinstance(value, bool):
        raise ConfigError(f"{where} must be a number, got a boolean")
    if (section, key) in _INT_KEYS:
        if not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer")
        return value
    if not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    return float(value)


def load_config(path: str | Path | None) -> FullConfig:
    """Parse a TOML file into a validated configuration.

    ``path`` may be None for all-defaults.  Raises ConfigError on
    unreadable files, TOML syntax errors, unknown sections or keys,
    type mismatches, and out-of-range values.
    """
    data: dict = {}
    if path is not None:
        p = Path(path)
        try:
            raw = p.read_bytes()
        except OSError as exc:
            raise ConfigError(f"cannot read config {p}: {exc}") from None
        try:
            data = tomllib.loads(raw.decode("utf-8"))
        except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
            raise ConfigError(f"invalid TOML in {p}: {exc}") from None

    for section in data:
        if section not in _ALL_SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(data[section], dict):
            raise ConfigError(f"[{section}] must be a table")
        allowed = _section_keys(section)
        for key in data[section]:
            if key not in allowed:
                raise ConfigError(f"unknown config key {section}.{key}")

    def section(name: str) -> dict:
        raw = data.get(name, {})
        return {
            _field_name(name, k): _coerce(name, k, v)
            for k, v in raw.items()
        }

    gains = GainSet(**section("gains"))
    trigger = TriggerParams(c=gains.c, **section("trigger"))
    traj_csv = section("trajectory").get("csv")
    actuator = section("actuator")
    cfg = FullConfig(
        limb=LimbParams(**section("limb")),
        gains=gains,
        trigger=trigger,
        gait=GaitSpec(**section("gait")),
        trajectory_csv=traj_csv,
        sim=SimConfig(**section("sim")),
        disturbance=DisturbanceSpec(**section("disturbance")),
        actuator_damping=actuator.get("damping", 48.0),
    )
    cfg.validate()
    return cfg


def _toml_value(value) -> str:
    if isinstance(value, str):
        body = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{body}"'
    if isinstance(value, bool):
        raise ConfigError("boolean config values are not supported")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ConfigError(f"cannot serialize non-finite value {value!r}")
        text = repr(value)
        return text if any(ch in text for ch in ".e") else text + ".0"
    raise ConfigError(f"cannot serialize config value {value!r}")


def dump_config(cfg: FullConfig) -> str:
    """Echo the effective configuration as TOML, loadable by load_config."""
    objs = {
        "limb": cfg.limb,
        "gains": cfg.gains,
        "trigger": cfg.trigger,
        "gait": cfg.gait,
        "sim": cfg.sim,
        "disturbance": cfg.disturbance,
    }
    lines = []
    for section in _ALL_SECTIONS:
        if section == "trajectory":
            if cfg.trajectory_csv is None:
                continue
            pairs = [("csv", cfg.trajectory_csv)]
        elif section == "actuator":
            pairs = [("damping", cfg.actuator_damping)]
        else:
            obj = objs[section]
            pairs = [(k, getattr(obj, _field_name(section, k)))
                     for k in _section_keys(section)]
        lines.append(f"[{section}]")
        lines.extend(f"{k} = {_toml_value(v)}" for k, v in pairs)
        lines.append("")
    return "\n".join(lines)


def write_effective_config(path: str | Path, cfg: FullConfig) -> None:
    Path(path).write_bytes(dump_config(cfg).encode("utf-8"))
