"""Scenario files (TOML) to :class:`~tethermav.simkit.ScenarioConfig`.

Layout::

    name = "hover"
    duration = 30.0          # s
    seed = 1
    [vehicle]    mass, g, f_ext
    [tether]     omega, s_total
    [anchor]     r_i, z_i
    [noise]      accel_sigma, thrust_sigma, attitude_sigma_deg
    [kalman]     model, q_var, r_var, deriv_a, deriv_b, p0, x0
    [controller] mode, goal_pos, goal_tension, pull_threshold, landing_height,
                 max_tilt_deg, yaw_deg
    [controller.gains] kp_xy, kd_xy, kp_z, kd_z, k_tension, kd_tension
    [[pull]]     t_start, t_end, force

Top level also takes ``drag``, ``initial_pos``, ``dynamics_hz``,
``control_hz``, ``attitude_tau`` and ``ground_z`` (``false`` disables the
ground).  SI units, except angles, which are in degrees.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .catenary import TetherProperties
from .kalman import KalmanConfig
from .localization import AnchorPose
from .simkit import ControllerConfig, Gains, PullProfile, PullSegment, ScenarioConfig, SensorNoise
from .tension import QuadParams


class ConfigError(ValueError):
    """Every problem found in a scenario file, one per entry of ``errors``."""

    def __init__(self, errors: List[str]):
        super().__init__("invalid scenario config:\n  " + "\n  ".join(errors))
        self.errors = errors


def _num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _check(pred: Callable[[Any], bool], what: str):
    def f(v):
        return None if pred(v) else what

    return f


NUMBER = _check(_num, "must be a finite number")
POSITIVE = _check(lambda v: _num(v) and v > 0, "must be a positive number")
NONNEG = _check(lambda v: _num(v) and v >= 0, "must be a non-negative number")
INT = _check(lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 0, "must be a non-negative integer")
STRING = _check(lambda v: isinstance(v, str) and v != "", "must be a non-empty string")
VEC3 = _check(lambda v: isinstance(v, list) and len(v) == 3 and all(map(_num, v)), "must be a list of 3 numbers")
VEC2 = _check(lambda v: isinstance(v, list) and len(v) == 2 and all(map(_num, v)), "must be a list of 2 numbers")
GROUND = _check(lambda v: v is False or _num(v), "must be a number or false")


def _one_of(*options):
    return _check(lambda v: v in options, f"must be one of {', '.join(options)}")


SCHEMA: Dict[str, Dict[str, Callable]] = {
    "": {
        "name": STRING,
        "duration": POSITIVE,
        "seed": INT,
        "drag": NONNEG,
        "initial_pos": VEC3,
        "dynamics_hz": POSITIVE,
        "control_hz": POSITIVE,
        "attitude_tau": NONNEG,
        "ground_z": GROUND,
    },
    "vehicle": {"mass": POSITIVE, "g": POSITIVE, "f_ext": VEC3},
    "tether": {"omega": POSITIVE, "s_total": POSITIVE},
    "anchor": {"r_i": NUMBER, "z_i": NUMBER},
    "noise": {"accel_sigma": NONNEG, "thrust_sigma": NONNEG, "attitude_sigma_deg": NONNEG},
    "kalman": {
        "model": _one_of("constant", "derivative"),
        "q_var": POSITIVE,
        "r_var": POSITIVE,
        "deriv_a": NUMBER,
        "deriv_b": NUMBER,
        "p0": POSITIVE,
        "x0": VEC3,
    },
    "controller": {
        "mode": _one_of("position_hold", "tension_following", "tension_goal"),
        "goal_pos": VEC3,
        "goal_tension": VEC2,
        "pull_threshold": POSITIVE,
        "landing_height": POSITIVE,
        "max_tilt_deg": _check(lambda v: _num(v) and 0 < v < 90, "must be in (0, 90) degrees"),
        "yaw_deg": NUMBER,
    },
    "controller.gains": {k.name: NONNEG for k in dataclasses.fields(Gains)},
    "pull": {"t_start": NONNEG, "t_end": POSITIVE, "force": VEC3},
}

_TABLES = {"vehicle", "tether", "anchor", "noise", "kalman", "controller"}


def _validate_table(section: str, table: Any, errors: List[str], nested=()) -> Dict[str, Any]:
    if not isinstance(table, dict):
        errors.append(f"{section}: must be a table")
        return {}
    fields = SCHEMA[section]
    out = {}
    for key, value in table.items():
        where = f"{section}.{key}" if section else key
        if key in nested:
            continue
        if key not in fields:
            errors.append(f"{where}: unknown field")
            continue
        msg = fields[key](value)
        if msg:
            errors.append(f"{where}: {msg} (got {value!r})")
        else:
            out[key] = tuple(value) if isinstance(value, list) else value
    return out


def parse_config(data: Dict[str, Any], default_name: str = "scenario") -> ScenarioConfig:
    """Validate a decoded TOML document; raises :class:`ConfigError` listing all problems."""
    errors: List[str] = []
    top = {k: v for k, v in data.items() if k not in _TABLES and k != "pull"}
    top = _validate_table("", top, errors)
    t = {name: _validate_table(name, data.get(name, {}), errors, nested=("gains",)) for name in _TABLES}
    gains = _validate_table("controller.gains", data.get("controller", {}).get("gains", {}), errors) if isinstance(data.get("controller", {}), dict) else {}

    segments = []
    pulls = data.get("pull", [])
    if not isinstance(pulls, list):
        errors.append("pull: must be an array of tables ([[pull]])")
        pulls = []
    for i, seg in enumerate(pulls):
        s = _validate_table("pull", seg, errors)
        missing = [k for k in ("t_start", "t_end", "force") if k not in s and isinstance(seg, dict) and k not in seg]
        for k in missing:
            errors.append(f"pull[{i}].{k}: required")
        if len(s) == 3:
            segments.append(PullSegment(s["t_start"], s["t_end"], s["force"]))

    # cross-field and constructor checks, each reported separately
    def build(label: str, fn: Callable[[], Any]):
        try:
            return fn()
        except (ValueError, TypeError) as exc:
            errors.append(f"{label}: {exc}")
            return None

    vehicle = build("vehicle", lambda: QuadParams(**t["vehicle"]))
    tether = build("tether", lambda: TetherProperties(**t["tether"]))
    anchor = build("anchor", lambda: AnchorPose(**t["anchor"]))
    noise_kw = dict(t["noise"])
    if "attitude_sigma_deg" in noise_kw:
        noise_kw["attitude_sigma"] = math.radians(noise_kw.pop("attitude_sigma_deg"))
    noise = build("noise", lambda: SensorNoise(seed=top.get("seed", 0), **noise_kw))
    kalman = build("kalman", lambda: KalmanConfig(**t["kalman"]))
    ctrl_kw = dict(t["controller"])
    if "yaw_deg" in ctrl_kw:
        ctrl_kw["yaw"] = math.radians(ctrl_kw.pop("yaw_deg"))
    gains_obj = build("controller.gains", lambda: Gains(**gains))
    controller = build("controller", lambda: ControllerConfig(gains=gains_obj or Gains(), **ctrl_kw))
    pull = build("pull", lambda: PullProfile(tuple(segments)))

    if errors:
        raise ConfigError(errors)
    kw = dict(top)
    if kw.get("ground_z", 0.0) is False:
        kw["ground_z"] = None
    kw.setdefault("name", default_name)
    cfg = build(
        "scenario",
        lambda: ScenarioConfig(
            vehicle=vehicle, tether=tether, anchor=anchor, noise=noise,
            kalman=kalman, controller=controller, pull=pull, **kw,
        ),
    )
    if errors:
        raise ConfigError(errors)
    return cfg


def load_config(path, seed: Optional[int] = None) -> ScenarioConfig:
    """Read a scenario file; ``seed`` overrides the file's seed."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"{path}: {exc}"]) from None
    cfg = parse_config(data, default_name=path.stem)
    if seed is not None:
        cfg = with_seed(cfg, seed)
    return cfg


def with_seed(cfg: ScenarioConfig, seed: int) -> ScenarioConfig:
    return dataclasses.replace(cfg, seed=seed, noise=dataclasses.replace(cfg.noise, seed=seed))


def bundled_scenarios() -> Tuple[str, ...]:
    root = resources.files("tethermav") / "scenarios"
    return tuple(sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml")))


def bundled_path(name: str) -> Path:
    p = resources.files("tethermav") / "scenarios" / f"{name}.toml"
    return Path(str(p))


def resolve_config(ref: str) -> Path:
    """A path on disk, or the name of a bundled scenario."""
    p = Path(ref)
    if p.exists():
        return p
    if ref in bundled_scenarios():
        return bundled_path(ref)
    raise FileNotFoundError(f"no such scenario file or bundled scenario: {ref}")


def config_digest(cfg: ScenarioConfig) -> str:
    """sha256 of a canonical JSON rendering of the config."""
    text = json.dumps(dataclasses.asdict(cfg), sort_keys=True, separators=(",", ":"), default=repr)
    return hashlib.sha256(text.encode()).hexdigest()
