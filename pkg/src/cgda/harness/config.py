"""Experiment configuration: schema, validation, and object builders.

Configs are YAML documents of nested blocks. Every field has a default, so an
empty document is a valid wax experiment; unknown keys fail validation. The
fields ``optimizer.kind``, ``constraints.dilatation`` and
``constraints.max_velocity`` also accept lists, which the batch engine
expands into a cross-product of experiment cells.
"""
from __future__ import annotations

import copy
import math
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from ..constraints import BoundingBox, ConstraintSet, PenaltyStrategy, VelocityLimit, build_box
from ..errors import CgdaError, ConfigError
from ..evolvers import OPTIMIZER_KINDS, OptimizerConfig
from ..simenv import (
    COVERAGE_FEATURES,
    POSITION_FEATURES,
    EnvState,
    KinematicChain,
    Link,
    WallGrid,
)
from ..trajectory import GeneralizedAction, generalize, load_demonstration_csv
from .demos import generate_paint_goal, generate_wax_demos

ACTIONS = ("wax", "paint", "custom")

_ALPHA = math.radians(42.5)
_RADIAL = [math.cos(_ALPHA), math.sin(_ALPHA), 0.0]
_TANGENTIAL = [-math.sin(_ALPHA), math.cos(_ALPHA), 0.0]

# Horizontal work panel below the arm, entirely within paintable reach.
_DEFAULT_WALL = {
    "center": [0.35 * _RADIAL[0], 0.35 * _RADIAL[1], -0.42],
    "axis_u": list(_RADIAL),
    "axis_v": list(_TANGENTIAL),
    "width": 0.5,
    "height": 0.5,
    "resolution": 16,
    "paint_distance": 0.1,
}

DEFAULT_CONFIG: dict[str, Any] = {
    "action": "wax",
    "repetitions": 10,
    "base_seed": 12345,
    "t_min": 1.0,
    "demos": {
        "diameter": 0.30,
        "revolutions": 1.0,
        "count": 5,
        "noise_sigma": 0.005,
        "duration": 8.0,
        "samples": 120,
        "seed": None,
        "files": [],
    },
    "paint": {
        "duration": 16.0,
        "ramp_exponent": 1.0,
    },
    "environment": {
        "links": [
            {"length": 0.3, "axis": "Z"},
            {"length": 0.3, "axis": "Y"},
            {"length": 0.2, "axis": "Y"},
        ],
        "joint_limits": [[-15.0, 100.0], [-15.0, 100.0], [-15.0, 100.0]],
        "home": [40.0, 40.0, 30.0],
        "base_position": [0.0, 0.0, 0.0],
        "base_orientation_rpy": [0.0, 0.0, 0.0],
        "wall": _DEFAULT_WALL,
    },
    "optimizer": {
        "kind": "sst",
        "population_size": None,
        "mutation_probability": 0.60,
        "inertia": 1.2,
        "cognitive": 2.0,
        "social": 2.0,
        "v_max": 5.0,
        "inheritance_proportion": 0.55,
        "max_granules": 3,
        "granule_sigma": 10.0,
        "granule_threshold": 0.6,
        "stall_generations": None,
        "zero_error_epsilon": 1e-9,
        "max_iterations": None,
    },
    "constraints": {
        "dilatation": math.inf,
        "max_velocity": math.inf,
        "penalty": "death",
        "penalty_parameter": 10.0,
        "velocity_norm": "max",
    },
    "execution": {
        "warm_start": True,
        "warm_start_sigma": 10.0,
    },
}

# Population size and stall window differ per action when left unset.
_ACTION_OPTIMIZER_DEFAULTS = {
    "wax": {"population_size": 50, "stall_generations": 3},
    "paint": {"population_size": 10, "stall_generations": 10},
    "custom": {"population_size": 50, "stall_generations": 3},
}


def _as_float(value: Any, path: str) -> float:
    """Coerce a scalar config value, accepting the literal string 'inf'."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", ".inf", "infinity"):
            return math.inf
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _merge(defaults: dict, overrides: dict, path: str = "") -> dict:
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        here = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown configuration key: {here}")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{here}: expected a mapping")
            merged[key] = _merge(defaults[key], value, here)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _sweep_values(value: Any, path: str, coerce) -> list:
    values = value if isinstance(value, list) else [value]
    if not values:
        raise ConfigError(f"{path}: sweep list must not be empty")
    return [coerce(v, f"{path}[{i}]") for i, v in enumerate(values)]


def validate_config(raw: dict[str, Any] | None) -> dict[str, Any]:
    """Merge a raw mapping over the defaults and check every field.

    Returns the fully resolved configuration; raises ConfigError on unknown
    keys, wrong types, or out-of-range values.
    """
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    cfg = _merge(DEFAULT_CONFIG, raw)

    if cfg["action"] not in ACTIONS:
        raise ConfigError(f"action: must be one of {ACTIONS}, got {cfg['action']!r}")
    if _as_int(cfg["repetitions"], "repetitions") < 1:
        raise ConfigError("repetitions: must be at least 1")
    _as_int(cfg["base_seed"], "base_seed")
    if _as_float(cfg["t_min"], "t_min") <= 0:
        raise ConfigError("t_min: must be positive")

    demos = cfg["demos"]
    for key in ("diameter", "revolutions", "noise_sigma", "duration"):
        demos[key] = _as_float(demos[key], f"demos.{key}")
    if demos["diameter"] <= 0 or demos["duration"] <= 0:
        raise ConfigError("demos: diameter and duration must be positive")
    if _as_int(demos["count"], "demos.count") < 1:
        raise ConfigError("demos.count: must be at least 1")
    if _as_int(demos["samples"], "demos.samples") < 2:
        raise ConfigError("demos.samples: must be at least 2")
    if demos["seed"] is not None:
        _as_int(demos["seed"], "demos.seed")
    if not isinstance(demos["files"], list):
        raise ConfigError("demos.files: expected a list of paths")
    if cfg["action"] == "custom" and not demos["files"]:
        raise ConfigError("demos.files: custom action needs at least one file")
    for entry in demos["files"]:
        if not Path(entry).exists():
            raise ConfigError(f"demos.files: {entry} does not exist")

    paint = cfg["paint"]
    paint["duration"] = _as_float(paint["duration"], "paint.duration")
    paint["ramp_exponent"] = _as_float(paint["ramp_exponent"], "paint.ramp_exponent")
    if paint["duration"] < cfg["t_min"]:
        raise ConfigError("paint.duration: must be at least t_min")

    env = cfg["environment"]
    if not isinstance(env["links"], list) or not env["links"]:
        raise ConfigError("environment.links: expected a non-empty list")
    for i, link in enumerate(env["links"]):
        if not isinstance(link, dict) or set(link) != {"length", "axis"}:
            raise ConfigError(f"environment.links[{i}]: expected length and axis")
        _as_float(link["length"], f"environment.links[{i}].length")
    dof = len(env["links"])
    limits = env["joint_limits"]
    if not isinstance(limits, list) or len(limits) != dof:
        raise ConfigError("environment.joint_limits: one (min, max) pair per link")
    for i, pair in enumerate(limits):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"environment.joint_limits[{i}]: expected [min, max]")
    if len(env["home"]) != dof:
        raise ConfigError("environment.home: one angle per link")
    wall = env["wall"]
    wall["width"] = _as_float(wall["width"], "environment.wall.width")
    wall["height"] = _as_float(wall["height"], "environment.wall.height")
    wall["paint_distance"] = _as_float(wall["paint_distance"], "environment.wall.paint_distance")
    if _as_int(wall["resolution"], "environment.wall.resolution") < 1:
        raise ConfigError("environment.wall.resolution: must be at least 1")

    opt = cfg["optimizer"]
    kinds = _sweep_values(opt["kind"], "optimizer.kind", lambda v, p: v)
    for kind in kinds:
        if kind not in OPTIMIZER_KINDS:
            raise ConfigError(f"optimizer.kind: must be one of {OPTIMIZER_KINDS}, got {kind!r}")
    action_defaults = _ACTION_OPTIMIZER_DEFAULTS[cfg["action"]]
    for key in ("population_size", "stall_generations"):
        if opt[key] is None:
            opt[key] = action_defaults[key]
        if _as_int(opt[key], f"optimizer.{key}") < 1:
            raise ConfigError(f"optimizer.{key}: must be positive")
    for key in ("mutation_probability", "inertia", "cognitive", "social", "v_max",
                "inheritance_proportion", "granule_sigma", "granule_threshold",
                "zero_error_epsilon"):
        opt[key] = _as_float(opt[key], f"optimizer.{key}")
    if not 0.0 <= opt["mutation_probability"] <= 1.0:
        raise ConfigError("optimizer.mutation_probability: must lie in [0, 1]")
    if not 0.0 <= opt["inheritance_proportion"] <= 1.0:
        raise ConfigError("optimizer.inheritance_proportion: must lie in [0, 1]")
    if _as_int(opt["max_granules"], "optimizer.max_granules") < 0:
        raise ConfigError("optimizer.max_granules: must be non-negative")
    if opt["max_iterations"] is not None and _as_int(opt["max_iterations"],
                                                     "optimizer.max_iterations") < 1:
        raise ConfigError("optimizer.max_iterations: must be positive when set")

    cons = cfg["constraints"]
    dilatations = _sweep_values(cons["dilatation"], "constraints.dilatation", _as_float)
    if any(v < 0 for v in dilatations):
        raise ConfigError("constraints.dilatation: must be non-negative")
    cons["dilatation"] = dilatations if isinstance(cons["dilatation"], list) else dilatations[0]
    velocities = _sweep_values(cons["max_velocity"], "constraints.max_velocity", _as_float)
    if any(v <= 0 for v in velocities):
        raise ConfigError("constraints.max_velocity: must be positive")
    cons["max_velocity"] = velocities if isinstance(cons["max_velocity"], list) else velocities[0]
    if cons["penalty"] not in ("death", "static", "additive", "multiplicative"):
        raise ConfigError(f"constraints.penalty: unknown strategy {cons['penalty']!r}")
    cons["penalty_parameter"] = _as_float(cons["penalty_parameter"],
                                          "constraints.penalty_parameter")
    if cons["velocity_norm"] not in ("max", "l2"):
        raise ConfigError("constraints.velocity_norm: must be 'max' or 'l2'")

    execution = cfg["execution"]
    if not isinstance(execution["warm_start"], bool):
        raise ConfigError("execution.warm_start: expected a boolean")
    execution["warm_start_sigma"] = _as_float(execution["warm_start_sigma"],
                                              "execution.warm_start_sigma")
    return cfg


def load_config(path: str | Path) -> dict[str, Any]:
    """Load and validate a YAML configuration file."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return validate_config(raw)


def build_chain(cfg: dict[str, Any]) -> KinematicChain:
    env = cfg["environment"]
    return KinematicChain(
        links=tuple(Link(float(l["length"]), str(l["axis"])) for l in env["links"]),
        joint_limits=np.asarray(env["joint_limits"], dtype=float),
        base_position=np.asarray(env["base_position"], dtype=float),
        base_orientation_rpy=tuple(float(v) for v in env["base_orientation_rpy"]),
    )


def build_wall(cfg: dict[str, Any]) -> WallGrid:
    wall = cfg["environment"]["wall"]
    return WallGrid(
        center=np.asarray(wall["center"], dtype=float),
        axis_u=np.asarray(wall["axis_u"], dtype=float),
        axis_v=np.asarray(wall["axis_v"], dtype=float),
        width=wall["width"],
        height=wall["height"],
        resolution=wall["resolution"],
        paint_distance=wall["paint_distance"],
    )


def build_environment(cfg: dict[str, Any]) -> EnvState:
    """Environment template for the configured action, at the home pose."""
    chain = build_chain(cfg)
    home = np.asarray(cfg["environment"]["home"], dtype=float)
    if cfg["action"] == "paint":
        return EnvState(chain=chain, home=home, features=COVERAGE_FEATURES,
                        wall=build_wall(cfg))
    return EnvState(chain=chain, home=home, features=POSITION_FEATURES)


def build_action(cfg: dict[str, Any]) -> GeneralizedAction:
    """Generalized action from generated or loaded demonstrations."""
    if cfg["action"] == "paint":
        return generate_paint_goal(cfg["t_min"], cfg["paint"]["duration"],
                                   cfg["paint"]["ramp_exponent"])
    if cfg["action"] == "custom":
        demos = [load_demonstration_csv(p) for p in cfg["demos"]["files"]]
        if any(d.feature_count != 3 for d in demos):
            raise ConfigError("custom demos must carry exactly 3 features (x, y, z)")
        return generalize(demos, cfg["t_min"])
    d = cfg["demos"]
    seed = d["seed"] if d["seed"] is not None else cfg["base_seed"]
    demos = generate_wax_demos(
        d["diameter"], d["count"], d["noise_sigma"], d["duration"],
        samples=d["samples"], revolutions=d["revolutions"],
        rng=np.random.default_rng(seed),
    )
    try:
        return generalize(demos, cfg["t_min"])
    except CgdaError as exc:
        raise ConfigError(f"demos: {exc}") from exc


def build_constraint_set(
    cfg: dict[str, Any],
    action: GeneralizedAction,
    env: EnvState,
    dilatation: float,
    max_velocity: float,
) -> ConstraintSet:
    """Constraint bundle for one experiment cell.

    The box wraps the action's solution points: the goal positions for
    geometric actions, the wall cells for coverage actions.
    """
    if math.isinf(dilatation):
        box = BoundingBox.unbounded()
    elif env.features == COVERAGE_FEATURES:
        box = build_box(env.wall.cell_centers, dilatation)
    else:
        box = build_box(action.trajectory.goals.T, dilatation)
    velocity = (VelocityLimit.unlimited() if math.isinf(max_velocity)
                else VelocityLimit(max_velocity, cfg["constraints"]["velocity_norm"]))
    penalty = PenaltyStrategy(cfg["constraints"]["penalty"],
                              cfg["constraints"]["penalty_parameter"])
    return ConstraintSet(box=box, velocity=velocity, penalty=penalty)


def build_optimizer_config(cfg: dict[str, Any]) -> OptimizerConfig:
    opt = cfg["optimizer"]
    return OptimizerConfig(
        population_size=opt["population_size"],
        mutation_probability=opt["mutation_probability"],
        inertia=opt["inertia"],
        cognitive=opt["cognitive"],
        social=opt["social"],
        v_max=opt["v_max"],
        inheritance_proportion=opt["inheritance_proportion"],
        max_granules=opt["max_granules"],
        granule_sigma=opt["granule_sigma"],
        granule_threshold=opt["granule_threshold"],
        stall_generations=opt["stall_generations"],
        zero_error_epsilon=opt["zero_error_epsilon"],
        max_iterations=opt["max_iterations"],
        rng_seed=cfg["base_seed"],
    )


def expand_cells(cfg: dict[str, Any]) -> list[dict[str, Any]]:
    """Cross-product of swept fields, one dict per experiment cell."""
    kinds = cfg["optimizer"]["kind"]
    kinds = kinds if isinstance(kinds, list) else [kinds]
    dilatations = cfg["constraints"]["dilatation"]
    dilatations = dilatations if isinstance(dilatations, list) else [dilatations]
    velocities = cfg["constraints"]["max_velocity"]
    velocities = velocities if isinstance(velocities, list) else [velocities]
    cells = []
    for kind in kinds:
        for dilatation in dilatations:
            for velocity in velocities:
                d = _as_float(dilatation, "constraints.dilatation")
                v = _as_float(velocity, "constraints.max_velocity")
                cells.append({
                    "method": kind,
                    "dilatation": d,
                    "max_velocity": v,
                    "label": f"{kind}|dilatation={_fmt(d)}|max_velocity={_fmt(v)}",
                })
    return cells


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:g}"
