"""Run configuration: one YAML file with full defaults, validated with line-numbered errors."""
from __future__ import annotations

import copy
import hashlib
import json
import os
import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .hydro.drag import DragModel
from .hydro.flow import FlowConditions
from .structural.fem import DEFAULT_MATERIALS
from .structural.materials import HyperelasticMaterial, LinearElasticMaterial
from .structural.mesh import ALUMINIUM_INSERT, PLA_LAYER, SILICONE, WingSectionSpec
from .structural.solver import SolverSettings
from .vehicle import VehicleConfig, soft_wing_vehicle

__all__ = ["RunConfig", "DEFAULT_CONFIG", "load_config", "load_yaml", "data_dir", "parse_alpha_spec"]

DATA_ENV = "MORPHGLIDE_DATA"

DEFAULT_CONFIG = {
    "materials": {
        "silicone": {"c1_pa": 4.76e4, "c2_pa": 1.19e4, "bulk_factor": 1000.0},
        "pla": {"young_pa": 3.50e9, "poisson": 0.20},
        "aluminium": {"young_pa": 6.90e10, "poisson": 0.33},
    },
    "mesh": {},  # overrides of WingSectionSpec fields
    "solver": {"n_load_steps": 10, "max_newton": 40, "tol_factor": 1e-8, "max_bisections": 5},
    "drag": {"k_lift": 0.6, "re_transition": 5e5, "ff_linear": 2.7, "ff_quartic": 100.0},
    "vehicle": {
        "re_target": 1.06e5,
        "scale_speed_mps": 0.26,
        "wing_chord_m": 0.230,
        "wing_span_m": 0.714,
        "overrides": {},  # any VehicleConfig field, applied after scaling
    },
    "sweep": {
        "inflations_mL": [0, 15, 30, 60, 90, 120],
        "alphas_deg": list(range(-8, 9)),
        "speeds_mps": [0.15, 0.26, 0.35, 0.55],
        "n_panels": 160,
        "max_workers": 1,
        "roll_alpha_deg": 0.0,
    },
    "glide": {
        "rigid_inflation_mL": 0,
        "morph_inflation_mL": 15,
        "speed_mps": 0.26,
        "depth_amplitude_m": 1000.0,
        "n_cycles": 10,
        "alpha_min_deg": 0.0,
        "alpha_max_deg": 8.0,
        "morph_schedule": [],
        "buoyancy_energy_j_per_cycle": 0.0,
    },
    "output_dir": "morphglide-out",
    "data_dir": None,
}

# keys that do not change any computed number
_HASH_EXCLUDE = ("output_dir", "data_dir")
_SWEEP_HASH_EXCLUDE = ("max_workers",)


class _LineLoader(yaml.SafeLoader):
    """SafeLoader that records the source line of every mapping key."""


def _construct_mapping(loader, node):
    mapping = {}
    lines = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=True)
        if key in mapping:
            raise ConfigError(f"line {key_node.start_mark.line + 1}: duplicate key {key!r}")
        mapping[key] = loader.construct_object(value_node, deep=True)
        lines[key] = key_node.start_mark.line + 1
    return _Mapping(mapping, lines, node.start_mark.line + 1)


class _Mapping(dict):
    def __init__(self, data, lines, line):
        super().__init__(data)
        self.lines = lines
        self.line = line


_LineLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)
# YAML 1.1 reads 4.76e4 or 1e5 (no exponent sign) as a string; accept them as floats
_LineLoader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$"),
    list("-+0123456789"),
)


def load_yaml(path):
    """Parse a YAML file; syntax errors are reported as ConfigError with ``path:line``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        data = yaml.load(text, Loader=_LineLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else "?"
        raise ConfigError(f"{path}:{line}: {exc.problem or exc}") from None
    except ConfigError as exc:
        raise ConfigError(f"{path}:{str(exc).removeprefix('line ')}") from None
    if data is None:
        data = _Mapping({}, {}, 1)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: expected a mapping at the top level")
    return data


def _line(mapping, key):
    return getattr(mapping, "lines", {}).get(key, getattr(mapping, "line", "?"))


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_plain(v) for v in obj]
    return obj


def _merge(defaults, user, where, source):
    """Deep-merge ``user`` into ``defaults``; unknown keys are errors."""
    out = copy.deepcopy(defaults)
    for key, value in user.items():
        line = _line(user, key)
        if key not in defaults:
            known = ", ".join(sorted(defaults))
            raise ConfigError(f"{source}:{line}: unknown key {where}{key!r} (expected one of: {known})")
        if isinstance(defaults[key], dict) and key not in ("mesh", "overrides"):
            if not isinstance(value, dict):
                raise ConfigError(f"{source}:{line}: {where}{key} must be a mapping")
            out[key] = _merge(defaults[key], value, f"{where}{key}.", source)
        else:
            out[key] = _plain(value)
    return out


def _keyed_error(key, message):
    err = ConfigError(message)
    err.key = key
    return err


def _lookup_line(data, key):
    """Source line of a dotted key in a line-annotated mapping, or None."""
    node, line = data, None
    for part in (key or "").split("."):
        if not isinstance(node, dict) or part not in node:
            break
        line = _line(node, part)
        node = node[part]
    return line


def _number_list(values, name):
    if not isinstance(values, list) or not values:
        raise _keyed_error(name, f"{name} must be a non-empty list of numbers")
    try:
        out = [float(v) for v in values]
    except (TypeError, ValueError):
        raise _keyed_error(name, f"{name} must contain only numbers") from None
    if len(set(out)) != len(out):
        raise _keyed_error(name, f"{name} has duplicate entries")
    return sorted(out)


def parse_alpha_spec(text):
    """``"4"`` -> [4.0]; ``"-8:8:1"`` -> [-8, -7, ..., 8] (end inclusive)."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            a, b, step = (float(p) for p in parts)
            if step <= 0 or b < a:
                raise ValueError
            n = int(round((b - a) / step))
            return [float(v) for v in np.round(a + step * np.arange(n + 1), 12)]
    except ValueError:
        pass
    raise ConfigError(f"bad alpha specification {text!r}: use a number or start:stop:step")


@dataclass(frozen=True)
class RunConfig:
    materials: dict
    mesh: dict
    solver: dict
    drag: dict
    vehicle: dict
    sweep: dict
    glide: dict
    output_dir: str
    data_dir: str | None = None
    source: str = "<defaults>"

    @classmethod
    def from_dict(cls, data, source="<dict>"):
        merged = _merge(DEFAULT_CONFIG, data or {}, "", source)
        cfg = cls(**merged, source=source)
        try:
            cfg.validate()
        except ConfigError as exc:
            line = _lookup_line(data, getattr(exc, "key", None))
            if line is not None:
                raise ConfigError(f"{source}:{line}: {exc}") from None
            raise
        return cfg

    def as_dict(self):
        return {f.name: copy.deepcopy(getattr(self, f.name)) for f in fields(self) if f.name != "source"}

    def with_overrides(self, **changes):
        """Copy with section-level updates, e.g. ``sweep={"speeds_mps": [0.26]}``."""
        data = self.as_dict()
        for key, value in changes.items():
            if isinstance(data.get(key), dict) and isinstance(value, dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        cfg = RunConfig(**data, source=self.source)
        cfg.validate()
        return cfg

    def validate(self):
        sw = self.sweep
        sw["inflations_mL"] = _number_list(sw["inflations_mL"], "sweep.inflations_mL")
        sw["alphas_deg"] = _number_list(sw["alphas_deg"], "sweep.alphas_deg")
        sw["speeds_mps"] = _number_list(sw["speeds_mps"], "sweep.speeds_mps")
        if any(v < 0 for v in sw["inflations_mL"]):
            raise _keyed_error("sweep.inflations_mL",
                               "sweep.inflations_mL must be non-negative (the opposite chamber is the mirror image)")
        if any(v <= 0 for v in sw["speeds_mps"]):
            raise _keyed_error("sweep.speeds_mps", "sweep.speeds_mps must be positive")
        if int(sw["max_workers"]) < 1:
            raise _keyed_error("sweep.max_workers", "sweep.max_workers must be at least 1")
        unknown = set(self.mesh) - {f.name for f in fields(WingSectionSpec)}
        if unknown:
            raise _keyed_error("mesh", f"unknown mesh parameter(s): {', '.join(sorted(unknown))}")
        unknown = set(self.vehicle["overrides"]) - {f.name for f in fields(VehicleConfig)}
        if unknown:
            raise _keyed_error("vehicle.overrides", f"unknown vehicle override(s): {', '.join(sorted(unknown))}")
        # building the objects runs their own invariant checks
        for key, build in (("materials", self.materials_map), ("mesh", self.mesh_spec),
                           ("solver", self.solver_settings), ("drag", self.drag_model),
                           ("vehicle", self.vehicle_config)):
            try:
                build()
            except (TypeError, ValueError) as exc:
                raise _keyed_error(key, f"invalid {key} settings: {exc}") from None

    # -- object builders -------------------------------------------------

    def materials_map(self):
        m = self.materials
        s = m["silicone"]
        c1, c2 = float(s["c1_pa"]), float(s["c2_pa"])
        silicone = HyperelasticMaterial(c1, c2, float(s["bulk_factor"]) * (c1 + c2),
                                        DEFAULT_MATERIALS[SILICONE].density_kgpm3, "ecoflex-00-50")
        pla = LinearElasticMaterial(float(m["pla"]["young_pa"]), float(m["pla"]["poisson"]), 1250.0, "pla")
        alu = LinearElasticMaterial(float(m["aluminium"]["young_pa"]), float(m["aluminium"]["poisson"]), 2700.0,
                                    "aluminium")
        return {SILICONE: silicone, PLA_LAYER: pla, ALUMINIUM_INSERT: alu}

    def mesh_spec(self):
        return replace(WingSectionSpec(), **self.mesh)

    def solver_settings(self):
        s = self.solver
        return SolverSettings(
            n_load_steps=int(s["n_load_steps"]),
            max_newton=int(s["max_newton"]),
            tol_factor=float(s["tol_factor"]),
            max_bisections=int(s["max_bisections"]),
        )

    def drag_model(self):
        return DragModel(**{k: float(v) for k, v in self.drag.items()})

    def vehicle_config(self):
        v = self.vehicle
        cfg = soft_wing_vehicle(
            float(v["re_target"]), float(v["scale_speed_mps"]), float(v["wing_chord_m"]), float(v["wing_span_m"])
        )
        return replace(cfg, **v["overrides"]) if v["overrides"] else cfg

    def flow(self, u_mps):
        return FlowConditions(float(u_mps), length_m=float(self.vehicle["wing_chord_m"]))

    # -- identity ----------------------------------------------------------

    def _hashed(self, keys):
        data = self.as_dict()
        payload = {k: data[k] for k in keys}
        if "sweep" in payload:
            payload["sweep"] = {k: v for k, v in payload["sweep"].items() if k not in _SWEEP_HASH_EXCLUDE}
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=float)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @property
    def hash(self):
        """Digest of every setting that can change a computed number."""
        return self._hashed([f.name for f in fields(self) if f.name not in _HASH_EXCLUDE + ("source",)])

    @property
    def structural_hash(self):
        """Digest of the settings a deformed profile depends on."""
        return self._hashed(["materials", "mesh", "solver"])


def load_config(path=None):
    if path is None:
        return RunConfig.from_dict({}, "<defaults>")
    data = load_yaml(path)
    return RunConfig.from_dict(data, str(path))


def data_dir(config=None):
    """Experimental-data directory: $MORPHGLIDE_DATA, then the config, then the source checkout."""
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    if config is not None and config.data_dir:
        return Path(config.data_dir)
    return Path(__file__).resolve().parents[2] / "data" / "experimental"
