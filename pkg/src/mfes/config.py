"""YAML campaign configuration: strict loading, round-trip serialization.

The file layout mirrors :class:`~mfes.campaign.CampaignConfig` field for
field. Unknown keys anywhere are errors, as are missing required sections,
so typos fail loudly instead of silently running defaults.
"""

from __future__ import annotations

import dataclasses
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .acquisition import AcquisitionConfig
from .campaign import CampaignConfig, TerminationConfig
from .cost import PenaltyParams
from .gp import KernelParams, ModelParams

__all__ = ["ConfigError", "load_config", "config_to_dict", "config_from_dict", "shipped_configs"]


class ConfigError(ValueError):
    """Malformed, incomplete, or unknown configuration input."""


def _require_mapping(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a mapping, got {type(obj).__name__}")
    return obj


def _reject_unknown(d: dict, allowed, where: str) -> None:
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(unknown)}")


def _number(d: dict, key: str, where: str, default=None, required: bool = False):
    if key not in d:
        if required:
            raise ConfigError(f"missing required key {where}.{key}")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    return v


def _int(d: dict, key: str, where: str, default=None, required: bool = False):
    v = _number(d, key, where, default=default, required=required)
    if v is None or v is default and key not in d:
        return default
    if isinstance(v, float) and not v.is_integer():
        raise ConfigError(f"{where}.{key} must be an integer, got {v!r}")
    return int(v)


def _kernel(d, where: str) -> KernelParams:
    d = _require_mapping(d, where)
    _reject_unknown(d, ("variance", "alpha", "lengthscales"), where)
    ell = d.get("lengthscales")
    if not isinstance(ell, (list, tuple)) or not ell or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in ell
    ):
        raise ConfigError(f"{where}.lengthscales must be a non-empty list of numbers")
    try:
        return KernelParams(
            variance=float(_number(d, "variance", where, required=True)),
            alpha=float(_number(d, "alpha", where, required=True)),
            lengthscales=tuple(float(v) for v in ell),
        )
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def _model(d, where: str = "model") -> ModelParams:
    d = _require_mapping(d, where)
    allowed = ("k_sim", "k_eps", "mu_sim", "mu_eps", "noise_sim", "noise_real")
    _reject_unknown(d, allowed, where)
    for k in ("k_sim", "k_eps"):
        if k not in d:
            raise ConfigError(f"missing required key {where}.{k}")
    return ModelParams(
        k_sim=_kernel(d["k_sim"], f"{where}.k_sim"),
        k_eps=_kernel(d["k_eps"], f"{where}.k_eps"),
        mu_sim=float(_number(d, "mu_sim", where, default=0.0)),
        mu_eps=float(_number(d, "mu_eps", where, default=0.0)),
        noise_sim=float(_number(d, "noise_sim", where, default=0.05)),
        noise_real=float(_number(d, "noise_real", where, default=0.05)),
    )


def _acquisition(d, where: str = "acquisition") -> AcquisitionConfig:
    d = _require_mapping(d, where)
    allowed = (
        "grid_size",
        "pmin_samples",
        "fantasy_draws",
        "candidate_count",
        "w_sim",
        "w_real",
        "seed",
    )
    _reject_unknown(d, allowed, where)
    defaults = AcquisitionConfig()
    try:
        return AcquisitionConfig(
            grid_size=_int(d, "grid_size", where, default=defaults.grid_size),
            pmin_samples=_int(d, "pmin_samples", where, default=defaults.pmin_samples),
            fantasy_draws=_int(d, "fantasy_draws", where, default=defaults.fantasy_draws),
            candidate_count=_int(d, "candidate_count", where, default=None),
            w_sim=float(_number(d, "w_sim", where, default=defaults.w_sim)),
            w_real=float(_number(d, "w_real", where, default=defaults.w_real)),
            seed=_int(d, "seed", where, default=defaults.seed),
        )
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def _termination(d, where: str = "termination") -> TerminationConfig:
    d = _require_mapping(d, where)
    allowed = (
        "velocity",
        "entropy_threshold",
        "min_iterations",
        "max_iterations",
        "innovation_cap",
        "real_budget",
    )
    _reject_unknown(d, allowed, where)
    defaults = TerminationConfig()
    threshold = _number(d, "entropy_threshold", where, default=None)
    try:
        return TerminationConfig(
            velocity=float(_number(d, "velocity", where, default=defaults.velocity)),
            entropy_threshold=None if threshold is None else float(threshold),
            min_iterations=_int(d, "min_iterations", where, default=defaults.min_iterations),
            max_iterations=_int(d, "max_iterations", where, default=defaults.max_iterations),
            innovation_cap=float(
                _number(d, "innovation_cap", where, default=defaults.innovation_cap)
            ),
            real_budget=_int(d, "real_budget", where, default=None),
        )
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def _penalty(d, where: str = "penalty") -> PenaltyParams:
    d = _require_mapping(d, where)
    _reject_unknown(d, ("s", "gamma", "lam", "x_max"), where)
    if "x_max" not in d:
        raise ConfigError(f"missing required key {where}.x_max")
    x_max = d["x_max"]
    if not isinstance(x_max, (list, tuple)) or not x_max:
        raise ConfigError(f"{where}.x_max must be a non-empty list of numbers")
    try:
        return PenaltyParams(
            x_max=np.asarray([float(v) for v in x_max]),
            s=float(_number(d, "s", where, default=7.5)),
            gamma=float(_number(d, "gamma", where, default=6.0)),
            lam=float(_number(d, "lam", where, default=0.75)),
        )
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def config_from_dict(raw: dict) -> CampaignConfig:
    """Build a validated :class:`CampaignConfig` from parsed YAML/JSON."""
    raw = _require_mapping(raw, "config")
    allowed = (
        "scenario",
        "model",
        "acquisition",
        "termination",
        "penalty",
        "plane",
        "objective_transform",
        "master_seed",
    )
    _reject_unknown(raw, allowed, "config")
    if "scenario" not in raw:
        raise ConfigError("missing required key: scenario")
    scenario = raw["scenario"]
    if not isinstance(scenario, str):
        raise ConfigError(f"scenario must be a string, got {scenario!r}")
    if "model" not in raw:
        raise ConfigError("missing required key: model")
    plane = raw.get("plane", "summed")
    if plane not in ("alpha", "beta", "summed"):
        raise ConfigError(f"plane must be alpha, beta, or summed, got {plane!r}")
    transform = raw.get("objective_transform", "identity")
    if transform not in ("identity", "log"):
        raise ConfigError(
            f"objective_transform must be identity or log, got {transform!r}"
        )
    return CampaignConfig(
        scenario=scenario,
        model=_model(raw["model"]),
        acquisition=_acquisition(raw.get("acquisition", {})),
        termination=_termination(raw.get("termination", {})),
        penalty=_penalty(raw["penalty"]) if "penalty" in raw else None,
        plane=plane,
        objective_transform=transform,
        master_seed=_int(raw, "master_seed", "config", default=0),
    )


def config_to_dict(cfg: CampaignConfig) -> dict:
    """Plain-dict form of a config (inverse of :func:`config_from_dict`)."""
    out = {
        "scenario": cfg.scenario,
        "model": {
            "k_sim": dataclasses.asdict(cfg.model.k_sim) | {
                "lengthscales": list(cfg.model.k_sim.lengthscales)
            },
            "k_eps": dataclasses.asdict(cfg.model.k_eps) | {
                "lengthscales": list(cfg.model.k_eps.lengthscales)
            },
            "mu_sim": cfg.model.mu_sim,
            "mu_eps": cfg.model.mu_eps,
            "noise_sim": cfg.model.noise_sim,
            "noise_real": cfg.model.noise_real,
        },
        "acquisition": dataclasses.asdict(cfg.acquisition),
        "termination": dataclasses.asdict(cfg.termination),
        "plane": cfg.plane,
        "objective_transform": cfg.objective_transform,
        "master_seed": cfg.master_seed,
    }
    if cfg.penalty is not None:
        out["penalty"] = {
            "x_max": [float(v) for v in cfg.penalty.x_max],
            "s": cfg.penalty.s,
            "gamma": cfg.penalty.gamma,
            "lam": cfg.penalty.lam,
        }
    return out


def shipped_configs() -> dict[str, Path]:
    """Name -> path of the configuration files bundled with the package."""
    root = resources.files("mfes").joinpath("data")
    return {
        p.name.removesuffix(".yaml"): Path(str(p))
        for p in root.iterdir()
        if p.name.endswith(".yaml")
    }


def load_config(name_or_path) -> CampaignConfig:
    """Load a config by filesystem path or by shipped-config name.

    ``load_config("ankle2d")`` resolves the bundled file; any path-like
    argument pointing at an existing file wins over bundled names.
    """
    p = Path(name_or_path)
    if not p.exists():
        bundled = shipped_configs()
        if str(name_or_path) in bundled:
            p = bundled[str(name_or_path)]
        else:
            raise ConfigError(
                f"no config file at {name_or_path!r} and no bundled config of "
                f"that name (available: {', '.join(sorted(bundled))})"
            )
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {p}: {e}") from e
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML in {p}: {e}") from e
    if raw is None:
        raise ConfigError(f"config {p} is empty")
    return config_from_dict(raw)
