"""Result persistence and analysis exports.

``result.json`` round-trips a :class:`CampaignResult` (config included) at
full float precision. The CSV exports serve analysis:

* ``records``: one row per evaluation;
* ``entropy_trace``: raw and filtered entropy change per iteration, at full
  round-trip precision so the filter recursion can be replayed bit-exactly
  from the file alone;
* ``posterior_slice``: surrogate mean/std on a lattice, both fidelities;
* ``deviation_compare``: cumulative tilt deviation of the optimized gains
  against the scenario reference, mean and 2-sigma band over repeated
  rollouts (testbed scenarios only).

Wall-clock times are deliberately never written: exported files are
bit-identical across reruns of the same config and seed.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .campaign import (
    CampaignConfig,
    CampaignResult,
    IterationRecord,
    make_objective,
    observation_transform,
)
from .config import ConfigError, config_from_dict, config_to_dict
from .gp import build_gp
from .seeding import child_seed
from .testbed import TestbedObjective, simulate
from .validation import REAL, SIM, augment

__all__ = [
    "EXPORT_FORMATS",
    "save_result_json",
    "load_result_json",
    "export_result",
    "write_records",
    "write_entropy_trace",
    "write_posterior_slice",
    "write_deviation_compare",
]

_TAG_DEVIATION = 14

EXPORT_FORMATS = ("records", "entropy_trace", "posterior_slice", "deviation_compare")


def _g15(v: float) -> str:
    return f"{float(v):.15g}"


def _full(v: float) -> str:
    return repr(float(v))


def _write_text(path, lines) -> None:
    Path(path).write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# result.json


def save_result_json(result: CampaignResult, path) -> None:
    payload = {
        "config": config_to_dict(result.config),
        "records": [
            {
                "index": r.index,
                "fidelity": r.fidelity,
                "x": [float(v) for v in r.x],
                "observed_cost": r.observed_cost,
                "expected_dh": r.expected_dh,
                "filtered_dh": r.filtered_dh,
                "fell": r.fell,
            }
            for r in result.records
        ],
        "x_opt": [float(v) for v in result.x_opt],
        "predicted_cost": result.predicted_cost,
        "n_sim": result.n_sim,
        "n_real": result.n_real,
        "termination_reason": result.termination_reason,
    }
    Path(path).write_text(json.dumps(payload, indent=2, allow_nan=True) + "\n")


def load_result_json(path) -> CampaignResult:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid result file {path}: {e}") from e
    try:
        cfg = config_from_dict(payload["config"])
        records = tuple(
            IterationRecord(
                index=int(r["index"]),
                fidelity=int(r["fidelity"]),
                x=np.asarray(r["x"], dtype=float),
                observed_cost=float(r["observed_cost"]),
                expected_dh=float(r["expected_dh"]),
                filtered_dh=float(r["filtered_dh"]),
                wall_time=0.0,
                fell=bool(r["fell"]),
            )
            for r in payload["records"]
        )
        return CampaignResult(
            config=cfg,
            records=records,
            x_opt=np.asarray(payload["x_opt"], dtype=float),
            predicted_cost=float(payload["predicted_cost"]),
            n_sim=int(payload["n_sim"]),
            n_real=int(payload["n_real"]),
            termination_reason=str(payload["termination_reason"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"malformed result file {path}: {e}") from e


# ----------------------------------------------------------------------
# CSV exports


def write_records(result: CampaignResult, path) -> None:
    d = result.x_opt.size
    header = ["index", "fidelity"] + [f"x{i}" for i in range(d)] + [
        "observed_cost",
        "expected_dh",
        "filtered_dh",
        "fell",
    ]
    lines = [",".join(header)]
    for r in result.records:
        lines.append(
            ",".join(
                [str(r.index), str(r.fidelity)]
                + [_g15(v) for v in r.x]
                + [_g15(r.observed_cost), _g15(r.expected_dh), _g15(r.filtered_dh)]
                + [str(int(r.fell))]
            )
        )
    _write_text(path, lines)


def write_entropy_trace(result: CampaignResult, path) -> None:
    lines = ["iteration,raw_dh,filtered_dh"]
    for r in result.records:
        lines.append(f"{r.index},{_full(r.expected_dh)},{_full(r.filtered_dh)}")
    _write_text(path, lines)


def _refit(result: CampaignResult):
    fwd, _ = observation_transform(result.config.objective_transform)
    gp = build_gp(result.config.model)
    if result.records:
        X = np.vstack([augment(r.x, r.fidelity) for r in result.records])
        y = np.array([fwd(r.observed_cost) for r in result.records])
    else:
        X = np.zeros((0, result.x_opt.size + 1))
        y = np.zeros(0)
    return gp.fit(X, y)


def write_posterior_slice(result: CampaignResult, path) -> None:
    """Posterior mean/std on a lattice at both fidelities.

    1-D scenarios use a 201-point line; higher dimensions a 41x41 lattice
    over the first two coordinates with the rest pinned at ``x_opt``.
    """
    obj = make_objective(result.config)
    bounds = obj.bounds
    gp = _refit(result)
    d = bounds.dim
    if d == 1:
        xs = np.linspace(bounds.lower[0], bounds.upper[0], 201)
        pts = xs[:, None]
        coord_cols = ["x0"]
    else:
        n = 41
        g0 = np.linspace(bounds.lower[0], bounds.upper[0], n)
        g1 = np.linspace(bounds.lower[1], bounds.upper[1], n)
        a, b = np.meshgrid(g0, g1, indexing="ij")
        pts = np.tile(result.x_opt, (n * n, 1))
        pts[:, 0] = a.ravel()
        pts[:, 1] = b.ravel()
        coord_cols = ["x0", "x1"]
    mean_s, std_s = gp.predict(augment(pts, SIM), return_std=True)
    mean_r, std_r = gp.predict(augment(pts, REAL), return_std=True)
    if result.config.objective_transform == "log":
        # Back to cost units: median and delta-method spread.
        mean_s, std_s = np.exp(mean_s), np.exp(mean_s) * std_s
        mean_r, std_r = np.exp(mean_r), np.exp(mean_r) * std_r
    header = coord_cols + ["mean_sim", "std_sim", "mean_real", "std_real"]
    lines = [",".join(header)]
    for i in range(pts.shape[0]):
        row = [_g15(pts[i, j]) for j in range(len(coord_cols))]
        row += [_g15(mean_s[i]), _g15(std_s[i]), _g15(mean_r[i]), _g15(std_r[i])]
        lines.append(",".join(row))
    _write_text(path, lines)


def _cumulative_deviation(traj, plane: str, n_steps: int) -> np.ndarray:
    if plane == "beta":
        dev = np.abs(traj.tilt_beta)
    elif plane == "alpha":
        dev = np.abs(traj.tilt_alpha)
    else:
        dev = np.abs(traj.tilt_alpha) + np.abs(traj.tilt_beta)
    cum = np.cumsum(dev) * traj.dt
    if cum.size < n_steps:  # fell early: hold the last value
        cum = np.concatenate([cum, np.full(n_steps - cum.size, cum[-1] if cum.size else 0.0)])
    return cum


def write_deviation_compare(result: CampaignResult, path, n_rollouts: int = 10) -> None:
    """Cumulative |tilt| over time: optimized gains vs scenario reference.

    Runs ``n_rollouts`` real-fidelity rollouts per gain vector on fresh
    derived seeds and writes mean and mean +- 2 std across rollouts.
    """
    obj = make_objective(result.config)
    if not isinstance(obj, TestbedObjective):
        raise ConfigError(
            f"deviation_compare needs a testbed scenario, not {result.config.scenario!r}"
        )
    sc = obj.scenario
    spec = obj.real if obj.real is not None else None
    from .testbed import real_spec  # local import to avoid cycle confusion

    spec = spec or real_spec()
    n_steps = spec.base.n_steps
    seeds = [
        child_seed(result.config.master_seed, _TAG_DEVIATION, k)
        for k in range(n_rollouts)
    ]
    curves = {}
    for label, x in (("opt", result.x_opt), ("ref", sc.reference_gains)):
        runs = np.vstack(
            [
                _cumulative_deviation(
                    simulate(x, sc, spec, s), result.config.plane, n_steps
                )
                for s in seeds
            ]
        )
        mean = runs.mean(axis=0)
        spread = 2.0 * runs.std(axis=0, ddof=1)
        curves[label] = (mean, mean - spread, mean + spread)
    dt = spec.base.dt
    lines = ["t,opt_mean,opt_lo,opt_hi,ref_mean,ref_lo,ref_hi"]
    om, ol, oh = curves["opt"]
    rm, rl, rh = curves["ref"]
    for k in range(n_steps):
        lines.append(
            ",".join(
                [_g15(k * dt)]
                + [_g15(v) for v in (om[k], ol[k], oh[k], rm[k], rl[k], rh[k])]
            )
        )
    _write_text(path, lines)


def export_result(result: CampaignResult, fmt: str, path) -> None:
    """Write one analysis export; unknown format names raise ConfigError."""
    if fmt == "records":
        write_records(result, path)
    elif fmt == "entropy_trace":
        write_entropy_trace(result, path)
    elif fmt == "posterior_slice":
        write_posterior_slice(result, path)
    elif fmt == "deviation_compare":
        write_deviation_compare(result, path)
    else:
        raise ConfigError(
            f"unknown export format {fmt!r}; expected one of {', '.join(EXPORT_FORMATS)}"
        )
