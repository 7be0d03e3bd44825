"""Cost model: filtered tracking error, stability integral, gain penalty.

The scalar objective for one rollout is

    J(x) = stability_integral(e_P) + penalty(x)

where ``e_P`` is the deadbanded, low-pass-filtered tilt deviation logged by
the plant, and the penalty discourages aggressive gain vectors. A detected
fall replaces the whole cost with the constant ``J_FALL``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_param_vector

__all__ = [
    "J_FALL",
    "PenaltyParams",
    "TrajectoryLog",
    "CostBreakdown",
    "smooth_deadband",
    "mean_filter",
    "stability_integral",
    "penalty",
    "cost_real",
    "cost_sim_averaged",
]

J_FALL = 100.0

_PLANES = ("alpha", "beta", "summed")


@dataclass(frozen=True)
class PenaltyParams:
    """Logistic gain-magnitude penalty.

    penalty(x) = s / (1 + exp(-gamma * (||x||_2 - lam * ||x_max||_2)))

    ``lam`` (the threshold factor; `lambda` is reserved in Python) places the
    soft threshold as a fraction of the gain-box corner's norm.
    """

    x_max: np.ndarray
    s: float = 7.5
    gamma: float = 6.0
    lam: float = 0.75

    def __post_init__(self):
        x_max = np.asarray(self.x_max, dtype=float).ravel()
        if x_max.size == 0 or not np.all(np.isfinite(x_max)) or np.any(x_max <= 0):
            raise ValueError("x_max must be a vector of positive finite gains")
        if self.s < 0 or self.gamma <= 0 or not (0.0 < self.lam <= 1.0):
            raise ValueError("require s >= 0, gamma > 0, 0 < lam <= 1")
        object.__setattr__(self, "x_max", x_max)


@dataclass(frozen=True)
class TrajectoryLog:
    """Time series logged by one plant rollout.

    ``e_p_alpha`` / ``e_p_beta`` are the deadbanded filtered deviations per
    axis, sampled on the integrator grid; ``tilt_alpha`` / ``tilt_beta`` are
    the raw tilt angles (kept for deviation exports). If the plant fell the
    series end at ``fall_time``.
    """

    dt: float
    e_p_alpha: np.ndarray
    e_p_beta: np.ndarray
    tilt_alpha: np.ndarray
    tilt_beta: np.ndarray
    fell: bool
    fall_time: float | None = None


@dataclass(frozen=True)
class CostBreakdown:
    """Stability term, penalty term, and their total for one evaluation."""

    stability: float
    penalty: float
    total: float
    fell: bool


def smooth_deadband(value, radius: float):
    """Smooth deadband ``v - r * tanh(v / r)``.

    Kills gradients inside ``|v| < r`` without the hard kink of a clipped
    deadband; for ``|v| >> r`` it approaches ``v - r * sign(v)``. Accepts
    scalars or arrays. ``radius = 0`` is the identity.
    """
    if radius < 0:
        raise ValueError("deadband radius must be non-negative")
    v = np.asarray(value, dtype=float)
    if radius == 0.0:
        out = v.copy()
    else:
        out = v - radius * np.tanh(v / radius)
    return float(out) if np.isscalar(value) else out


def mean_filter(series, window: int) -> np.ndarray:
    """Causal sliding mean over the last ``min(window, t)`` samples.

    The first output equals the first input; no look-ahead, so the filter is
    realizable online and the plant applies the identical recursion.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    x = np.asarray(series, dtype=float).ravel()
    if x.size == 0:
        return x.copy()
    c = np.cumsum(x)
    out = np.empty_like(x)
    w = min(window, x.size)
    out[:w] = c[:w] / np.arange(1, w + 1)
    if x.size > window:
        out[window:] = (c[window:] - c[:-window]) / window
    return out


def stability_integral(series, dt: float) -> float:
    """Rectangle-rule integral of ``|series|`` with step ``dt``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    x = np.asarray(series, dtype=float).ravel()
    return float(dt * np.sum(np.abs(x)))


def penalty(x, params: PenaltyParams) -> float:
    """Logistic penalty on the Euclidean gain magnitude; bounded by ``s``."""
    x = check_param_vector(x)
    if x.size != params.x_max.size:
        raise ValueError(
            f"x has {x.size} entries, penalty expects {params.x_max.size}"
        )
    threshold = params.lam * float(np.linalg.norm(params.x_max))
    z = params.gamma * (float(np.linalg.norm(x)) - threshold)
    # Guard the exponential rather than trusting IEEE overflow to inf.
    if z >= 0:
        return float(params.s / (1.0 + np.exp(-z)))
    e = np.exp(z)
    return float(params.s * e / (1.0 + e))


def _plane_integral(traj: TrajectoryLog, plane: str) -> float:
    if plane not in _PLANES:
        raise ValueError(f"plane must be one of {_PLANES}, got {plane!r}")
    if plane == "alpha":
        return stability_integral(traj.e_p_alpha, traj.dt)
    if plane == "beta":
        return stability_integral(traj.e_p_beta, traj.dt)
    return stability_integral(traj.e_p_alpha, traj.dt) + stability_integral(
        traj.e_p_beta, traj.dt
    )


def cost_real(
    traj: TrajectoryLog, x, params: PenaltyParams, plane: str = "summed"
) -> CostBreakdown:
    """Cost of a single real-fidelity rollout.

    A fall overrides everything: stability and penalty are still reported for
    diagnostics, but the total is the fall constant.
    """
    stab = _plane_integral(traj, plane)
    pen = penalty(x, params)
    if traj.fell:
        return CostBreakdown(stability=stab, penalty=pen, total=J_FALL, fell=True)
    return CostBreakdown(stability=stab, penalty=pen, total=stab + pen, fell=False)


def cost_sim_averaged(
    trajs, x, params: PenaltyParams, plane: str = "summed"
) -> CostBreakdown:
    """Mean cost over repeated simulation rollouts.

    Each rollout is costed like a real one (falls count as ``J_FALL``) and
    the totals are averaged; ``fell`` reports whether any repetition fell.
    """
    trajs = list(trajs)
    if not trajs:
        raise ValueError("need at least one rollout to average")
    parts = [cost_real(t, x, params, plane) for t in trajs]
    return CostBreakdown(
        stability=float(np.mean([p.stability for p in parts])),
        penalty=parts[0].penalty,
        total=float(np.mean([p.total for p in parts])),
        fell=any(p.fell for p in parts),
    )
