"""Optimization campaigns: the entropy-search loop and a random baseline.

``run_mfes`` drives the full loop: warm-start simulations at low-discrepancy
points, entropy-search selection with fall gating on real candidates, GP
refits after every observation, and a filtered-relative-entropy stopping
rule. ``run_random_search`` is the comparison baseline: greedy local random
search at real fidelity only.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import qmc

from .acquisition import (
    AcquisitionConfig,
    build_grid,
    expected_entropy_change,
    select_next,
)
from .benchmarks import bench1d
from .cost import J_FALL, PenaltyParams
from .gp import ModelFitError, ModelParams, build_gp
from .seeding import child_seed, rng_from
from .testbed import SCENARIOS, TestbedObjective, real_spec, sim_spec
from .validation import REAL, SIM, augment

__all__ = [
    "TerminationConfig",
    "CampaignConfig",
    "IterationRecord",
    "CampaignResult",
    "N_WARM_START",
    "observation_transform",
    "filtered_entropy_update",
    "resolve_entropy_threshold",
    "make_objective",
    "run_mfes",
    "run_random_search",
]

logger = logging.getLogger(__name__)

# Campaign-level purpose tags for stream derivation (acquisition owns 0..2).
_TAG_EVAL = 10
_TAG_WARM = 11
_TAG_ACQ = 12
_TAG_RANDOM = 13

N_WARM_START = 5


@dataclass(frozen=True)
class TerminationConfig:
    """Stopping rule for the entropy-search loop.

    The raw per-iteration entropy change is noisy, so termination tracks a
    filtered version (see :func:`filtered_entropy_update`). The loop stops
    once the filtered value falls below ``entropy_threshold`` (default
    ``0.05 * ln(grid_size)``), but never before ``min_iterations``
    observations. ``real_budget`` optionally caps real-fidelity evaluations;
    once spent, acquisition only considers simulations.
    """

    velocity: float = 0.9
    entropy_threshold: float | None = None
    min_iterations: int = 15
    max_iterations: int = 130
    innovation_cap: float = 3.0
    real_budget: int | None = None

    def __post_init__(self):
        if not (0.0 < self.velocity <= 1.0):
            raise ValueError("velocity must lie in (0, 1]")
        if self.innovation_cap <= 1.0:
            raise ValueError("innovation_cap must exceed 1")
        if self.min_iterations < 0 or self.max_iterations < 0:
            raise ValueError("iteration counts must be non-negative")
        if self.entropy_threshold is not None and self.entropy_threshold < 0:
            raise ValueError("entropy_threshold must be non-negative")
        if self.real_budget is not None and self.real_budget < 0:
            raise ValueError("real_budget must be non-negative")


@dataclass(frozen=True)
class CampaignConfig:
    """Everything one campaign needs, mirroring the YAML config layout."""

    scenario: str
    model: ModelParams
    acquisition: AcquisitionConfig = field(default_factory=AcquisitionConfig)
    termination: TerminationConfig = field(default_factory=TerminationConfig)
    penalty: PenaltyParams | None = None
    plane: str = "summed"
    objective_transform: str = "identity"
    master_seed: int = 0


@dataclass(frozen=True)
class IterationRecord:
    """One evaluation inside a campaign."""

    index: int
    fidelity: int
    x: np.ndarray
    observed_cost: float
    expected_dh: float
    filtered_dh: float
    wall_time: float
    fell: bool


@dataclass(frozen=True)
class CampaignResult:
    """Campaign outcome plus the config needed to reproduce or export it."""

    config: CampaignConfig
    records: tuple[IterationRecord, ...]
    x_opt: np.ndarray
    predicted_cost: float
    n_sim: int
    n_real: int
    termination_reason: str


def observation_transform(name: str):
    """Forward/inverse pair mapping observed costs into model space.

    ``identity`` fits the surrogate on raw costs. ``log`` fits on the
    natural log instead: the fall constant and the penalty plateau then sit
    only a few prior standard deviations above the basin, so the smooth
    kernel no longer rings around those jumps. Argmin location, and with it
    the whole p_min machinery, is untouched by a monotone transform.
    """
    if name == "identity":
        return (lambda v: v), (lambda v: v)
    if name == "log":
        return (
            lambda v: np.log(np.maximum(v, 1e-12)),
            np.exp,
        )
    raise ValueError(
        f"unknown objective_transform {name!r}; expected 'identity' or 'log'"
    )


def filtered_entropy_update(
    prev_filtered: float, current_dh: float, cfg: TerminationConfig
) -> float:
    """One step of the clamped low-pass filter on entropy changes.

    The raw change is first clamped into ``[prev / cap, prev * cap]`` so a
    single noisy spike cannot jump the filter state, then blended with
    velocity ``v``: ``(1 - v) * prev + v * clamped``.
    """
    if prev_filtered < 0.0:
        raise ValueError("filtered entropy state must be non-negative")
    lo = prev_filtered / cfg.innovation_cap
    hi = prev_filtered * cfg.innovation_cap
    clamped = min(max(current_dh, lo), hi)
    return (1.0 - cfg.velocity) * prev_filtered + cfg.velocity * clamped


def resolve_entropy_threshold(cfg: CampaignConfig) -> float:
    t = cfg.termination.entropy_threshold
    if t is not None:
        return float(t)
    return 0.05 * math.log(cfg.acquisition.grid_size)


def make_objective(cfg: CampaignConfig | str):
    """Objective named by ``cfg.scenario``: a testbed scenario or a benchmark.

    Accepts either a full :class:`CampaignConfig` or a bare scenario name;
    with a bare name the default penalty and the summed plane apply.
    """
    if isinstance(cfg, str):
        name, pen_cfg, plane = cfg, None, "summed"
    else:
        name, pen_cfg, plane = cfg.scenario, cfg.penalty, cfg.plane
    if name == "bench1d":
        return bench1d()
    if name in SCENARIOS:
        scenario = SCENARIOS[name]()
        pen = pen_cfg or PenaltyParams(x_max=scenario.bounds.upper)
        return TestbedObjective(
            scenario=scenario,
            penalty_params=pen,
            plane=plane,
            sim=sim_spec(),
            real=real_spec(),
        )
    raise ValueError(
        f"unknown scenario {name!r}; known: {sorted(SCENARIOS) + ['bench1d']}"
    )


def _warm_start_points(bounds, master_seed: int) -> np.ndarray:
    halton = qmc.Halton(
        d=bounds.dim, scramble=True, seed=rng_from(master_seed, _TAG_WARM)
    )
    return qmc.scale(halton.random(N_WARM_START), bounds.lower, bounds.upper)


def run_mfes(config: CampaignConfig, objective=None) -> CampaignResult:
    """Run one multi-fidelity entropy-search campaign.

    Deterministic for a fixed config: every random stream derives from
    ``master_seed``. The first ``N_WARM_START`` evaluations are simulations
    at low-discrepancy points; afterwards the acquisition picks freely,
    except that real candidates are vetoed where the simulation-level
    posterior mean exceeds half the fall cost (fall gate) or once the real
    budget is spent. A model-fit failure aborts with a diagnostic log record
    and propagates :class:`ModelFitError`.
    """
    obj = objective if objective is not None else make_objective(config)
    bounds = obj.bounds
    term = config.termination
    threshold = resolve_entropy_threshold(config)
    fwd, inv = observation_transform(config.objective_transform)
    acq = replace(
        config.acquisition, seed=child_seed(config.master_seed, _TAG_ACQ)
    )
    gp = build_gp(config.model)
    d = bounds.dim
    X = np.zeros((0, d + 1))
    y = np.zeros(0)
    try:
        gp.fit(X, y)
    except ModelFitError:
        logger.exception("surrogate prior could not be factorized")
        raise

    warm = _warm_start_points(bounds, config.master_seed)
    records: list[IterationRecord] = []
    filtered = 0.0
    n_real = 0
    reason = "max_iterations"

    for it in range(term.max_iterations):
        t0 = time.perf_counter()
        grid = build_grid(
            bounds, gp, acq.grid_size, child_seed(acq.seed, it, 0)
        )
        if it < N_WARM_START:
            x = warm[it]
            fid = SIM
            dh = expected_entropy_change(
                gp, augment(x, SIM)[0], grid, acq, iteration=it, candidate_index=0
            )
        else:
            mean_sim = gp.predict(augment(grid.points, SIM))
            veto = mean_sim > fwd(J_FALL / 2.0)
            if term.real_budget is not None and n_real >= term.real_budget:
                veto = np.ones(len(grid), dtype=bool)
            choice = select_next(
                gp, bounds, acq, grid=grid, iteration=it, exclude_real=veto
            )
            x, fid, dh = choice.x, choice.fidelity, choice.expected_dh

        outcome = obj.evaluate(x, fid, child_seed(config.master_seed, it, _TAG_EVAL))
        X = np.vstack([X, augment(x, fid)])
        y = np.append(y, fwd(outcome.total))
        try:
            gp.fit(X, y)
        except ModelFitError:
            logger.exception(
                "surrogate refit failed at iteration %d (n=%d observations)", it, len(y)
            )
            raise
        if fid == REAL:
            n_real += 1

        filtered = (
            max(dh, 0.0)
            if it == 0
            else filtered_entropy_update(filtered, dh, term)
        )
        records.append(
            IterationRecord(
                index=it,
                fidelity=int(fid),
                x=np.asarray(x, dtype=float).copy(),
                observed_cost=float(outcome.total),
                expected_dh=float(dh),
                filtered_dh=float(filtered),
                wall_time=time.perf_counter() - t0,
                fell=bool(outcome.fell),
            )
        )
        if it + 1 >= term.min_iterations and filtered < threshold:
            reason = "entropy"
            break

    # Extraction grid: the usual fresh representer grid, extended with a
    # denser space-filling so the recommended optimum is not limited by the
    # loop grid's resolution. Standard points come first, so with a flat
    # (prior) mean the argmin still falls on the initial grid.
    final_grid = build_grid(
        bounds, gp, acq.grid_size, child_seed(acq.seed, len(records), 0)
    )
    halton = qmc.Halton(
        d=bounds.dim, scramble=True, seed=rng_from(acq.seed, len(records), 1)
    )
    extra = qmc.scale(
        halton.random(10 * acq.grid_size), bounds.lower, bounds.upper
    )
    points = np.vstack([final_grid.points, extra])
    mean_real = gp.predict(augment(points, REAL))
    best = int(np.argmin(mean_real))  # ties resolve to the lowest index
    return CampaignResult(
        config=config,
        records=tuple(records),
        x_opt=points[best].copy(),
        predicted_cost=float(inv(mean_real[best])),
        n_sim=len(records) - n_real,
        n_real=n_real,
        termination_reason=reason,
    )


def run_random_search(
    config: CampaignConfig, real_budget: int, objective=None
) -> CampaignResult:
    """Greedy local random search at real fidelity (comparison baseline).

    Starts at the center of the bounds; each following proposal perturbs the
    incumbent by a uniform step of up to 10% of the range per dimension
    (clipped to the box) and is accepted if its observed cost improves on
    the incumbent's. With budget 0 the initial center guess is returned
    unevaluated.
    """
    if real_budget < 0:
        raise ValueError("real_budget must be non-negative")
    obj = objective if objective is not None else make_objective(config)
    bounds = obj.bounds
    rng = rng_from(config.master_seed, _TAG_RANDOM)
    records: list[IterationRecord] = []
    best_x = bounds.center
    best_cost = math.nan

    for it in range(real_budget):
        t0 = time.perf_counter()
        if it == 0:
            x = bounds.center
        else:
            step = rng.uniform(-0.1, 0.1, size=bounds.dim) * bounds.range
            x = bounds.clip(best_x + step)
        outcome = obj.evaluate(x, REAL, child_seed(config.master_seed, it, _TAG_EVAL))
        if it == 0 or outcome.total < best_cost:
            best_x = np.asarray(x, dtype=float).copy()
            best_cost = float(outcome.total)
        records.append(
            IterationRecord(
                index=it,
                fidelity=REAL,
                x=np.asarray(x, dtype=float).copy(),
                observed_cost=float(outcome.total),
                expected_dh=math.nan,
                filtered_dh=math.nan,
                wall_time=time.perf_counter() - t0,
                fell=bool(outcome.fell),
            )
        )

    return CampaignResult(
        config=config,
        records=tuple(records),
        x_opt=best_x,
        predicted_cost=best_cost,
        n_sim=0,
        n_real=real_budget,
        termination_reason="max_iterations",
    )
