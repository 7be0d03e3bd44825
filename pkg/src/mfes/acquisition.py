"""Entropy-search acquisition over the multi-fidelity surrogate.

The belief about the location of the real-system minimum is the discrete
distribution ``p_min`` over a representer grid: the probability that each
grid point attains the lowest value of the real-fidelity objective. Sampling
joint posterior draws and counting argmins estimates it. A candidate
evaluation is scored by how much it is expected to shrink the Shannon
entropy of ``p_min``, divided by the candidate fidelity's effort weight, and
the best (point, fidelity) pair wins.

All Monte-Carlo draws come from streams derived from ``(seed, iteration,
purpose, candidate index)``, so selections are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .gp import MultiFidelityGP, safe_cholesky
from .seeding import child_seed, rng_from
from .validation import REAL, SIM, Bounds, augment

__all__ = [
    "RepresenterGrid",
    "PminDistribution",
    "AcquisitionConfig",
    "AcquisitionChoice",
    "build_grid",
    "pmin",
    "entropy",
    "expected_entropy_change",
    "select_next",
]

# Purpose tags for stream derivation.
_TAG_GRID = 0
_TAG_BASE = 1
_TAG_CAND = 2


@dataclass(frozen=True)
class RepresenterGrid:
    """Finite candidate set over which ``p_min`` lives."""

    points: np.ndarray
    seed: int = 0

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.size == 0 or not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be a non-empty finite matrix")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class PminDistribution:
    """Estimated minimum-location probabilities over a grid."""

    probabilities: np.ndarray
    sample_count: int

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).ravel()
        object.__setattr__(self, "probabilities", p)


@dataclass(frozen=True)
class AcquisitionConfig:
    """Knobs of the entropy-search step.

    ``candidate_count=None`` scores every grid point; a smaller value keeps
    only the points with the lowest real-fidelity posterior mean. Both
    fidelities are scored for each candidate point.
    """

    grid_size: int = 80
    pmin_samples: int = 2000
    fantasy_draws: int = 20
    candidate_count: int | None = None
    w_sim: float = 10.0
    w_real: float = 50.0
    seed: int = 0

    def __post_init__(self):
        if self.grid_size < 2:
            raise ValueError("grid_size must be >= 2")
        if self.pmin_samples < 1 or self.fantasy_draws < 1:
            raise ValueError("pmin_samples and fantasy_draws must be >= 1")
        if self.candidate_count is not None and self.candidate_count < 1:
            raise ValueError("candidate_count must be >= 1 when given")
        if self.w_sim <= 0 or self.w_real <= 0:
            raise ValueError("effort weights must be positive")


@dataclass(frozen=True)
class AcquisitionChoice:
    """Winning (parameter vector, fidelity) pair with its scores."""

    x: np.ndarray
    fidelity: int
    expected_dh: float
    weighted_score: float
    candidate_index: int


def _check_posterior(posterior) -> MultiFidelityGP:
    if not hasattr(posterior, "kernel_"):
        raise ValueError("posterior must be a fitted MultiFidelityGP")
    return posterior


def _scale(posterior) -> float:
    return posterior.kernel_.k_sim.variance


def build_grid(
    bounds: Bounds, posterior: MultiFidelityGP, size: int, seed: int
) -> RepresenterGrid:
    """Non-uniform representer grid of ``size`` points.

    Half the points are a scrambled low-discrepancy (Halton) filling of the
    box, the other half follow the current belief: one joint posterior draw
    on a dense filling, keeping the points with the lowest sampled real
    objective. Low-cost basins therefore get proportionally more resolution
    while coverage of the rest of the box is preserved.
    """
    _check_posterior(posterior)
    if size < 2:
        raise ValueError("grid size must be >= 2")
    rng = rng_from(seed)
    halton = qmc.Halton(d=bounds.dim, scramble=True, seed=rng)
    n_fill = size // 2
    n_belief = size - n_fill
    fill = qmc.scale(halton.random(n_fill), bounds.lower, bounds.upper)
    n_dense = max(256, 2 * size)
    dense = qmc.scale(halton.random(n_dense), bounds.lower, bounds.upper)
    A = augment(dense, REAL)
    mean = posterior.predict(A)
    cov = posterior.posterior_cov(A)
    L, _ = safe_cholesky(cov, _scale(posterior))
    draw = mean + L @ rng.standard_normal(n_dense)
    keep = np.argsort(draw, kind="stable")[:n_belief]
    return RepresenterGrid(points=np.vstack([fill, dense[keep]]), seed=int(seed))


def _pmin_core(
    mean: np.ndarray, cov: np.ndarray, n_samples: int, rng, scale: float
) -> np.ndarray:
    m = mean.shape[0]
    if m == 1:
        return np.ones(1)
    L, _ = safe_cholesky(cov, scale)
    draws = mean[:, None] + L @ rng.standard_normal((m, n_samples))
    idx = np.argmin(draws, axis=0)  # ties resolve to the lowest index
    return np.bincount(idx, minlength=m) / float(n_samples)


def pmin(
    posterior: MultiFidelityGP, grid: RepresenterGrid, n_samples: int, seed
) -> PminDistribution:
    """Monte-Carlo estimate of the minimum-location distribution.

    ``seed`` may be an integer or a ``numpy.random.Generator``. Estimates are
    exact argmin counts over joint draws of the real-fidelity posterior, so
    the probabilities are multiples of ``1 / n_samples`` and sum to one.
    """
    _check_posterior(posterior)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else rng_from(seed)
    A = augment(grid.points, REAL)
    mean = posterior.predict(A)
    cov = posterior.posterior_cov(A)
    p = _pmin_core(mean, cov, n_samples, rng, _scale(posterior))
    return PminDistribution(probabilities=p, sample_count=int(n_samples))


def _entropy_raw(p: np.ndarray) -> float:
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def entropy(p) -> float:
    """Shannon entropy (nats) of a discrete distribution.

    Accepts a :class:`PminDistribution` or a bare probability vector; zero
    entries contribute zero.
    """
    q = np.asarray(getattr(p, "probabilities", p), dtype=float).ravel()
    if q.size == 0:
        raise ValueError("need a non-empty probability vector")
    if np.any(q < 0.0) or not np.all(np.isfinite(q)):
        raise ValueError("probabilities must be non-negative and finite")
    if abs(float(q.sum()) - 1.0) > 1e-6:
        raise ValueError(f"probabilities sum to {q.sum()!r}, not 1")
    return _entropy_raw(q)


def _entropy_change_core(
    mean_g: np.ndarray,
    cov_g: np.ndarray,
    cross: np.ndarray,
    var_cand: float,
    noise_std: float,
    base_entropy: float,
    n_samples: int,
    n_fantasies: int,
    rng,
    scale: float,
) -> float:
    """Expected entropy drop from one fantasy observation.

    The posterior covariance after observing the candidate does not depend
    on the observed value, so it is a single rank-one downdate of the grid
    covariance; fantasy values only shift the mean. One base sample of the
    downdated posterior is shared across fantasies, each fantasy adding its
    mean shift before the argmin count.
    """
    v_y = max(var_cand, 0.0) + noise_std * noise_std
    if v_y <= 1e-12 * scale:
        # The candidate is already pinned down; observing it cannot move the belief.
        return 0.0
    m = mean_g.shape[0]
    cov_new = cov_g - np.outer(cross, cross) / v_y
    L, _ = safe_cholesky(cov_new, scale)
    z_f = rng.standard_normal(n_fantasies)
    base = mean_g[:, None] + L @ rng.standard_normal((m, n_samples))
    shift = cross / np.sqrt(v_y)
    acc = 0.0
    for z in z_f:
        idx = np.argmin(base + z * shift[:, None], axis=0)
        p = np.bincount(idx, minlength=m) / float(n_samples)
        acc += _entropy_raw(p)
    return base_entropy - acc / n_fantasies


def _base_entropy(posterior, grid, cfg, iteration, mean_g, cov_g) -> float:
    rng = rng_from(cfg.seed, iteration, _TAG_BASE)
    p = _pmin_core(mean_g, cov_g, cfg.pmin_samples, rng, _scale(posterior))
    return _entropy_raw(p)


def expected_entropy_change(
    posterior: MultiFidelityGP,
    candidate,
    grid: RepresenterGrid,
    cfg: AcquisitionConfig,
    *,
    iteration: int = 0,
    candidate_index: int = 0,
    base_entropy: float | None = None,
) -> float:
    """Expected drop in ``p_min`` entropy from evaluating one candidate.

    ``candidate`` is an augmented input ``[delta, x_1, ..., x_d]``. The
    entropy is always measured on the real-fidelity slice of the posterior,
    whatever the candidate's fidelity; the candidate only enters through its
    cross-covariance with the grid and its own predictive variance plus the
    fidelity's observation noise. Deterministic for fixed ``(cfg.seed,
    iteration, candidate_index)``.
    """
    _check_posterior(posterior)
    a = np.asarray(candidate, dtype=float).ravel()
    if a.size != grid.points.shape[1] + 1:
        raise ValueError(
            f"candidate must be augmented with a fidelity flag and match the "
            f"grid dimension {grid.points.shape[1]}"
        )
    A = augment(grid.points, REAL)
    mean_g = posterior.predict(A)
    cov_g = posterior.posterior_cov(A)
    if base_entropy is None:
        base_entropy = _base_entropy(posterior, grid, cfg, iteration, mean_g, cov_g)
    a_row = a[None, :]
    cross = posterior.posterior_cov(A, a_row)[:, 0]
    var_cand = float(posterior.posterior_cov(a_row)[0, 0])
    noise = posterior.observation_noise(a[0])
    rng = rng_from(cfg.seed, iteration, _TAG_CAND, candidate_index)
    return _entropy_change_core(
        mean_g,
        cov_g,
        cross,
        var_cand,
        noise,
        base_entropy,
        cfg.pmin_samples,
        cfg.fantasy_draws,
        rng,
        _scale(posterior),
    )


def select_next(
    posterior: MultiFidelityGP,
    bounds: Bounds,
    cfg: AcquisitionConfig,
    *,
    grid: RepresenterGrid | None = None,
    iteration: int = 0,
    exclude_real=None,
) -> AcquisitionChoice:
    """Pick the next evaluation: argmax of ``Delta H / w_fidelity``.

    Candidates are the grid points (or the ``candidate_count`` lowest by real
    posterior mean), each scored at both fidelities; ``exclude_real`` is an
    optional boolean mask over grid points whose real-fidelity candidates
    are skipped (used for fall gating and budget caps). Exact score ties go
    to the lowest candidate index, with the whole simulation block ordered
    before the real block.
    """
    _check_posterior(posterior)
    if grid is None:
        grid = build_grid(
            bounds, posterior, cfg.grid_size, child_seed(cfg.seed, iteration, _TAG_GRID)
        )
    pts = grid.points
    m = pts.shape[0]
    A_real = augment(pts, REAL)
    mean_g = posterior.predict(A_real)
    cov_g = posterior.posterior_cov(A_real)
    base_h = _base_entropy(posterior, grid, cfg, iteration, mean_g, cov_g)

    n_cand = m if cfg.candidate_count is None else min(cfg.candidate_count, m)
    if n_cand < m:
        order = np.argsort(mean_g, kind="stable")[:n_cand]
        cand_idx = np.sort(order)
    else:
        cand_idx = np.arange(m)

    if exclude_real is not None:
        exclude_real = np.asarray(exclude_real, dtype=bool)
        if exclude_real.shape != (m,):
            raise ValueError("exclude_real must be a boolean mask over grid points")

    scale = _scale(posterior)
    best: AcquisitionChoice | None = None
    for block, fid in enumerate((SIM, REAL)):
        A_c = augment(pts[cand_idx], fid)
        _, std_c = posterior.predict(A_c, return_std=True)
        cross_block = posterior.posterior_cov(A_real, A_c)
        noise = posterior.observation_noise(fid)
        for pos, gi in enumerate(cand_idx):
            if fid == REAL and exclude_real is not None and exclude_real[gi]:
                continue
            ci = block * n_cand + pos
            dh = _entropy_change_core(
                mean_g,
                cov_g,
                cross_block[:, pos],
                float(std_c[pos] ** 2),
                noise,
                base_h,
                cfg.pmin_samples,
                cfg.fantasy_draws,
                rng_from(cfg.seed, iteration, _TAG_CAND, ci),
                scale,
            )
            score = dh / (cfg.w_sim if fid == SIM else cfg.w_real)
            if best is None or score > best.weighted_score:
                best = AcquisitionChoice(
                    x=pts[gi].copy(),
                    fidelity=fid,
                    expected_dh=dh,
                    weighted_score=score,
                    candidate_index=ci,
                )
    if best is None:
        raise RuntimeError("no candidates were scored; all were excluded")
    return best
