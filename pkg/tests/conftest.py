"""Shared test helpers: small fast campaign configs and common model params."""

import numpy as np
import pytest

from mfes import (
    AcquisitionConfig,
    CampaignConfig,
    KernelParams,
    ModelParams,
    TerminationConfig,
)


def small_bench_model() -> ModelParams:
    return ModelParams(
        k_sim=KernelParams(4.0, 0.25, (0.125,)),
        k_eps=KernelParams(4.0, 0.25, (0.25,)),
        mu_sim=1.0,
        mu_eps=1.0,
        noise_sim=0.05,
        noise_real=0.02,
    )


def tiny_bench_config(seed: int = 0, **term_overrides) -> CampaignConfig:
    """Benchmark campaign small enough for sub-second unit-test runs."""
    term = dict(
        min_iterations=4,
        max_iterations=8,
        entropy_threshold=0.02,
        real_budget=3,
    )
    term.update(term_overrides)
    return CampaignConfig(
        scenario="bench1d",
        model=small_bench_model(),
        acquisition=AcquisitionConfig(
            grid_size=16, pmin_samples=300, fantasy_draws=5, candidate_count=6
        ),
        termination=TerminationConfig(**term),
        master_seed=seed,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
