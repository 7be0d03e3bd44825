"""Analytic two-fidelity objective for fast end-to-end checks.

The real objective is a shifted parabola with its minimum at ``x* = 0.65``;
the simulation underestimates it by a smooth position-dependent amount, so
the two fidelities disagree about where the minimum is while remaining
correlated. Evaluation noise is additive Gaussian, derived from the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cost import CostBreakdown
from .seeding import rng_from
from .validation import Bounds, check_param_vector

__all__ = ["TwoFidelityBenchmark", "bench1d"]


@dataclass(frozen=True)
class TwoFidelityBenchmark:
    """1-D benchmark pair ``j_real`` / ``j_sim`` with known minimizer."""

    bounds: Bounds = field(default_factory=lambda: Bounds([0.0], [1.0]))
    x_star: float = 0.65
    curvature: float = 6.0
    floor: float = 1.0
    gap_offset: float = 1.0
    gap_amp: float = 2.0
    noise_sim: float = 0.05
    noise_real: float = 0.02

    def j_real(self, x: float) -> float:
        """Noise-free real objective."""
        return self.curvature * (float(x) - self.x_star) ** 2 + self.floor

    def sim_gap(self, x: float) -> float:
        """How far the simulation under-reads the real objective at ``x``."""
        return self.gap_offset + self.gap_amp * math.sin(2.0 * math.pi * float(x))

    def j_sim(self, x: float) -> float:
        """Noise-free simulation objective (its minimizer differs from x*)."""
        return self.j_real(x) - self.sim_gap(x)

    def evaluate(self, x, fidelity, seed: int) -> CostBreakdown:
        x = check_param_vector(x, self.bounds)
        rng = rng_from(seed)
        if int(fidelity) == 1:
            val = self.j_real(x[0]) + self.noise_real * rng.standard_normal()
        else:
            val = self.j_sim(x[0]) + self.noise_sim * rng.standard_normal()
        return CostBreakdown(stability=float(val), penalty=0.0, total=float(val), fell=False)


def bench1d() -> TwoFidelityBenchmark:
    return TwoFidelityBenchmark()
