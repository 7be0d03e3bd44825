"""Two-axis torso-tilt stabilization testbed.

A deterministic stand-in for hardware experiments: each axis is an unstable
tilt plant

    theta_dd = omega^2 * sin(theta) + d(t) - u(t) + eta(t)

driven by a sinusoidal disturbance, periodic velocity impulses, and white
process noise, and controlled by a PD law acting on the deadbanded,
low-pass-filtered tilt. The actuator follows its target through a first-order
lag. Two fidelities share the plant: the "simulation" biases a few physical
constants and doubles the process noise, the "real" system runs the plant
verbatim.

Integration is fixed-step RK4; given the same seed a rollout is bit-identical
across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .cost import CostBreakdown, PenaltyParams, TrajectoryLog, cost_real, cost_sim_averaged
from .seeding import child_seed, rng_from
from .validation import Bounds, check_param_vector

__all__ = [
    "PlantParams",
    "FidelitySpec",
    "Scenario",
    "ankle2d",
    "arm_ankle4d",
    "SCENARIOS",
    "sim_spec",
    "real_spec",
    "simulate",
    "evaluate_real",
    "evaluate_sim",
    "TestbedObjective",
]


@dataclass(frozen=True)
class PlantParams:
    """Physical constants of the tilt plant and its feedback path.

    Defaults are the golden values used by every shipped configuration.
    ``natural_freq_sq`` is g/l for a 0.6 m inverted pendulum; the impulse
    interval is expressed in integrator steps (1000 steps = 2 s at dt=2 ms).
    """

    natural_freq_sq: float = 9.81 / 0.6
    actuator_lag: float = 0.05
    disturbance_amp: float = 1.2
    disturbance_period: float = 0.9
    impulse_amp: float = 0.3
    impulse_every: int = 1000
    process_noise_std: float = 0.05
    fall_threshold: float = 0.6
    dt: float = 0.002
    duration: float = 10.0
    warmup: float = 3.0
    deadband_radius: float = 0.02
    filter_window: int = 10
    initial_tilt: float = 0.0

    def __post_init__(self):
        if self.dt <= 0 or self.duration <= 0 or self.warmup < 0:
            raise ValueError("dt and duration must be positive, warmup non-negative")
        if self.actuator_lag <= 0:
            raise ValueError("actuator_lag must be positive")
        if self.filter_window < 1 or self.impulse_every < 0:
            raise ValueError("filter_window >= 1 and impulse_every >= 0 required")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def warmup_steps(self) -> int:
        return int(round(self.warmup / self.dt))


@dataclass(frozen=True)
class FidelitySpec:
    """One fidelity = base plant + multiplicative biases + noise scaling.

    ``repetitions`` is how many independent rollouts an evaluation averages.
    """

    base: PlantParams = field(default_factory=PlantParams)
    freq_bias: float = 1.0
    lag_bias: float = 1.0
    disturbance_bias: float = 1.0
    noise_scale: float = 1.0
    repetitions: int = 1

    def __post_init__(self):
        if min(self.freq_bias, self.lag_bias, self.disturbance_bias) <= 0:
            raise ValueError("biases must be positive multipliers")
        if self.noise_scale < 0 or self.repetitions < 1:
            raise ValueError("noise_scale >= 0 and repetitions >= 1 required")


def sim_spec(base: PlantParams | None = None, repetitions: int = 3) -> FidelitySpec:
    """Simulation fidelity: +15% stiffness, +50% actuator lag, -10%
    disturbance amplitude, doubled process noise, averaged rollouts."""
    return FidelitySpec(
        base=base or PlantParams(),
        freq_bias=1.15,
        lag_bias=1.5,
        disturbance_bias=0.9,
        noise_scale=2.0,
        repetitions=repetitions,
    )


def real_spec(base: PlantParams | None = None) -> FidelitySpec:
    """Real-system fidelity: the plant verbatim, single rollout."""
    return FidelitySpec(base=base or PlantParams())


@dataclass(frozen=True)
class Scenario:
    """A gain parameterization over the two-axis plant.

    ``p_gain_map`` and ``d_gain_map`` have shape (2, 2, d) and turn a gain
    vector ``x`` into the matrices K_P = p_gain_map @ x and K_D likewise,
    where entry [axis, src] weights the (deadbanded) deviation or filtered
    derivative of axis ``src`` in the control target of axis ``axis``.
    """

    name: str
    bounds: Bounds
    p_gain_map: np.ndarray
    d_gain_map: np.ndarray
    reference_gains: np.ndarray

    def __post_init__(self):
        d = self.bounds.dim
        p = np.asarray(self.p_gain_map, dtype=float)
        dm = np.asarray(self.d_gain_map, dtype=float)
        if p.shape != (2, 2, d) or dm.shape != (2, 2, d):
            raise ValueError(f"gain maps must have shape (2, 2, {d})")
        ref = check_param_vector(self.reference_gains, self.bounds, "reference_gains")
        object.__setattr__(self, "p_gain_map", p)
        object.__setattr__(self, "d_gain_map", dm)
        object.__setattr__(self, "reference_gains", ref)

    @property
    def dim(self) -> int:
        return self.bounds.dim


def ankle2d() -> Scenario:
    """2-D scenario: one shared (P, D) pair drives both axes directly."""
    p_map = np.zeros((2, 2, 2))
    d_map = np.zeros((2, 2, 2))
    p_map[0, 0] = [1.0, 0.0]
    p_map[1, 1] = [1.0, 0.0]
    d_map[0, 0] = [0.0, 1.0]
    d_map[1, 1] = [0.0, 1.0]
    return Scenario(
        name="ankle2d",
        bounds=Bounds([0.0, 0.0], [40.0, 12.0]),
        p_gain_map=p_map,
        d_gain_map=d_map,
        reference_gains=np.array([18.0, 2.0]),
    )


def arm_ankle4d() -> Scenario:
    """4-D scenario: x = (P_arm, D_arm, P_ankle, D_ankle).

    The ankle pair acts per axis on that axis's own state. The arm pair is
    driven by the alpha-axis state only: its corrective action enters alpha
    with effectiveness 0.4 and leaks into beta with factor 0.1, which couples
    the axes and makes the problem non-separable.
    """
    p_map = np.zeros((2, 2, 4))
    d_map = np.zeros((2, 2, 4))
    p_map[0, 0] = [0.4, 0.0, 1.0, 0.0]
    p_map[1, 0] = [0.1, 0.0, 0.0, 0.0]
    p_map[1, 1] = [0.0, 0.0, 1.0, 0.0]
    d_map[0, 0] = [0.0, 0.4, 0.0, 1.0]
    d_map[1, 0] = [0.0, 0.1, 0.0, 0.0]
    d_map[1, 1] = [0.0, 0.0, 0.0, 1.0]
    return Scenario(
        name="arm_ankle4d",
        bounds=Bounds([0.0, 0.0, 0.0, 0.0], [40.0, 12.0, 40.0, 12.0]),
        p_gain_map=p_map,
        d_gain_map=d_map,
        reference_gains=np.array([12.0, 2.0, 22.0, 4.0]),
    )


SCENARIOS = {"ankle2d": ankle2d, "arm_ankle4d": arm_ankle4d}


@njit(cache=True)
def _deriv(ta, va, ua, tb, vb, ub, ustar_a, ustar_b, omega2, lag, amp, period, warmup, na, nb, tau):
    if tau >= warmup:
        phase = 2.0 * math.pi * tau / period
        da = amp * math.sin(phase)
        db = amp * math.cos(phase)  # pi/2 phase offset across axes
    else:
        da = 0.0
        db = 0.0
    return (
        va,
        omega2 * math.sin(ta) + da - ua + na,
        (ustar_a - ua) / lag,
        vb,
        omega2 * math.sin(tb) + db - ub + nb,
        (ustar_b - ub) / lag,
    )


@njit(cache=True)
def _rollout(
    kp,
    kd,
    omega2,
    lag,
    amp,
    period,
    impulse_amp,
    impulse_every,
    noise,
    deadband,
    window,
    fall_threshold,
    dt,
    n_steps,
    warmup_steps,
    initial_tilt,
):
    e_a = np.zeros(n_steps)
    e_b = np.zeros(n_steps)
    th_a = np.zeros(n_steps)
    th_b = np.zeros(n_steps)
    buf_a = np.zeros(window)
    buf_b = np.zeros(window)
    sum_a = 0.0
    sum_b = 0.0
    prev_fa = 0.0
    prev_fb = 0.0
    warmup_t = warmup_steps * dt

    ta = initial_tilt
    va = 0.0
    ua = 0.0
    tb = initial_tilt
    vb = 0.0
    ub = 0.0
    fell = False
    fall_step = -1
    logged = 0

    for k in range(n_steps):
        # causal mean filter over the last min(window, k+1) tilt samples
        idx = k % window
        if k < window:
            sum_a += ta
            sum_b += tb
            filled = k + 1
        else:
            sum_a += ta - buf_a[idx]
            sum_b += tb - buf_b[idx]
            filled = window
        buf_a[idx] = ta
        buf_b[idx] = tb
        fa = sum_a / filled
        fb = sum_b / filled

        # smooth deadband on the filtered tilt
        if deadband > 0.0:
            ea = fa - deadband * math.tanh(fa / deadband)
            eb = fb - deadband * math.tanh(fb / deadband)
        else:
            ea = fa
            eb = fb
        if k == 0:
            dfa = 0.0
            dfb = 0.0
        else:
            dfa = (fa - prev_fa) / dt
            dfb = (fb - prev_fb) / dt
        prev_fa = fa
        prev_fb = fb

        e_a[k] = ea
        e_b[k] = eb
        th_a[k] = ta
        th_b[k] = tb
        logged = k + 1

        # PD targets; cross-axis entries realize the arm leak
        ustar_a = kp[0, 0] * ea + kp[0, 1] * eb + kd[0, 0] * dfa + kd[0, 1] * dfb
        ustar_b = kp[1, 0] * ea + kp[1, 1] * eb + kd[1, 0] * dfa + kd[1, 1] * dfb

        # periodic velocity impulse, alternating axes, first at warmup + interval
        if impulse_every > 0 and k > warmup_steps:
            m = (k - warmup_steps) // impulse_every
            if m >= 1 and k == warmup_steps + m * impulse_every:
                if m % 2 == 1:
                    va += impulse_amp
                else:
                    vb += impulse_amp

        na = noise[k, 0]
        nb = noise[k, 1]
        t = k * dt

        d1 = _deriv(ta, va, ua, tb, vb, ub, ustar_a, ustar_b, omega2, lag, amp, period, warmup_t, na, nb, t)
        ta2 = ta + 0.5 * dt * d1[0]
        va2 = va + 0.5 * dt * d1[1]
        ua2 = ua + 0.5 * dt * d1[2]
        tb2 = tb + 0.5 * dt * d1[3]
        vb2 = vb + 0.5 * dt * d1[4]
        ub2 = ub + 0.5 * dt * d1[5]
        d2 = _deriv(ta2, va2, ua2, tb2, vb2, ub2, ustar_a, ustar_b, omega2, lag, amp, period, warmup_t, na, nb, t + 0.5 * dt)
        ta3 = ta + 0.5 * dt * d2[0]
        va3 = va + 0.5 * dt * d2[1]
        ua3 = ua + 0.5 * dt * d2[2]
        tb3 = tb + 0.5 * dt * d2[3]
        vb3 = vb + 0.5 * dt * d2[4]
        ub3 = ub + 0.5 * dt * d2[5]
        d3 = _deriv(ta3, va3, ua3, tb3, vb3, ub3, ustar_a, ustar_b, omega2, lag, amp, period, warmup_t, na, nb, t + 0.5 * dt)
        ta4 = ta + dt * d3[0]
        va4 = va + dt * d3[1]
        ua4 = ua + dt * d3[2]
        tb4 = tb + dt * d3[3]
        vb4 = vb + dt * d3[4]
        ub4 = ub + dt * d3[5]
        d4 = _deriv(ta4, va4, ua4, tb4, vb4, ub4, ustar_a, ustar_b, omega2, lag, amp, period, warmup_t, na, nb, t + dt)

        sixth = dt / 6.0
        ta += sixth * (d1[0] + 2.0 * d2[0] + 2.0 * d3[0] + d4[0])
        va += sixth * (d1[1] + 2.0 * d2[1] + 2.0 * d3[1] + d4[1])
        ua += sixth * (d1[2] + 2.0 * d2[2] + 2.0 * d3[2] + d4[2])
        tb += sixth * (d1[3] + 2.0 * d2[3] + 2.0 * d3[3] + d4[3])
        vb += sixth * (d1[4] + 2.0 * d2[4] + 2.0 * d3[4] + d4[4])
        ub += sixth * (d1[5] + 2.0 * d2[5] + 2.0 * d3[5] + d4[5])

        if abs(ta) > fall_threshold or abs(tb) > fall_threshold:
            fell = True
            fall_step = k + 1
            break

    return e_a, e_b, th_a, th_b, logged, fell, fall_step


def simulate(x, scenario: Scenario, spec: FidelitySpec, seed: int) -> TrajectoryLog:
    """Run one rollout and log its trajectories.

    Bit-identical for identical ``(x, scenario, spec, seed)``. Raises if the
    gain vector leaves the scenario bounds.
    """
    x = check_param_vector(x, scenario.bounds)
    p = spec.base
    kp = scenario.p_gain_map @ x
    kd = scenario.d_gain_map @ x
    n_steps = p.n_steps
    sigma = p.process_noise_std * spec.noise_scale / math.sqrt(p.dt)
    noise = rng_from(seed).standard_normal((n_steps, 2)) * sigma
    e_a, e_b, th_a, th_b, logged, fell, fall_step = _rollout(
        kp,
        kd,
        p.natural_freq_sq * spec.freq_bias,
        p.actuator_lag * spec.lag_bias,
        p.disturbance_amp * spec.disturbance_bias,
        p.disturbance_period,
        p.impulse_amp,
        p.impulse_every,
        noise,
        p.deadband_radius,
        p.filter_window,
        p.fall_threshold,
        p.dt,
        n_steps,
        p.warmup_steps,
        p.initial_tilt,
    )
    return TrajectoryLog(
        dt=p.dt,
        e_p_alpha=e_a[:logged],
        e_p_beta=e_b[:logged],
        tilt_alpha=th_a[:logged],
        tilt_beta=th_b[:logged],
        fell=bool(fell),
        fall_time=fall_step * p.dt if fell else None,
    )


def _default_penalty(scenario: Scenario) -> PenaltyParams:
    return PenaltyParams(x_max=scenario.bounds.upper)


def evaluate_real(
    x,
    scenario: Scenario,
    seed: int,
    *,
    spec: FidelitySpec | None = None,
    penalty_params: PenaltyParams | None = None,
    plane: str = "summed",
) -> CostBreakdown:
    """Cost of one real-fidelity evaluation."""
    spec = spec or real_spec()
    params = penalty_params or _default_penalty(scenario)
    traj = simulate(x, scenario, spec, child_seed(seed, 0))
    return cost_real(traj, x, params, plane)


def evaluate_sim(
    x,
    scenario: Scenario,
    seed: int,
    *,
    spec: FidelitySpec | None = None,
    penalty_params: PenaltyParams | None = None,
    plane: str = "summed",
) -> CostBreakdown:
    """Cost of one simulation evaluation (average over the spec's repetitions)."""
    spec = spec or sim_spec()
    params = penalty_params or _default_penalty(scenario)
    trajs = [
        simulate(x, scenario, spec, child_seed(seed, rep))
        for rep in range(spec.repetitions)
    ]
    return cost_sim_averaged(trajs, x, params, plane)


@dataclass(frozen=True)
class TestbedObjective:
    """Objective adapter used by optimization campaigns.

    ``evaluate(x, fidelity, seed)`` dispatches to the simulation or real
    evaluator; both fidelities share the scenario, penalty, and plane choice.
    """

    scenario: Scenario
    penalty_params: PenaltyParams
    plane: str = "summed"
    sim: FidelitySpec | None = None
    real: FidelitySpec | None = None

    @property
    def bounds(self) -> Bounds:
        return self.scenario.bounds

    def evaluate(self, x, fidelity, seed: int) -> CostBreakdown:
        if int(fidelity) == 1:
            return evaluate_real(
                x,
                self.scenario,
                seed,
                spec=self.real,
                penalty_params=self.penalty_params,
                plane=self.plane,
            )
        return evaluate_sim(
            x,
            self.scenario,
            seed,
            spec=self.sim,
            penalty_params=self.penalty_params,
            plane=self.plane,
        )
