"""Seeded generator of synthetic follow-up drives.

Two vehicles drive in one lane at constant speed, then brake: the leader at
``t_brake_L``, the follower one reaction time later.  Each vehicle holds
``v = 0`` once stopped.  Kinematics are evaluated in closed form at every
sample, so braking onsets and stops between grid points are exact.

Every trajectory draws from its own PCG64 stream keyed by
``(seed, trajectory index)``; a batch is therefore independent of the order
or process in which trajectories are built.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import ConfigError, KinematicState, PairSample, PairTrajectory

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence(entropy=seed, spawn_key=(index,))"
DEFAULT_SEED = 2023


def variation_grid(half_width: float = 1.0, step: float = 0.05) -> tuple[float, ...]:
    """Symmetric grid {-w, -w + step, ..., w} with exact decimal points."""
    n = int(round(half_width / step))
    return tuple(round(k * step, 10) for k in range(-n, n + 1))


STANDARD_GRID = variation_grid()


@dataclass(frozen=True)
class ScenarioConfig:
    d0: float = 15.4
    l_V: float = 4.6
    v0_mean_L: float = 80 / 3.6
    v0_mean_F: float = 90 / 3.6
    v0_var_grid: tuple[float, ...] = STANDARD_GRID
    a_brake_mean: float = 7.0
    a_brake_var_grid: tuple[float, ...] = STANDARD_GRID
    t_R: float = 0.7
    t_brake_L: float = 0.0
    dt: float = 0.25
    n_points: int = 10
    n_series: int = 1000
    seed: int = DEFAULT_SEED
    reaction_mode: str = "fixed"
    gamma_shape: float = 2.0
    gamma_scale: float = 0.2
    gamma_shift: float = 0.3

    def __post_init__(self):
        object.__setattr__(self, "v0_var_grid", tuple(float(g) for g in self.v0_var_grid))
        object.__setattr__(self, "a_brake_var_grid", tuple(float(g) for g in self.a_brake_var_grid))
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        if self.n_series < 0:
            raise ConfigError("n_series must be non-negative")
        for name in ("v0_var_grid", "a_brake_var_grid"):
            grid = sorted(getattr(self, name))
            if not grid:
                raise ConfigError(f"{name} must not be empty")
            if any(abs(a + b) > 1e-9 for a, b in zip(grid, reversed(grid))):
                raise ConfigError(f"{name} must be symmetric about 0")
        if not self.d0 > 0:
            raise ConfigError("d0 must be positive")
        if not self.l_V > 0:
            raise ConfigError("l_V must be positive")
        if not self.a_brake_mean + min(self.a_brake_var_grid) > 0:
            raise ConfigError("braking deceleration must stay positive over the grid")
        if self.t_R < 0 or self.t_brake_L < 0:
            raise ConfigError("t_R and t_brake_L must be non-negative")
        if self.v0_mean_L + min(self.v0_var_grid) < 0 or self.v0_mean_F + min(self.v0_var_grid) < 0:
            raise ConfigError("initial speeds must stay non-negative over the grid")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.reaction_mode not in ("fixed", "gamma"):
            raise ConfigError("reaction_mode must be 'fixed' or 'gamma'")
        if self.reaction_mode == "gamma" and not (self.gamma_shape > 0 and self.gamma_scale > 0 and self.gamma_shift >= 0):
            raise ConfigError("gamma reaction time needs shape > 0, scale > 0, shift >= 0")

    @property
    def times(self) -> list[float]:
        return [k * self.dt for k in range(self.n_points)]


@dataclass(frozen=True)
class Initials:
    v0_L: float
    v0_F: float
    a_L_brake: float
    a_F_brake: float
    t_R: float


@dataclass(frozen=True)
class Draw:
    v0_var_L: float
    v0_var_F: float
    a_var_L: float
    a_var_F: float
    t_R: float


@dataclass
class ScenarioBatch:
    trajectories: list[PairTrajectory]
    config: ScenarioConfig
    draws: list[Draw] = field(default_factory=list)
    rng_algorithm: str = RNG_ALGORITHM

    def metadata(self) -> dict:
        return {
            "config": asdict(self.config),
            "seed": self.config.seed,
            "rng_algorithm": self.rng_algorithm,
            "n_series": len(self.trajectories),
            "n_points": self.config.n_points,
        }


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(index,))))


def sample_draw(cfg: ScenarioConfig, rng: np.random.Generator) -> Draw:
    """Independent uniform picks from the variation grids (plus reaction time)."""
    v_grid, a_grid = cfg.v0_var_grid, cfg.a_brake_var_grid
    iv = rng.integers(len(v_grid), size=2)
    ia = rng.integers(len(a_grid), size=2)
    if cfg.reaction_mode == "gamma":
        t_R = cfg.gamma_shift + float(rng.gamma(cfg.gamma_shape, cfg.gamma_scale))
    else:
        t_R = cfg.t_R
    return Draw(v_grid[iv[0]], v_grid[iv[1]], a_grid[ia[0]], a_grid[ia[1]], t_R)


def initials_from_draw(cfg: ScenarioConfig, draw: Draw) -> Initials:
    return Initials(
        v0_L=cfg.v0_mean_L + draw.v0_var_L,
        v0_F=cfg.v0_mean_F + draw.v0_var_F,
        a_L_brake=cfg.a_brake_mean + draw.a_var_L,
        a_F_brake=cfg.a_brake_mean + draw.a_var_F,
        t_R=draw.t_R,
    )


def sample_initials(cfg: ScenarioConfig, rng: np.random.Generator) -> Initials:
    return initials_from_draw(cfg, sample_draw(cfg, rng))


def braking_state(x0: float, v0: float, decel: float, t_on: float, t: float) -> KinematicState:
    """State at ``t`` of a vehicle cruising at ``v0`` that brakes from ``t_on``.

    The acceleration reported at an instant is the one in effect right after
    it; at the onset that is already ``-decel``, at the stop it is 0.
    """
    if t < t_on:
        return KinematicState(x0 + v0 * t, v0, 0.0)
    x_on = x0 + v0 * t_on
    t_stop = v0 / decel
    tau = t - t_on
    if tau >= t_stop:
        return KinematicState(x_on + 0.5 * v0 * t_stop, 0.0, 0.0)
    return KinematicState(x_on + v0 * tau - 0.5 * decel * tau * tau, v0 - decel * tau, -decel)


def integrate_pair(cfg: ScenarioConfig, initials: Initials) -> PairTrajectory:
    x0_F = 0.0
    x0_L = cfg.d0 + cfg.l_V
    t_on_F = cfg.t_brake_L + initials.t_R
    samples = []
    for t in cfg.times:
        leader = braking_state(x0_L, initials.v0_L, initials.a_L_brake, cfg.t_brake_L, t)
        follower = braking_state(x0_F, initials.v0_F, initials.a_F_brake, t_on_F, t)
        samples.append(PairSample(t, leader, follower))
    return PairTrajectory(samples)


def generate_batch(cfg: ScenarioConfig) -> ScenarioBatch:
    trajectories, draws = [], []
    for i in range(cfg.n_series):
        draw = sample_draw(cfg, trajectory_rng(cfg.seed, i))
        draws.append(draw)
        trajectories.append(integrate_pair(cfg, initials_from_draw(cfg, draw)))
    return ScenarioBatch(trajectories, cfg, draws)
