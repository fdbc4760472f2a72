"""Domain types for two-vehicle longitudinal time series.

Positions are raw longitudinal coordinates; the vehicle length is applied
exactly once, in :func:`effective_distance`.  Units are fixed: m, m/s, m/s², s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from types import MappingProxyType
from typing import Mapping, Sequence

LEVELS = ("D", "A", "G")


class ConfigError(ValueError):
    """Raised for parameter sets that violate their invariants."""


@dataclass(frozen=True)
class KinematicState:
    x: float
    v: float
    a: float


@dataclass(frozen=True)
class PairSample:
    t: float
    leader: KinematicState
    follower: KinematicState


@dataclass(frozen=True)
class PairTrajectory:
    """Time-ordered leader/follower samples.

    Construction never rejects data; use :func:`validate_trajectory` to list
    invariant violations.
    """

    samples: tuple[PairSample, ...]

    def __init__(self, samples: Sequence[PairSample]):
        object.__setattr__(self, "samples", tuple(samples))

    @property
    def N(self) -> int:
        return len(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.samples]


def _default_decel() -> Mapping[str, float]:
    return MappingProxyType({"D": 7.5, "A": 4.5, "G": 2.0})


@dataclass(frozen=True)
class EnvironmentParams:
    """Road, vehicle and metric parameters shared by every metric.

    ``tts_decel`` maps the criticality levels D (dangerous), A (attentive) and
    G (gentle) to braking decelerations in m/s².  ``adss_decel_rule`` selects
    how ADSS resolves each vehicle's deceleration: ``"clamp"`` limits the
    measured deceleration to ``[adss_a_min, mu * g]``; ``"max"`` uses
    ``max(|a|, mu * g)`` literally.
    """

    l_V: float = 4.6
    mu: float = 0.8
    g: float = 9.81
    t_R: float = 0.7
    tts_decel: Mapping[str, float] = field(default_factory=_default_decel, hash=False)
    tts_sigma: float = 0.5
    tts_p_thres: float = 0.5
    adss_decel_rule: str = "clamp"
    adss_a_min: float = 0.5
    eps_a: float = 0.05
    eps_j: float = 0.05

    def __post_init__(self):
        decel = dict(self.tts_decel)
        if set(decel) != set(LEVELS):
            raise ConfigError(f"tts_decel needs exactly the levels {LEVELS}, got {sorted(decel)}")
        object.__setattr__(self, "tts_decel", MappingProxyType({k: float(decel[k]) for k in LEVELS}))
        numbers = {
            "l_V": self.l_V, "mu": self.mu, "g": self.g, "t_R": self.t_R,
            "tts_sigma": self.tts_sigma, "tts_p_thres": self.tts_p_thres,
            "adss_a_min": self.adss_a_min, "eps_a": self.eps_a, "eps_j": self.eps_j,
            **{f"tts_decel.{k}": v for k, v in self.tts_decel.items()},
        }
        for name, value in numbers.items():
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        if self.l_V <= 0:
            raise ConfigError("l_V must be positive")
        if not 0 < self.mu <= 1.2:
            raise ConfigError("mu must lie in (0, 1.2]")
        if self.g <= 0:
            raise ConfigError("g must be positive")
        if self.t_R < 0:
            raise ConfigError("t_R must be non-negative")
        a = self.tts_decel
        if not 0 < a["G"] < a["A"] < a["D"]:
            raise ConfigError("tts_decel must satisfy 0 < G < A < D")
        if self.tts_sigma <= 0:
            raise ConfigError("tts_sigma must be positive")
        if not 0 <= self.tts_p_thres <= 1:
            raise ConfigError("tts_p_thres must lie in [0, 1]")
        if self.adss_decel_rule not in ("clamp", "max"):
            raise ConfigError("adss_decel_rule must be 'clamp' or 'max'")
        if not 0 < self.adss_a_min <= self.a_B_max:
            raise ConfigError("adss_a_min must lie in (0, mu * g]")
        if self.eps_a < 0 or self.eps_j < 0:
            raise ConfigError("eps_a and eps_j must be non-negative")

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["tts_decel"] = dict(self.tts_decel)
        return out

    @property
    def a_B_max(self) -> float:
        """Maximum achievable braking deceleration, mu * g."""
        return self.mu * self.g


def effective_distance(s: PairSample, l_V: float) -> float:
    """Gap x_L - x_F - l_V; negative when the vehicles overlap."""
    return s.leader.x - s.follower.x - l_V


@dataclass(frozen=True)
class Violation:
    index: int
    message: str

    def __str__(self):
        return f"sample {self.index}: {self.message}"


def validate_trajectory(traj: PairTrajectory) -> list[Violation]:
    violations = []
    if traj.N < 1:
        violations.append(Violation(0, "empty trajectory"))
    prev_t = None
    for i, s in enumerate(traj.samples):
        if not math.isfinite(s.t):
            violations.append(Violation(i, "non-finite t"))
        elif s.t < 0:
            violations.append(Violation(i, "negative t"))
        for tag, state in (("L", s.leader), ("F", s.follower)):
            for name in ("x", "v", "a"):
                if not math.isfinite(getattr(state, name)):
                    violations.append(Violation(i, f"non-finite {name}_{tag}"))
        if prev_t is not None and math.isfinite(s.t) and not s.t > prev_t:
            violations.append(Violation(i, "non-increasing t"))
        if math.isfinite(s.t):
            prev_t = s.t
    return violations


class TrajectoryError(ValueError):
    """A trajectory failed validation; ``violations`` lists every problem."""

    def __init__(self, violations: list[Violation], series_id=None):
        self.violations = violations
        self.series_id = series_id
        where = f"series {series_id}: " if series_id is not None else ""
        super().__init__(where + "; ".join(str(v) for v in violations))
