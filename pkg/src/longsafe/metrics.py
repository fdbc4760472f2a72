"""Pointwise safety indicator metrics for a leader/follower pair.

Every metric returns a :class:`MetricOutcome`; degenerate inputs map to a
status instead of a sentinel number.  Relative quantities are always
follower minus leader, so a positive relative speed closes the gap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import LEVELS, EnvironmentParams, PairSample, effective_distance
from .roots import earliest_contact


class Status(str, enum.Enum):
    VALUE = "value"
    NOT_CLOSING = "not-closing"
    NO_COLLISION_PREDICTED = "no-collision-predicted"
    UNDEFINED = "undefined"
    ALREADY_COLLIDING = "already-colliding"


@dataclass(frozen=True)
class MetricOutcome:
    status: Status
    value: Optional[float] = None

    def __post_init__(self):
        if (self.value is not None) != (self.status is Status.VALUE):
            raise ValueError("value must be present iff status is VALUE")

    @classmethod
    def of(cls, value: float) -> "MetricOutcome":
        return cls(Status.VALUE, float(value))

    @property
    def ok(self) -> bool:
        return self.status is Status.VALUE


NOT_CLOSING = MetricOutcome(Status.NOT_CLOSING)
NO_COLLISION = MetricOutcome(Status.NO_COLLISION_PREDICTED)
UNDEFINED = MetricOutcome(Status.UNDEFINED)
COLLIDING = MetricOutcome(Status.ALREADY_COLLIDING)


class AttcType(str, enum.Enum):
    TTC1 = "TTC1"
    TTC2 = "TTC2"
    TTC3 = "TTC3"


@dataclass(frozen=True)
class AttcCase:
    selected: AttcType
    eps_a: float
    eps_j: float
    jerk_F: Optional[float] = None
    jerk_L: Optional[float] = None


@dataclass(frozen=True)
class TtsResult:
    ttc: float
    tts: Mapping[str, float]
    phi: Mapping[str, float]
    p: Mapping[str, float]
    p_D: float
    b_crit: bool


def ttc(s: PairSample, env: EnvironmentParams) -> MetricOutcome:
    """Time to collision at constant speeds."""
    d = effective_distance(s, env.l_V)
    if d < 0:
        return COLLIDING
    dv = s.follower.v - s.leader.v
    if dv <= 0:
        return NOT_CLOSING
    T = d / dv
    # a subnormal closing speed overflows the quotient
    return MetricOutcome.of(T) if math.isfinite(T) else NOT_CLOSING


def thw(s: PairSample, env: EnvironmentParams) -> MetricOutcome:
    """Time headway: gap over follower speed."""
    d = effective_distance(s, env.l_V)
    if d < 0:
        return COLLIDING
    if s.follower.v <= 0:
        return UNDEFINED
    return MetricOutcome.of(d / s.follower.v)


def mttc(s: PairSample, env: EnvironmentParams, eps_a: Optional[float] = None) -> MetricOutcome:
    """Modified TTC under constant relative acceleration.

    Takes the earliest strictly positive root of
    ``da/2 * T**2 + dv * T - d = 0``.  When ``|da| < eps_a`` the quadratic is
    treated as degenerate and the plain :func:`ttc` result is returned.
    """
    eps_a = env.eps_a if eps_a is None else eps_a
    d = effective_distance(s, env.l_V)
    if d < 0:
        return COLLIDING
    da = s.follower.a - s.leader.a
    if abs(da) < eps_a or da == 0.0:
        return ttc(s, env)
    dv = s.follower.v - s.leader.v
    if dv * dv + 2.0 * da * d < 0:
        return NO_COLLISION
    T = earliest_contact(d, dv, da)
    return NO_COLLISION if T is None else MetricOutcome.of(T)


def _jerks(window: Sequence[PairSample]):
    if len(window) < 2:
        return None
    prev, last = window[-2], window[-1]
    dt = last.t - prev.t
    if not dt > 0:
        return None
    return ((last.follower.a - prev.follower.a) / dt, (last.leader.a - prev.leader.a) / dt)


def attc(
    window: Sequence[PairSample],
    env: EnvironmentParams,
    eps_a: Optional[float] = None,
    eps_j: Optional[float] = None,
) -> tuple[MetricOutcome, AttcCase]:
    """Adaptive TTC evaluated at the last sample of ``window``.

    The kinematic model is picked from the last sample: constant speed when
    both accelerations are below ``eps_a``, constant acceleration when both
    backward-difference jerks are below ``eps_j`` (or the window is too short
    to estimate them), constant jerk otherwise.
    """
    if not window:
        raise ValueError("attc needs at least one sample")
    eps_a = env.eps_a if eps_a is None else eps_a
    eps_j = env.eps_j if eps_j is None else eps_j
    s = window[-1]
    if abs(s.follower.a) < eps_a and abs(s.leader.a) < eps_a:
        return ttc(s, env), AttcCase(AttcType.TTC1, eps_a, eps_j)
    jerks = _jerks(window)
    if jerks is None:
        return mttc(s, env, eps_a), AttcCase(AttcType.TTC2, eps_a, eps_j)
    j_F, j_L = jerks
    if abs(j_F) < eps_j and abs(j_L) < eps_j:
        return mttc(s, env, eps_a), AttcCase(AttcType.TTC2, eps_a, eps_j, j_F, j_L)
    case = AttcCase(AttcType.TTC3, eps_a, eps_j, j_F, j_L)
    d = effective_distance(s, env.l_V)
    if d < 0:
        return COLLIDING, case
    T = earliest_contact(
        d, s.follower.v - s.leader.v, s.follower.a - s.leader.a, j_F - j_L
    )
    return (NO_COLLISION if T is None else MetricOutcome.of(T)), case


def time_to_stop(v_F: float, decel: float, mu: float) -> float:
    return mu * v_F / decel


def tts(s: PairSample, env: EnvironmentParams) -> TtsResult | MetricOutcome:
    """Time-to-stop threat assessment on top of TTC.

    Returns :data:`UNDEFINED` whenever TTC itself has no value.  Threat
    scores are Gaussian in ``TTC - TTS_i``; the dangerous level saturates to
    1 below its stopping time and the gentle level saturates above its own.
    """
    base = ttc(s, env)
    if not base.ok:
        return UNDEFINED
    T = base.value
    sigma2 = 2.0 * env.tts_sigma ** 2
    stop = {k: time_to_stop(s.follower.v, env.tts_decel[k], env.mu) for k in LEVELS}
    log_phi = {k: -(T - stop[k]) * (T - stop[k]) / sigma2 for k in LEVELS}
    if T <= stop["D"]:
        log_phi["D"] = 0.0
    if T > stop["G"]:
        log_phi["G"] = 0.0
    # normalise in log space so tiny scores never divide 0 by 0
    top = max(log_phi.values())
    w = {k: math.exp(lp - top) for k, lp in log_phi.items()}
    total = sum(w.values())
    p = {k: w[k] / total for k in LEVELS}
    phi = {k: math.exp(lp) for k, lp in log_phi.items()}
    return TtsResult(T, stop, phi, p, p["D"], p["D"] >= env.tts_p_thres)


def _check_speeds(s: PairSample) -> bool:
    return s.leader.v >= 0 and s.follower.v >= 0


def _stopping_gap(d, v_L, v_F, t_R, a_L, a_F):
    return (d + v_L * v_L / (2.0 * a_L)) - (v_F * t_R + v_F * v_F / (2.0 * a_F))


def dss(s: PairSample, env: EnvironmentParams) -> MetricOutcome:
    """Difference space stopping with both vehicles at ``mu * g``."""
    if not _check_speeds(s):
        return UNDEFINED
    a_max = env.a_B_max
    d = effective_distance(s, env.l_V)
    return MetricOutcome.of(_stopping_gap(d, s.leader.v, s.follower.v, env.t_R, a_max, a_max))


def adss_deceleration(a: float, env: EnvironmentParams) -> float:
    """Braking deceleration magnitude ADSS assumes for one vehicle."""
    a_max = env.a_B_max
    if env.adss_decel_rule == "max":
        return max(abs(a), a_max)
    if a < 0:
        return min(max(-a, env.adss_a_min), a_max)
    return a_max


def adss(s: PairSample, env: EnvironmentParams) -> MetricOutcome:
    """Adaptive difference space stopping with each vehicle's own deceleration."""
    if not _check_speeds(s):
        return UNDEFINED
    d = effective_distance(s, env.l_V)
    a_L = adss_deceleration(s.leader.a, env)
    a_F = adss_deceleration(s.follower.a, env)
    return MetricOutcome.of(_stopping_gap(d, s.leader.v, s.follower.v, env.t_R, a_L, a_F))


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def matrix_relevant(v_L: float, v_F: float, a_L: float, a_F: float) -> tuple[int, int]:
    """Safety-relevance flags from the speed and acceleration sign tables.

    Speed: follower moving forward, leader moving forward or standing.
    Acceleration: leader braking, follower braking or holding speed.
    """
    v_flag = int(_sign(v_F) > 0 and _sign(v_L) >= 0)
    a_flag = int(_sign(a_L) < 0 and _sign(a_F) <= 0)
    return v_flag, a_flag


METRICS = ("ttc", "mttc", "attc", "thw", "tts", "dss", "adss")
