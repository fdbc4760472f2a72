"""Per-point and per-scenario criticality verdicts.

A point is critical when both vehicles brake and ADSS is at most zero, or
when the vehicles already overlap.  A scenario is critical as soon as one of
its points is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import EnvironmentParams, PairSample, PairTrajectory, TrajectoryError, effective_distance, validate_trajectory
from .metrics import COLLIDING, MetricOutcome, Status, TtsResult, adss, tts

CLASSIFIERS = ("adss", "tts")


@dataclass(frozen=True)
class PointVerdict:
    index: int
    adss: MetricOutcome
    both_braking: bool
    critical: bool
    tts: Optional[TtsResult] = None


@dataclass(frozen=True)
class ScenarioVerdict:
    points: tuple[PointVerdict, ...]
    b_crit: bool
    first_critical_index: Optional[int]
    series_id: Optional[str] = None

    @property
    def n_critical_points(self) -> int:
        return sum(p.critical for p in self.points)


@dataclass
class BatchReport:
    n_total: int
    n_critical: int
    critical_fraction: float
    verdicts: list[ScenarioVerdict]
    classifier: str
    env: EnvironmentParams
    seed: Optional[int] = None
    config: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "n_total": self.n_total,
            "n_critical": self.n_critical,
            "critical_fraction": self.critical_fraction,
            "classifier": self.classifier,
            "seed": self.seed,
            "env": self.env.as_dict(),
            "config": self.config,
            "critical_series": [v.series_id for v in self.verdicts if v.b_crit],
        }


def classify_point(s: PairSample, env: EnvironmentParams, index: int = 0, classifier: str = "adss") -> PointVerdict:
    if classifier not in CLASSIFIERS:
        raise ValueError(f"unknown classifier {classifier!r}")
    both_braking = s.leader.a < 0 and s.follower.a < 0
    if effective_distance(s, env.l_V) < 0:
        # a realised collision counts whatever the braking state
        outcome = COLLIDING
    else:
        outcome = adss(s, env)
    colliding = outcome.status is Status.ALREADY_COLLIDING
    result = None
    if classifier == "tts":
        result = tts(s, env)
        critical = colliding or (isinstance(result, TtsResult) and result.b_crit)
        if not isinstance(result, TtsResult):
            result = None
    else:
        critical = colliding or (both_braking and outcome.ok and outcome.value <= 0)
    return PointVerdict(index, outcome, both_braking, critical, result)


def classify_scenario(
    traj: PairTrajectory, env: EnvironmentParams, classifier: str = "adss", series_id=None
) -> ScenarioVerdict:
    violations = validate_trajectory(traj)
    if violations:
        raise TrajectoryError(violations, series_id)
    points = tuple(classify_point(s, env, i, classifier) for i, s in enumerate(traj.samples))
    first = next((p.index for p in points if p.critical), None)
    return ScenarioVerdict(points, first is not None, first, None if series_id is None else str(series_id))


def classify_batch(
    trajectories: Sequence[PairTrajectory],
    env: EnvironmentParams,
    classifier: str = "adss",
    series_ids: Optional[Sequence] = None,
    seed: Optional[int] = None,
    config: Optional[dict] = None,
) -> BatchReport:
    """Classify every trajectory; ``trajectories`` may also be a ScenarioBatch."""
    if hasattr(trajectories, "trajectories"):
        batch = trajectories
        trajectories = batch.trajectories
        seed = batch.config.seed if seed is None else seed
        config = batch.metadata() if config is None else config
    if series_ids is None:
        series_ids = [str(i) for i in range(len(trajectories))]
    verdicts = [
        classify_scenario(traj, env, classifier, sid) for sid, traj in zip(series_ids, trajectories)
    ]
    n_total = len(verdicts)
    n_critical = sum(v.b_crit for v in verdicts)
    fraction = n_critical / n_total if n_total else 0.0
    return BatchReport(n_total, n_critical, fraction, verdicts, classifier, env, seed, config or {})
