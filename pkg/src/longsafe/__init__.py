"""Longitudinal safety indicator metrics and follow-up-drive scenario tools."""

__version__ = "0.1.0"

from .classify import BatchReport, PointVerdict, ScenarioVerdict, classify_batch, classify_point, classify_scenario
from .core import (
    ConfigError,
    EnvironmentParams,
    KinematicState,
    PairSample,
    PairTrajectory,
    TrajectoryError,
    Violation,
    effective_distance,
    validate_trajectory,
)
from .metrics import (
    AttcCase,
    AttcType,
    MetricOutcome,
    Status,
    TtsResult,
    adss,
    attc,
    dss,
    matrix_relevant,
    mttc,
    thw,
    tts,
    ttc,
)
from .simulator import ScenarioBatch, ScenarioConfig, generate_batch, integrate_pair, sample_initials
