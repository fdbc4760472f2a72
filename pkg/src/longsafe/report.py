"""Per-sample metric tables and plot-ready series for classified scenarios."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .classify import BatchReport, ScenarioVerdict
from .core import ConfigError, EnvironmentParams, PairTrajectory, effective_distance
from .metrics import METRICS, MetricOutcome, TtsResult, adss, attc, dss, mttc, thw, ttc, tts

PLOT_HEADER = ("series_id", "t", "distance", "dv", "da", "braking_window", "critical", "b_crit")


class SelectionError(ConfigError):
    """Requested scenario ids are not in the input."""


def metric_columns(metrics: Sequence[str]) -> list[str]:
    cols = ["series_id", "t"]
    for m in metrics:
        if m == "tts":
            cols += ["tts_status", "tts_p_D", "tts_p_A", "tts_p_G", "tts_b_crit"]
        else:
            cols += [f"{m}_status", f"{m}_value"]
            if m == "attc":
                cols.append("attc_case")
    return cols


def _outcome_cells(o: MetricOutcome):
    return [o.status.value, o.value]


def metric_rows(series: Iterable[tuple[str, PairTrajectory]], env: EnvironmentParams, metrics: Sequence[str]):
    pointwise = {"ttc": ttc, "mttc": mttc, "thw": thw, "dss": dss, "adss": adss}
    for m in metrics:
        if m not in METRICS:
            raise ConfigError(f"unknown metric {m!r}")
    for sid, traj in series:
        samples = traj.samples
        for k, s in enumerate(samples):
            row = [sid, s.t]
            for m in metrics:
                if m in pointwise:
                    row += _outcome_cells(pointwise[m](s, env))
                elif m == "attc":
                    outcome, case = attc(samples[: k + 1], env)
                    row += _outcome_cells(outcome) + [case.selected.value]
                else:
                    r = tts(s, env)
                    if isinstance(r, TtsResult):
                        row += ["value", r.p["D"], r.p["A"], r.p["G"], r.b_crit]
                    else:
                        row += [r.status.value, None, None, None, None]
            yield row


def select_scenarios(report: BatchReport, selection: Optional[str]) -> list[ScenarioVerdict]:
    """Resolve a selection string against a report.

    ``None`` or ``"pair"`` picks the first critical and the first
    non-critical scenario, ``"all"`` every scenario, ``""`` none; anything
    else is a comma-separated list of series ids.
    """
    verdicts = report.verdicts
    if selection is None or selection == "pair":
        picked = []
        for flag in (True, False):
            v = next((v for v in verdicts if v.b_crit is flag), None)
            if v is not None:
                picked.append(v)
        return picked
    if selection == "all":
        return list(verdicts)
    ids = [s.strip() for s in selection.split(",") if s.strip()]
    by_id = {v.series_id: v for v in verdicts}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise SelectionError(f"unknown scenario id(s): {', '.join(missing)}")
    return [by_id[i] for i in ids]


def plot_rows(selected: Sequence[ScenarioVerdict], trajectories: dict[str, PairTrajectory], env: EnvironmentParams):
    """Gap, speed and acceleration differences (leader minus follower)."""
    for v in selected:
        traj = trajectories[v.series_id]
        for s, p in zip(traj.samples, v.points):
            yield (
                v.series_id,
                s.t,
                effective_distance(s, env.l_V),
                s.leader.v - s.follower.v,
                s.leader.a - s.follower.a,
                p.both_braking,
                p.critical,
                v.b_crit,
            )
