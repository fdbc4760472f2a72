"""Trajectory CSV, JSON config and atomic file output."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import fields
from pathlib import Path
from typing import Iterable, Sequence

from .core import ConfigError, EnvironmentParams, KinematicState, PairSample, PairTrajectory
from .simulator import STANDARD_GRID, ScenarioConfig

TRAJECTORY_HEADER = ("series_id", "t", "x_L", "v_L", "a_L", "x_F", "v_F", "a_F")


class ParseError(ValueError):
    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def fmt(x) -> str:
    """Shortest string that parses back to the identical float."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def trajectory_rows(series: Iterable[tuple[str, PairTrajectory]]):
    for sid, traj in series:
        for s in traj.samples:
            L, F = s.leader, s.follower
            yield (sid, s.t, L.x, L.v, L.a, F.x, F.v, F.a)


def trajectories_csv(series: Iterable[tuple[str, PairTrajectory]]) -> str:
    return csv_text(TRAJECTORY_HEADER, trajectory_rows(series))


def parse_trajectories(text: str, path="<input>") -> list[tuple[str, PairTrajectory]]:
    """Parse trajectory CSV into ``(series_id, trajectory)`` pairs.

    Series keep the order of their first appearance; rows of one series need
    not be contiguous but keep their relative order.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(path, 1, "empty file, expected header") from None
    header = [h.strip() for h in header]
    if tuple(header) != TRAJECTORY_HEADER:
        raise ParseError(path, 1, f"expected header {','.join(TRAJECTORY_HEADER)}")
    grouped: dict[str, list[PairSample]] = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(TRAJECTORY_HEADER):
            raise ParseError(path, line, f"expected {len(TRAJECTORY_HEADER)} fields, got {len(row)}")
        sid = row[0].strip()
        if not sid:
            raise ParseError(path, line, "empty series_id")
        try:
            t, xL, vL, aL, xF, vF, aF = (float(c) for c in row[1:])
        except ValueError as exc:
            raise ParseError(path, line, f"bad number ({exc})") from None
        grouped.setdefault(sid, []).append(
            PairSample(t, KinematicState(xL, vL, aL), KinematicState(xF, vF, aF))
        )
    return [(sid, PairTrajectory(samples)) for sid, samples in grouped.items()]


def read_trajectories(path) -> list[tuple[str, PairTrajectory]]:
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_trajectories(text, path)


# --- run configuration ---------------------------------------------------

_ENV_FIELDS = {f.name for f in fields(EnvironmentParams)}
_SCENARIO_FIELDS = {f.name for f in fields(ScenarioConfig)}
_RUN_FIELDS = {"classifier", "metric", "format"}
SHARED_FIELDS = _ENV_FIELDS & _SCENARIO_FIELDS


def load_config_file(path) -> dict:
    """Flat JSON object whose keys are RunConfig field names."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    unknown = set(data) - _ENV_FIELDS - _SCENARIO_FIELDS - _RUN_FIELDS
    if unknown:
        raise ConfigError(f"{path}: unknown config keys {sorted(unknown)}")
    return data


def build_params(values: dict) -> tuple[EnvironmentParams, ScenarioConfig]:
    """Split a flat mapping into environment and scenario parameters.

    ``l_V`` and ``t_R`` feed both, so simulated and evaluated vehicles agree.
    """
    env_kw = {k: v for k, v in values.items() if k in _ENV_FIELDS}
    sc_kw = {k: v for k, v in values.items() if k in _SCENARIO_FIELDS}
    for name in ("v0_var_grid", "a_brake_var_grid"):
        if isinstance(sc_kw.get(name), str):
            sc_kw[name] = grid_preset(sc_kw[name])
    try:
        return EnvironmentParams(**env_kw), ScenarioConfig(**sc_kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def grid_preset(name: str) -> tuple[float, ...]:
    presets = {"standard": STANDARD_GRID, "zero": (0.0,)}
    try:
        return presets[name]
    except KeyError:
        raise ConfigError(f"unknown grid preset {name!r}; choose from {sorted(presets)}") from None
