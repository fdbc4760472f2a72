"""Command-line front end.

Subcommands: simulate, metrics, classify, report, validate.  Precedence of
settings: built-in defaults < ``--config`` JSON file < command-line flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .classify import CLASSIFIERS, classify_batch
from .core import ConfigError, TrajectoryError, validate_trajectory
from .io import (
    ParseError,
    build_params,
    csv_text,
    grid_preset,
    json_text,
    load_config_file,
    read_trajectories,
    trajectories_csv,
    write_atomic,
)
from .metrics import METRICS
from .report import PLOT_HEADER, metric_columns, metric_rows, plot_rows, select_scenarios
from .simulator import generate_batch

log = logging.getLogger("longsafe")

EXIT_OK = 0
EXIT_INVALID_DATA = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_IO = 4

SCHEMA_VERSION = "1.0"


def _common(p: argparse.ArgumentParser, classifier=False, fmt=False):
    p.add_argument("--config", type=Path, help="JSON file with RunConfig fields")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    if classifier:
        p.add_argument("--classifier", choices=CLASSIFIERS)
    if fmt:
        p.add_argument("--format", choices=("csv", "json"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="longsafe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic follow-up-drive batch")
    _common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-series", type=int, dest="n_series")
    p.add_argument("--grids", choices=("standard", "zero"), help="variation grids for speeds and decelerations")

    p = sub.add_parser("metrics", help="evaluate safety metrics per sample")
    p.add_argument("input", type=Path)
    _common(p, fmt=True)
    p.add_argument("--metric", choices=METRICS + ("all",))

    p = sub.add_parser("classify", help="classify every scenario of a trajectory file")
    p.add_argument("input", type=Path)
    _common(p, classifier=True, fmt=True)

    p = sub.add_parser("report", help="write plot-ready data for selected scenarios")
    p.add_argument("input", type=Path)
    _common(p, classifier=True)
    p.add_argument(
        "--scenarios",
        help="comma-separated series ids, 'all', or 'pair' (first critical + first non-critical; default)",
    )

    p = sub.add_parser("validate", help="check a trajectory file against the data invariants")
    p.add_argument("input", type=Path)
    return parser


def resolve_config(args) -> dict:
    values = {}
    if getattr(args, "config", None) is not None:
        values.update(load_config_file(args.config))
    for key in ("seed", "n_series", "classifier", "metric", "format"):
        val = getattr(args, key, None)
        if val is not None:
            values[key] = val
    if getattr(args, "grids", None):
        grid = grid_preset(args.grids)
        values["v0_var_grid"] = grid
        values["a_brake_var_grid"] = grid
    return values


def _run_settings(values: dict):
    env, scenario = build_params(values)
    classifier = values.get("classifier", "adss")
    if classifier not in CLASSIFIERS:
        raise ConfigError(f"unknown classifier {classifier!r}")
    fmt = values.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    return env, scenario, classifier, fmt


def cmd_simulate(args) -> int:
    values = resolve_config(args)
    env, cfg, _, _ = _run_settings(values)
    batch = generate_batch(cfg)
    series = [(str(i), tr) for i, tr in enumerate(batch.trajectories)]
    meta = batch.metadata()
    meta["draws"] = [asdict(d) for d in batch.draws]
    meta["schema_version"] = SCHEMA_VERSION
    meta["created"] = datetime.now(timezone.utc).isoformat()
    write_atomic(args.out / "trajectories.csv", trajectories_csv(series))
    write_atomic(args.out / "trajectories.meta.json", json_text(meta))
    log.info("wrote %d series to %s", len(series), args.out / "trajectories.csv")
    return EXIT_OK


def _load_input(path):
    series = read_trajectories(path)
    for sid, traj in series:
        violations = validate_trajectory(traj)
        if violations:
            raise TrajectoryError(violations, sid)
    return series


def cmd_metrics(args) -> int:
    values = resolve_config(args)
    env, _, _, fmt = _run_settings(values)
    metric = values.get("metric", "all")
    metrics = list(METRICS) if metric == "all" else [metric]
    series = _load_input(args.input)
    cols = metric_columns(metrics)
    rows = metric_rows(series, env, metrics)
    if fmt == "json":
        write_atomic(args.out / "metrics.json", json_text([dict(zip(cols, r)) for r in rows]))
    else:
        write_atomic(args.out / "metrics.csv", csv_text(cols, rows))
    return EXIT_OK


VERDICT_HEADER = ("series_id", "b_crit", "first_critical_index", "first_critical_t", "n_points", "n_critical_points")


def _sidecar_seed(path: Path):
    meta = path.with_name(path.stem + ".meta.json")
    if not meta.is_file():
        return None
    try:
        return json.loads(meta.read_text(encoding="utf-8")).get("seed")
    except (ValueError, AttributeError):
        return None


def _classify(args, values):
    env, _, classifier, fmt = _run_settings(values)
    series = _load_input(args.input)
    seed = values.get("seed", _sidecar_seed(args.input))
    report = classify_batch(
        [tr for _, tr in series], env, classifier, series_ids=[sid for sid, _ in series],
        seed=seed, config=values,
    )
    return env, fmt, series, report


def cmd_classify(args) -> int:
    values = resolve_config(args)
    _, fmt, series, report = _classify(args, values)
    times = {sid: tr.times for sid, tr in series}
    rows = [
        (
            v.series_id,
            v.b_crit,
            v.first_critical_index,
            None if v.first_critical_index is None else times[v.series_id][v.first_critical_index],
            len(v.points),
            v.n_critical_points,
        )
        for v in report.verdicts
    ]
    if fmt == "json":
        write_atomic(args.out / "verdicts.json", json_text([dict(zip(VERDICT_HEADER, r)) for r in rows]))
    else:
        write_atomic(args.out / "verdicts.csv", csv_text(VERDICT_HEADER, rows))
    write_atomic(args.out / "report.json", json_text(report.summary()))
    log.info("%d of %d scenarios critical", report.n_critical, report.n_total)
    return EXIT_OK


def cmd_report(args) -> int:
    values = resolve_config(args)
    env, _, series, report = _classify(args, values)
    selected = select_scenarios(report, args.scenarios)
    rows = plot_rows(selected, dict(series), env)
    write_atomic(args.out / "plot_data.csv", csv_text(PLOT_HEADER, rows))
    return EXIT_OK


def cmd_validate(args) -> int:
    series = read_trajectories(args.input)
    bad = 0
    for sid, traj in series:
        for v in validate_trajectory(traj):
            bad += 1
            print(f"series {sid}: {v}")
    if bad:
        return EXIT_INVALID_DATA
    print(f"{len(series)} series OK")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "metrics": cmd_metrics,
    "classify": cmd_classify,
    "report": cmd_report,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TrajectoryError as exc:
        print(f"invalid trajectory: {exc}", file=sys.stderr)
        return EXIT_INVALID_DATA
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"I/O error{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
