"""Command-line front end: ingestion, analysis, and report/plot emission.

Every subcommand is a thin orchestrator over the library modules, so its
outputs are bit-identical to direct library calls with the same inputs
and seed.  All output files are written atomically (temp file + rename).

Exit codes: 0 success, 1 user/input error, 2 internal/numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from roadnet.crossval import (
    IDW_POWER_SEARCH,
    RBF_SIGMA_SEARCH,
    Method,
    build_samples,
    compare_methods,
    optimize_parameter,
    predict,
    summary_stats,
)
from roadnet.errors import InputError, NumericalError
from roadnet.geo import GeoCoord, project
from roadnet.ingest import (
    Network,
    Variable,
    load_observations,
    load_regions,
    load_stations,
)
from roadnet.interp import MethodParams
from roadnet.pattern import (
    StudyWindow,
    cluster_verdict,
    coverage_report,
    default_distance_grid,
    l_function_analysis,
)
from roadnet.svgplot import l_function_svg

TARGET_HEADER = ["target_id", "lat", "lon"]

METHOD_CHOICES = {
    "idw": (Method.IDW,),
    "rbf": (Method.RBF,),
    "ok": (Method.OK,),
    "all": (Method.IDW, Method.RBF, Method.OK),
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: paths, selectors, and reproducibility knobs."""

    subcommand: str
    stations_path: str | None = None
    obs_path: str | None = None
    regions_path: str | None = None
    targets_path: str | None = None
    out_prefix: str | None = None
    out_path: str | None = None
    seed: int = 42
    sims: int = 9
    bins: int = 40
    workers: int = 1
    network: str | None = None
    method: str = "all"
    variable: str | None = None
    timestamp: str | None = None
    idw_power: float = 2.0
    rbf_sigma: float = 1.0
    optimize: bool = False
    svg: bool = False
    json_mirror: bool = False
    dedupe_radius_km: float | None = None

    def validate(self) -> None:
        if self.seed < 0:
            raise InputError(f"seed must be >= 0, got {self.seed}")
        for path in (self.stations_path, self.obs_path, self.regions_path, self.targets_path):
            if path is not None and not os.path.exists(path):
                raise InputError(f"input file does not exist: {path}")


def _f(value) -> str:
    # repr of a Python float round-trips exactly, giving byte-stable CSVs.
    return repr(float(value))


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".roadnet-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_methods(text: str):
    if text not in METHOD_CHOICES:
        raise InputError(
            f"unknown method {text!r} (valid: {', '.join(sorted(METHOD_CHOICES))})"
        )
    return METHOD_CHOICES[text]


def _parse_variable(text: str) -> Variable:
    try:
        return Variable(text)
    except ValueError:
        valid = ", ".join(v.value for v in Variable)
        raise InputError(f"unknown variable {text!r} (valid: {valid})")


def _load_targets(path):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open targets file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file, expected header {TARGET_HEADER}")
        if header != TARGET_HEADER:
            raise InputError(f"{path}: bad header {header}, expected {TARGET_HEADER}")
        targets = []
        for lineno, row in enumerate(reader, start=2):
            where = f"{path}:{lineno}"
            if len(row) != 3:
                raise InputError(f"{where}: expected 3 fields, got {len(row)}")
            target_id, lat_txt, lon_txt = row
            if not target_id:
                raise InputError(f"{where}: empty target_id")
            try:
                lat = float(lat_txt)
                lon = float(lon_txt)
            except ValueError:
                raise InputError(f"{where}: lat/lon must be numeric, got {lat_txt!r}, {lon_txt!r}")
            try:
                coord = GeoCoord(lat, lon)
            except InputError as exc:
                raise InputError(f"{where}: {exc}") from exc
            targets.append((target_id, coord))
    return targets


def _group_by_network(stations):
    """Registries keyed by network label, in order of first appearance."""
    groups: dict[str, list] = {}
    for station in stations:
        groups.setdefault(station.network.value, []).append(station)
    return groups


def cmd_coverage(config: RunConfig) -> int:
    stations = load_stations(config.stations_path)
    regions = load_regions(config.regions_path)
    registries = _group_by_network(stations)
    # Union rows pair the first network with each additional one.
    labels = list(registries)
    unions = [(labels[0], other) for other in labels[1:]]
    report = coverage_report(registries, regions, unions)
    header = (
        ["network", "count_total", "mean_nn_km"]
        + [f"in_{name}" for name in report.region_names]
        + ["in_any_region"]
    )
    rows = [
        [row.label, row.count_total, _f(row.mean_nn_km)]
        + [row.region_counts[name] for name in report.region_names]
        + [row.count_in_any_region]
        for row in report.rows
    ]
    _write_atomic(config.out_prefix + ".csv", _csv_text(header, rows))
    payload = {
        "region_names": report.region_names,
        "rows": [
            {
                "network": row.label,
                "count_total": row.count_total,
                "mean_nn_km": row.mean_nn_km,
                "region_counts": row.region_counts,
                "count_in_any_region": row.count_in_any_region,
            }
            for row in report.rows
        ],
    }
    _write_atomic(config.out_prefix + ".json", _json_text(payload))
    return 0


def cmd_pattern(config: RunConfig) -> int:
    stations = load_stations(config.stations_path)
    if config.network is not None:
        try:
            wanted = Network(config.network)
        except ValueError:
            valid = ", ".join(n.value for n in Network)
            raise InputError(f"unknown network {config.network!r} (valid: {valid})")
        stations = [s for s in stations if s.network is wanted]
    if len(stations) < 2:
        raise InputError(f"pattern analysis needs >= 2 stations, got {len(stations)}")
    coords = [s.location for s in stations]
    ref = GeoCoord(
        float(np.mean([c.lat for c in coords])), float(np.mean([c.lon for c in coords]))
    )
    points = project(coords, ref)
    window = StudyWindow.from_points(points)
    grid = default_distance_grid(window, config.bins)
    result = l_function_analysis(
        points, window, grid, n_sims=config.sims, seed=config.seed, workers=config.workers
    )
    verdicts = cluster_verdict(result)
    header = ["distance_km", "l_observed", "envelope_low", "envelope_high", "verdict"]
    rows = [
        [_f(d), _f(obs), _f(low), _f(high), verdict.value]
        for d, obs, low, high, verdict in zip(
            result.distances,
            result.l_observed,
            result.envelope_low,
            result.envelope_high,
            verdicts,
        )
    ]
    _write_atomic(config.out_prefix + ".csv", _csv_text(header, rows))
    if config.json_mirror:
        payload = {
            "seed": result.seed,
            "n_simulations": result.n_simulations,
            "bands": [
                {
                    "distance_km": float(d),
                    "l_observed": float(obs),
                    "envelope_low": float(low),
                    "envelope_high": float(high),
                    "verdict": verdict.value,
                }
                for d, obs, low, high, verdict in zip(
                    result.distances,
                    result.l_observed,
                    result.envelope_low,
                    result.envelope_high,
                    verdicts,
                )
            ],
        }
        _write_atomic(config.out_prefix + ".json", _json_text(payload))
    if config.svg:
        _write_atomic(config.out_prefix + ".svg", l_function_svg(result))
    return 0


def cmd_interp(config: RunConfig) -> int:
    methods = _parse_methods(config.method)
    variable = _parse_variable(config.variable)
    stations = load_stations(config.stations_path)
    obs_sets = load_observations(config.obs_path, stations)
    matches = [
        o for o in obs_sets if o.variable is variable and o.timestamp == config.timestamp
    ]
    if not matches:
        available = ", ".join(f"({o.variable.value}, {o.timestamp})" for o in obs_sets)
        raise InputError(
            f"no observations for ({variable.value}, {config.timestamp}); "
            f"available: {available}"
        )
    obs = matches[0]
    targets = _load_targets(config.targets_path)
    samples = build_samples(obs, stations)
    params = MethodParams(idw_power=config.idw_power, rbf_sigma=config.rbf_sigma)
    if config.optimize:
        if Method.IDW in methods:
            params = optimize_parameter(Method.IDW, obs, stations, IDW_POWER_SEARCH, params)
        if Method.RBF in methods:
            params = optimize_parameter(Method.RBF, obs, stations, RBF_SIGMA_SEARCH, params)
    header = ["target_id", "lat", "lon", "method", "variable", "timestamp", "predicted_value"]
    rows = []
    for target_id, coord in targets:
        for method in methods:
            value = predict(method, samples, coord, params)
            rows.append(
                [
                    target_id,
                    _f(coord.lat),
                    _f(coord.lon),
                    method.value,
                    variable.value,
                    obs.timestamp,
                    _f(value),
                ]
            )
    _write_atomic(config.out_path, _csv_text(header, rows))
    if config.json_mirror:
        payload = [
            {
                "target_id": row[0],
                "lat": float(row[1]),
                "lon": float(row[2]),
                "method": row[3],
                "variable": row[4],
                "timestamp": row[5],
                "predicted_value": float(row[6]),
            }
            for row in rows
        ]
        _write_atomic(_json_path(config.out_path), _json_text(payload))
    return 0


def _json_path(csv_path: str) -> str:
    root, ext = os.path.splitext(csv_path)
    return root + ".json"


def _crossval_rows(reports):
    rows = []
    for report in reports:
        if report.method is Method.IDW:
            param = _f(report.params.idw_power)
        elif report.method is Method.RBF:
            param = _f(report.params.rbf_sigma)
        else:
            param = ""  # kriging's variogram is fixed, nothing optimized
        rows.append(
            [report.method.value, report.variable.value, report.timestamp, _f(report.rms), param]
        )
    return rows


def cmd_crossval(config: RunConfig) -> int:
    methods = _parse_methods(config.method)
    stations = load_stations(config.stations_path)
    obs_sets = load_observations(config.obs_path, stations)
    if len(obs_sets) < 2:
        raise InputError(
            f"crossval needs >= 2 observation sets, got {len(obs_sets)}"
        )
    reports = compare_methods(obs_sets, stations, methods=methods)
    header = ["method", "variable", "timestamp", "rms", "optimized_param"]
    rows = _crossval_rows(reports)
    _write_atomic(config.out_path, _csv_text(header, rows))
    if config.json_mirror:
        payload = [
            {
                "method": row[0],
                "variable": row[1],
                "timestamp": row[2],
                "rms": float(row[3]),
                "optimized_param": float(row[4]) if row[4] else None,
            }
            for row in rows
        ]
        _write_atomic(_json_path(config.out_path), _json_text(payload))
    return 0


def cmd_summary(config: RunConfig) -> int:
    obs_sets = load_observations(config.obs_path)
    header = ["variable", "timestamp", "mean", "std_dev", "cv_percent"]
    rows = []
    stats_list = [summary_stats(obs) for obs in obs_sets]
    for stats in stats_list:
        cv = "" if stats.cv_percent is None else format(stats.cv_percent, ".0f")
        rows.append([stats.variable.value, stats.timestamp, _f(stats.mean), _f(stats.std_dev), cv])
    _write_atomic(config.out_path, _csv_text(header, rows))
    if config.json_mirror:
        payload = [
            {
                "variable": stats.variable.value,
                "timestamp": stats.timestamp,
                "mean": stats.mean,
                "std_dev": stats.std_dev,
                "cv_percent": stats.cv_percent,
            }
            for stats in stats_list
        ]
        _write_atomic(_json_path(config.out_path), _json_text(payload))
    return 0


_DISPATCH = {
    "coverage": cmd_coverage,
    "pattern": cmd_pattern,
    "interp": cmd_interp,
    "crossval": cmd_crossval,
    "summary": cmd_summary,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roadnet",
        description="Station-network coverage, clustering, and interpolation analysis.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("coverage", help="per-network and combined coverage report")
    p.add_argument("--stations", required=True, dest="stations_path")
    p.add_argument("--regions", required=True, dest="regions_path")
    p.add_argument("--out-prefix", required=True, dest="out_prefix")

    p = sub.add_parser("pattern", help="L-function clustering analysis")
    p.add_argument("--stations", required=True, dest="stations_path")
    p.add_argument("--network", dest="network")
    p.add_argument("--sims", type=int, default=9, dest="sims")
    p.add_argument("--seed", type=int, default=42, dest="seed")
    p.add_argument("--bins", type=int, default=40, dest="bins")
    p.add_argument("--workers", type=int, default=1, dest="workers")
    p.add_argument("--out-prefix", required=True, dest="out_prefix")
    p.add_argument("--svg", action="store_true", dest="svg")
    p.add_argument("--json", action="store_true", dest="json_mirror")

    p = sub.add_parser("interp", help="interpolate one variable at target points")
    p.add_argument("--stations", required=True, dest="stations_path")
    p.add_argument("--obs", required=True, dest="obs_path")
    p.add_argument("--targets", required=True, dest="targets_path")
    p.add_argument("--method", default="all", dest="method")
    p.add_argument("--variable", required=True, dest="variable")
    p.add_argument("--timestamp", required=True, dest="timestamp")
    p.add_argument("--idw-power", type=float, default=2.0, dest="idw_power")
    p.add_argument("--rbf-sigma", type=float, default=1.0, dest="rbf_sigma")
    p.add_argument("--optimize", action="store_true", dest="optimize")
    p.add_argument("--out", required=True, dest="out_path")
    p.add_argument("--json", action="store_true", dest="json_mirror")

    p = sub.add_parser("crossval", help="LOOCV rms comparison across methods")
    p.add_argument("--stations", required=True, dest="stations_path")
    p.add_argument("--obs", required=True, dest="obs_path")
    p.add_argument("--method", default="all", dest="method")
    p.add_argument("--out", required=True, dest="out_path")
    p.add_argument("--json", action="store_true", dest="json_mirror")

    p = sub.add_parser("summary", help="per-(variable, timestamp) summary statistics")
    p.add_argument("--obs", required=True, dest="obs_path")
    p.add_argument("--out", required=True, dest="out_path")
    p.add_argument("--json", action="store_true", dest="json_mirror")

    return parser


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {
        name: getattr(ns, name)
        for name in RunConfig.__dataclass_fields__
        if hasattr(ns, name)
    }
    return RunConfig(**fields)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are user errors here.
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    config = _config_from_args(ns)
    try:
        config.validate()
        return _DISPATCH[config.subcommand](config)
    except InputError as exc:
        print(f"roadnet: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"roadnet: numerical error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"roadnet: internal error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
