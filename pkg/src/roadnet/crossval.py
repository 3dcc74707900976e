"""Leave-one-out cross-validation, RMS scoring, cross-validated parameter
optimization, and per-variable summary statistics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from roadnet.errors import InputError
from roadnet.ingest import ObservationSet, Station, Variable
from roadnet.interp import (
    MethodParams,
    Sample,
    idw_predict,
    ok_full_predict,
    rbf_predict,
)

# Default cross-validated search intervals: IDW power swept linearly,
# RBF kernel parameter swept in log space.
IDW_POWER_SEARCH = (0.5, 4.0)
RBF_SIGMA_SEARCH = (1e-3, 10.0)

GRID_CANDIDATES = 15
GOLDEN_ITERATIONS = 20
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Method(enum.Enum):
    IDW = "idw"
    RBF = "rbf"
    OK = "ok"


@dataclass(frozen=True)
class CrossValRow:
    station_id: str
    observed: float
    predicted: float
    error: float  # predicted - observed


@dataclass(frozen=True)
class CrossValReport:
    method: Method
    variable: Variable
    timestamp: str
    rows: tuple[CrossValRow, ...]
    rms: float
    params: MethodParams


@dataclass(frozen=True)
class SummaryStats:
    variable: Variable
    timestamp: str
    mean: float
    std_dev: float
    cv_percent: float | None  # None encodes UNDEFINED (non-positive mean)


def rms(errors) -> float:
    """Root mean square: sqrt(mean(e^2))."""
    arr = np.asarray(list(errors), dtype=np.float64)
    if arr.size == 0:
        raise InputError("rms of an empty error list is undefined")
    return float(np.sqrt(np.mean(arr**2)))


def _station_index(stations) -> dict[str, Station]:
    if isinstance(stations, dict):
        return stations
    return {s.station_id: s for s in stations}


def build_samples(obs: ObservationSet, stations) -> list[Sample]:
    """Readings joined to station coordinates, ordered by station id."""
    index = _station_index(stations)
    missing = sorted(set(obs.readings) - set(index))
    if missing:
        raise InputError(f"observations reference unknown stations: {missing}")
    return [
        Sample(sid, index[sid].location, obs.readings[sid])
        for sid in sorted(obs.readings)
    ]


def predict(method: Method, samples, target, params: MethodParams) -> float:
    """Dispatch a single prediction to the requested method."""
    if method is Method.IDW:
        return idw_predict(samples, target, params.idw_power, params.neighbor_policy)
    if method is Method.RBF:
        return rbf_predict(samples, target, params.rbf_sigma, params.neighbor_policy)
    return ok_full_predict(samples, target, params)


def loocv(method: Method, obs: ObservationSet, stations, params: MethodParams) -> CrossValReport:
    """Leave-one-out cross-validation: each station is predicted from all
    other readings; errors are predicted - observed."""
    samples = build_samples(obs, stations)
    needed = params.neighbor_policy.min_neighbors + 1
    if len(samples) < needed:
        raise InputError(
            f"loocv needs >= {needed} readings, got {len(samples)}"
        )
    rows = []
    for i, held_out in enumerate(samples):
        rest = samples[:i] + samples[i + 1 :]
        pred = predict(method, rest, held_out.location, params)
        rows.append(
            CrossValRow(
                station_id=held_out.station_id,
                observed=held_out.value,
                predicted=pred,
                error=pred - held_out.value,
            )
        )
    return CrossValReport(
        method=method,
        variable=obs.variable,
        timestamp=obs.timestamp,
        rows=tuple(rows),
        rms=rms([r.error for r in rows]),
        params=params,
    )


def _with_param(method: Method, params: MethodParams, value: float) -> MethodParams:
    if method is Method.IDW:
        return replace(params, idw_power=value)
    return replace(params, rbf_sigma=value)


def optimize_parameter(
    method: Method,
    obs: ObservationSet,
    stations,
    search: tuple[float, float],
    params: MethodParams | None = None,
) -> MethodParams:
    """Cross-validated 1-D parameter search.

    15 grid candidates (linear for the IDW power, log-spaced for the RBF
    sigma) followed by a 20-iteration golden-section pass around the best
    grid cell; among all evaluated candidates the lowest LOOCV rms wins,
    ties going to the smaller parameter.
    """
    if method is Method.OK:
        raise InputError(
            "ordinary kriging has no tunable parameter; its variogram is fixed"
        )
    lo, hi = search
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
        raise InputError(f"need 0 < lo < hi, got ({lo}, {hi})")
    if params is None:
        params = MethodParams()
    log_scale = method is Method.RBF

    evaluated: dict[float, float] = {}

    def score(value: float) -> float:
        value = float(value)
        if value not in evaluated:
            evaluated[value] = loocv(method, obs, stations, _with_param(method, params, value)).rms
        return evaluated[value]

    if log_scale:
        grid = np.geomspace(lo, hi, GRID_CANDIDATES)
    else:
        grid = np.linspace(lo, hi, GRID_CANDIDATES)
    scores = [score(c) for c in grid]
    best = int(np.argmin(scores))

    # Golden section over the bracket spanning the best cell's neighbors,
    # in log space when the grid is log-spaced.
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, GRID_CANDIDATES - 1)]
    if log_scale:
        a, b = math.log(a), math.log(b)
    to_param = math.exp if log_scale else float
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = score(to_param(x1))
    f2 = score(to_param(x2))
    for _ in range(GOLDEN_ITERATIONS):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = score(to_param(x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = score(to_param(x2))

    winner = min(evaluated.items(), key=lambda kv: (kv[1], kv[0]))[0]
    return _with_param(method, params, winner)


def summary_stats(obs: ObservationSet) -> SummaryStats:
    """Mean, sample standard deviation (n-1), and CV% (only defined for a
    positive mean)."""
    values = np.array(sorted(obs.readings.values()), dtype=np.float64)
    if values.size < 2:
        raise InputError(f"summary_stats needs >= 2 readings, got {values.size}")
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1))
    cv = 100.0 * std / mean if mean > 0 else None
    return SummaryStats(
        variable=obs.variable, timestamp=obs.timestamp, mean=mean, std_dev=std, cv_percent=cv
    )


def compare_methods(
    obs_sets,
    stations,
    methods=(Method.IDW, Method.RBF, Method.OK),
    params: MethodParams | None = None,
    idw_search: tuple[float, float] = IDW_POWER_SEARCH,
    rbf_search: tuple[float, float] = RBF_SIGMA_SEARCH,
) -> list[CrossValReport]:
    """LOOCV rms for every method x observation-set cell.

    IDW and RBF parameters are optimized by cross-validation per cell;
    ordinary kriging runs with its fixed variogram settings.
    """
    obs_sets = list(obs_sets)
    if not obs_sets:
        raise InputError("compare_methods needs at least one observation set")
    if params is None:
        params = MethodParams()
    reports = []
    for method in methods:
        for obs in obs_sets:
            if method is Method.IDW:
                tuned = optimize_parameter(method, obs, stations, idw_search, params)
            elif method is Method.RBF:
                tuned = optimize_parameter(method, obs, stations, rbf_search, params)
            else:
                tuned = params
            reports.append(loocv(method, obs, stations, tuned))
    return reports
