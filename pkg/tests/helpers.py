"""Shared fixture builders and independent oracle implementations.

Anything used to *check* library output is written here from scratch
against the documented contracts, so tests exercise two independent
routes to the same numbers.
"""

from __future__ import annotations

import math

import numpy as np

from roadnet import (
    GeoCoord,
    Network,
    ObservationSet,
    PlanarPoint,
    Sample,
    Station,
    Variable,
    idw_predict,
    ok_full_predict,
    rbf_predict,
)
from roadnet.crossval import Method
from roadnet.kernels import haversine_matrix

# One degree of latitude on the R=6371 km sphere: R * pi / 180.
ONE_DEG_KM = 111.19492664455873


def coord_north(base: GeoCoord, km: float) -> GeoCoord:
    """A coordinate ``km`` kilometers due north of ``base``.

    Meridian distances on the sphere are exact, so the pair's great-circle
    distance equals ``km`` to machine precision.
    """
    return GeoCoord(base.lat + km / ONE_DEG_KM, base.lon)


def make_stations(coords, network: Network = Network.RWIS, prefix: str = "s"):
    return [
        Station(f"{prefix}{i:04d}", network, f"{prefix} site {i}", c)
        for i, c in enumerate(coords)
    ]


def obs_from_values(stations, values, variable=Variable.AIR_TEMP_C, timestamp="2017-02-01T12:00"):
    return ObservationSet(
        variable,
        timestamp,
        {s.station_id: float(v) for s, v in zip(stations, values)},
    )


def samples_from(stations, values):
    return [
        Sample(s.station_id, s.location, float(v)) for s, v in zip(stations, values)
    ]


def random_coords(rng, n, lat_span=(43.0, 44.0), lon_span=(-80.0, -79.0)):
    lat = rng.uniform(*lat_span, n)
    lon = rng.uniform(*lon_span, n)
    return [GeoCoord(float(a), float(b)) for a, b in zip(lat, lon)]


def grid_coords(n, lat_span, lon_span):
    """n distinct coordinates on a row-major rectangular grid."""
    side = math.ceil(math.sqrt(n))
    lats = np.linspace(lat_span[0], lat_span[1], side)
    lons = np.linspace(lon_span[0], lon_span[1], side)
    return [
        GeoCoord(float(lats[i // side]), float(lons[i % side])) for i in range(n)
    ]


def thomas_points(window, n_parents, n_offspring, spread_km, rng):
    """Thomas cluster process inside a window: uniform parents, isotropic
    Gaussian offspring, re-drawn until inside the window."""
    px = window.xmin + rng.random(n_parents) * (window.xmax - window.xmin)
    py = window.ymin + rng.random(n_parents) * (window.ymax - window.ymin)
    pts = []
    for j in range(n_parents):
        made = 0
        while made < n_offspring:
            dx, dy = rng.normal(0.0, spread_km, 2)
            x, y = float(px[j] + dx), float(py[j] + dy)
            if window.contains(x, y):
                pts.append(PlanarPoint(x, y))
                made += 1
    return pts


def gp_field(seed: int, n: int = 80, length_scale_km: float = 60.0):
    """Stations over a ~300 km domain with values drawn from a smooth
    Gaussian-process field (Gaussian covariance)."""
    rng = np.random.default_rng([seed, 5])
    lat = rng.uniform(42.5, 45.2, n)
    lon = rng.uniform(-81.5, -77.8, n)
    stations = [
        Station(f"g{i:03d}", Network.RWIS, f"gp {i}", GeoCoord(float(lat[i]), float(lon[i])))
        for i in range(n)
    ]
    d = haversine_matrix(lat, lon)
    cov = np.exp(-(d**2) / (2.0 * length_scale_km**2)) + 1e-10 * np.eye(n)
    z = np.linalg.cholesky(cov) @ rng.standard_normal(n)
    obs = ObservationSet(
        Variable.AIR_TEMP_C,
        "2017-02-01T12:00",
        {s.station_id: float(v) for s, v in zip(stations, 5.0 + 3.0 * z)},
    )
    return stations, obs


def naive_loocv_errors(method: Method, obs: ObservationSet, stations, params):
    """Brute-force leave-one-out loop written independently of the
    library's loocv: per-station re-prediction through the public
    single-prediction operations, errors as predicted - observed."""
    index = {s.station_id: s for s in stations}
    ids = sorted(obs.readings)
    samples = [Sample(sid, index[sid].location, obs.readings[sid]) for sid in ids]
    errors = []
    for i, held in enumerate(samples):
        rest = samples[:i] + samples[i + 1 :]
        if method is Method.IDW:
            pred = idw_predict(rest, held.location, params.idw_power, params.neighbor_policy)
        elif method is Method.RBF:
            pred = rbf_predict(rest, held.location, params.rbf_sigma, params.neighbor_policy)
        else:
            pred = ok_full_predict(rest, held.location, params)
        errors.append(pred - held.value)
    return ids, np.array(errors)


def two_point_obs(mean: float, std: float, variable=Variable.AIR_TEMP_C, timestamp="2017-02-01T12:00"):
    """Two readings whose sample mean and sample std (n-1) are exactly the
    given values: mean +/- std/sqrt(2)."""
    half = std / math.sqrt(2.0)
    return ObservationSet(
        variable,
        timestamp,
        {"a": mean - half, "b": mean + half},
    )


def region_feature(name: str, ring):
    return {
        "type": "Feature",
        "properties": {"name": name},
        "geometry": {"type": "Polygon", "coordinates": [list(ring)]},
    }


def feature_collection(*features):
    return {"type": "FeatureCollection", "features": list(features)}
