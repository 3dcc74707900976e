"""Loading and validation of station registries, weather observations, and
region polygons.

File formats:

- stations CSV, header exactly ``station_id,network,name,lat,lon``
- observations CSV, header exactly ``station_id,timestamp,variable,value``
- regions: GeoJSON FeatureCollection of Polygon/MultiPolygon features with
  a ``name`` property (positions in lon/lat order)

Parsing is strict: the first malformed row aborts the load with the line
number, because silently dropped rows would corrupt the downstream
nearest-neighbor and coverage statistics.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass, field
from datetime import datetime

from roadnet.errors import InputError
from roadnet.geo import GeoCoord, RegionPolygon, haversine_km


class Network(enum.Enum):
    RWIS = "RWIS"
    MTO_CAMERA = "MTO_CAMERA"
    ENV_CANADA = "ENV_CANADA"


class Variable(enum.Enum):
    AIR_TEMP_C = "air_temp_C"
    WIND_SPEED_KMH = "wind_speed_kmh"
    PRESSURE_KPA = "pressure_kPa"


STATION_HEADER = ["station_id", "network", "name", "lat", "lon"]
OBSERVATION_HEADER = ["station_id", "timestamp", "variable", "value"]


@dataclass(frozen=True)
class Station:
    """A geolocated observing site tagged with its source network."""

    station_id: str
    network: Network
    name: str
    location: GeoCoord


@dataclass
class ObservationSet:
    """Values of one weather variable at many stations at one timestamp."""

    variable: Variable
    timestamp: str
    readings: dict[str, float] = field(default_factory=dict)


def _check_value(variable: Variable, value: float, where: str) -> None:
    if not math.isfinite(value):
        raise InputError(f"{where}: value must be finite, got {value}")
    if variable is Variable.PRESSURE_KPA and value <= 0:
        raise InputError(f"{where}: pressure must be positive, got {value}")
    if variable is Variable.WIND_SPEED_KMH and value < 0:
        raise InputError(f"{where}: wind speed must be non-negative, got {value}")


def load_stations(path) -> list[Station]:
    """Parse a station registry CSV; rejects duplicates and bad coordinates."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open stations file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file, expected header {STATION_HEADER}")
        if header != STATION_HEADER:
            raise InputError(f"{path}: bad header {header}, expected {STATION_HEADER}")
        stations = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            where = f"{path}:{lineno}"
            if len(row) != 5:
                raise InputError(f"{where}: expected 5 fields, got {len(row)}")
            station_id, network_txt, name, lat_txt, lon_txt = row
            if not station_id:
                raise InputError(f"{where}: empty station_id")
            if station_id in seen:
                raise InputError(f"{where}: duplicate station_id {station_id!r}")
            try:
                network = Network(network_txt)
            except ValueError:
                valid = ", ".join(n.value for n in Network)
                raise InputError(f"{where}: unknown network {network_txt!r} (valid: {valid})")
            try:
                lat = float(lat_txt)
                lon = float(lon_txt)
            except ValueError:
                raise InputError(f"{where}: lat/lon must be numeric, got {lat_txt!r}, {lon_txt!r}")
            try:
                location = GeoCoord(lat, lon)
            except InputError as exc:
                raise InputError(f"{where}: {exc}") from exc
            seen.add(station_id)
            stations.append(Station(station_id, network, name, location))
    return stations


def _check_timestamp(text: str, where: str) -> None:
    try:
        datetime.fromisoformat(text)
    except ValueError as exc:
        raise InputError(f"{where}: unparseable ISO-8601 timestamp {text!r}") from exc


def load_observations(path, stations=None) -> list[ObservationSet]:
    """Parse observations and group them by (variable, timestamp).

    When ``stations`` is given, every row must reference a loaded station;
    pass ``None`` to skip that check (e.g. for summary statistics where no
    registry is involved).
    """
    known = None if stations is None else {s.station_id for s in stations}
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open observations file {path}: {exc}") from exc
    groups: dict[tuple[Variable, str], ObservationSet] = {}
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file, expected header {OBSERVATION_HEADER}")
        if header != OBSERVATION_HEADER:
            raise InputError(f"{path}: bad header {header}, expected {OBSERVATION_HEADER}")
        for lineno, row in enumerate(reader, start=2):
            where = f"{path}:{lineno}"
            if len(row) != 4:
                raise InputError(f"{where}: expected 4 fields, got {len(row)}")
            station_id, timestamp, variable_txt, value_txt = row
            if known is not None and station_id not in known:
                raise InputError(f"{where}: unknown station_id {station_id!r}")
            _check_timestamp(timestamp, where)
            try:
                variable = Variable(variable_txt)
            except ValueError:
                valid = ", ".join(v.value for v in Variable)
                raise InputError(f"{where}: unknown variable {variable_txt!r} (valid: {valid})")
            try:
                value = float(value_txt)
            except ValueError:
                raise InputError(f"{where}: value must be numeric, got {value_txt!r}")
            _check_value(variable, value, where)
            key = (variable, timestamp)
            obs = groups.get(key)
            if obs is None:
                obs = groups[key] = ObservationSet(variable, timestamp)
            if station_id in obs.readings:
                raise InputError(
                    f"{where}: duplicate reading for ({station_id}, "
                    f"{variable.value}, {timestamp})"
                )
            obs.readings[station_id] = value
    return list(groups.values())


def load_regions(path) -> list[RegionPolygon]:
    """Parse a GeoJSON FeatureCollection into region polygons.

    MultiPolygon features are split into one region per part, all sharing
    the feature's name.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot open regions file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    if doc.get("type") != "FeatureCollection":
        raise InputError(f"{path}: expected a FeatureCollection, got {doc.get('type')!r}")
    regions = []
    for idx, feature in enumerate(doc.get("features", [])):
        where = f"{path}: feature {idx}"
        name = (feature.get("properties") or {}).get("name")
        if not name:
            raise InputError(f"{where}: missing 'name' property")
        geometry = feature.get("geometry") or {}
        gtype = geometry.get("type")
        coords = geometry.get("coordinates")
        if gtype == "Polygon":
            parts = [coords]
        elif gtype == "MultiPolygon":
            parts = coords
        else:
            raise InputError(f"{where}: geometry must be Polygon or MultiPolygon, got {gtype!r}")
        for part in parts:
            try:
                rings = tuple(
                    tuple(GeoCoord(lat=pos[1], lon=pos[0]) for pos in ring)
                    for ring in part
                )
                regions.append(RegionPolygon(name=name, rings=rings))
            except (InputError, TypeError, IndexError) as exc:
                raise InputError(f"{where}: bad polygon coordinates: {exc}") from exc
    return regions


def merge_networks(registries, dedupe_radius_km: float | None = None) -> list[Station]:
    """Union of several registries; the combined count is the plain sum.

    Station ids colliding across registries are disambiguated by prefixing
    the incoming station's network name.  Co-located stations are kept
    unless ``dedupe_radius_km`` is set, in which case later stations within
    that great-circle radius of an already-kept one are dropped.
    """
    merged: list[Station] = []
    seen: dict[str, Station] = {}
    for registry in registries:
        for station in registry:
            if dedupe_radius_km is not None and any(
                haversine_km(station.location, kept.location) <= dedupe_radius_km
                for kept in merged
            ):
                continue
            station_id = station.station_id
            if station_id in seen:
                station_id = f"{station.network.value}:{station.station_id}"
                if station_id in seen:
                    raise InputError(
                        f"station id {station.station_id!r} collides even after "
                        f"prefixing with network {station.network.value!r}"
                    )
                station = Station(station_id, station.network, station.name, station.location)
            seen[station_id] = station
            merged.append(station)
    return merged


def write_stations(path, stations) -> None:
    """Serialize stations in the canonical CSV form (round-trips exactly)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STATION_HEADER)
        for s in stations:
            writer.writerow(
                [
                    s.station_id,
                    s.network.value,
                    s.name,
                    repr(float(s.location.lat)),
                    repr(float(s.location.lon)),
                ]
            )


def write_observations(path, obs_sets) -> None:
    """Serialize observation sets in the canonical CSV form."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(OBSERVATION_HEADER)
        for obs in obs_sets:
            for station_id, value in obs.readings.items():
                writer.writerow(
                    [station_id, obs.timestamp, obs.variable.value, repr(float(value))]
                )
