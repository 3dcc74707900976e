"""Spatial point-pattern statistics: nearest-neighbor distances, Ripley's
K and L functions, uniform-randomness simulation envelopes, and region
coverage reports.

The K estimator deliberately applies no edge correction: observed patterns
are only ever compared against envelopes computed by the identical
estimator in the identical window, so the boundary bias cancels in the
comparison.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from roadnet.errors import InputError, NumericalError
from roadnet.geo import _ray_cast
from roadnet.kernels import haversine_matrix, pair_counts_within


class WindowKind(enum.Enum):
    BOUNDING_BOX = "BoundingBox"
    POLYGON = "Polygon"


@dataclass(frozen=True)
class StudyWindow:
    """Planar analysis window (km): an axis-aligned box or a polygon."""

    kind: WindowKind
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    vertices: tuple = ()
    area: float = 0.0

    @staticmethod
    def bounding_box(xmin, xmax, ymin, ymax) -> "StudyWindow":
        if not (xmax > xmin and ymax > ymin):
            raise InputError("bounding box must have positive width and height")
        return StudyWindow(
            WindowKind.BOUNDING_BOX, xmin, xmax, ymin, ymax,
            area=(xmax - xmin) * (ymax - ymin),
        )

    @staticmethod
    def polygon(vertices) -> "StudyWindow":
        verts = [(float(x), float(y)) for x, y in vertices]
        if verts[0] == verts[-1]:
            verts = verts[:-1]
        if len(verts) < 3:
            raise InputError("polygon window needs >= 3 vertices")
        closed = verts + [verts[0]]
        area = 0.5 * abs(
            sum(x1 * y2 - x2 * y1 for (x1, y1), (x2, y2) in zip(closed[:-1], closed[1:]))
        )
        if area <= 0:
            raise InputError("polygon window must have positive area")
        xs = [v[0] for v in verts]
        ys = [v[1] for v in verts]
        return StudyWindow(
            WindowKind.POLYGON, min(xs), max(xs), min(ys), max(ys),
            vertices=tuple(closed), area=area,
        )

    @staticmethod
    def from_points(points, expand: float = 0.05) -> "StudyWindow":
        """Bounding box of the points, each side expanded by ``expand``."""
        xs, ys = _planar_arrays(points)
        if xs.size == 0:
            raise InputError("cannot build a window from zero points")
        dx = (xs.max() - xs.min()) * expand / 2.0
        dy = (ys.max() - ys.min()) * expand / 2.0
        return StudyWindow.bounding_box(xs.min() - dx, xs.max() + dx, ys.min() - dy, ys.max() + dy)

    @property
    def shorter_side(self) -> float:
        return min(self.xmax - self.xmin, self.ymax - self.ymin)

    def contains(self, x: float, y: float) -> bool:
        if not (self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax):
            return False
        if self.kind is WindowKind.BOUNDING_BOX:
            return True
        return _ray_cast(x, y, [self.vertices])

    def sample_uniform(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Draw n points uniformly inside the window (rejection sampling
        from the bounding box for polygon windows)."""
        if self.kind is WindowKind.BOUNDING_BOX:
            u = rng.random((n, 2))
            return (
                self.xmin + u[:, 0] * (self.xmax - self.xmin),
                self.ymin + u[:, 1] * (self.ymax - self.ymin),
            )
        xs = np.empty(n)
        ys = np.empty(n)
        filled = 0
        while filled < n:
            u = rng.random((max(n - filled, 16), 2))
            cx = self.xmin + u[:, 0] * (self.xmax - self.xmin)
            cy = self.ymin + u[:, 1] * (self.ymax - self.ymin)
            for x, y in zip(cx, cy):
                if filled < n and self.contains(x, y):
                    xs[filled] = x
                    ys[filled] = y
                    filled += 1
        return xs, ys


class Verdict(enum.Enum):
    CLUSTERED = "Clustered"
    RANDOM = "Random"
    DISPERSED = "Dispersed"


@dataclass
class LFunctionResult:
    """Observed L(d) per distance band plus its simulation envelope."""

    distances: np.ndarray
    l_observed: np.ndarray
    envelope_low: np.ndarray
    envelope_high: np.ndarray
    n_simulations: int
    seed: int

    def __post_init__(self):
        n = len(self.distances)
        if not (len(self.l_observed) == len(self.envelope_low) == len(self.envelope_high) == n):
            raise InputError("L-function arrays must have equal length")
        if np.any(np.diff(self.distances) <= 0):
            raise InputError("distances must be strictly increasing")
        if np.any(self.envelope_low > self.envelope_high):
            raise InputError("envelope_low must not exceed envelope_high")


@dataclass
class CoverageRow:
    label: str
    count_total: int
    mean_nn_km: float
    region_counts: dict[str, int] = field(default_factory=dict)
    count_in_any_region: int = 0


@dataclass
class CoverageReport:
    region_names: list[str]
    rows: list[CoverageRow]


def _planar_arrays(points):
    pts = list(points)
    xs = np.array([p.x for p in pts], dtype=np.float64)
    ys = np.array([p.y for p in pts], dtype=np.float64)
    return xs, ys


def _coords_of(stations_or_coords):
    out = []
    for s in stations_or_coords:
        out.append(s.location if hasattr(s, "location") else s)
    return out


def mean_nn_distance(stations) -> float:
    """Mean over stations of the great-circle distance to the nearest
    other station, in km."""
    coords = _coords_of(stations)
    n = len(coords)
    if n < 2:
        raise InputError(f"mean_nn_distance needs >= 2 stations, got {n}")
    lat = np.array([c.lat for c in coords])
    lon = np.array([c.lon for c in coords])
    d = haversine_matrix(lat, lon)
    np.fill_diagonal(d, np.inf)
    return float(d.min(axis=1).mean())


def ripley_k(points, window: StudyWindow, distances) -> np.ndarray:
    """Uncorrected Ripley K: K(d) = A / (n (n-1)) * #{ordered pairs with
    d_ij <= d}."""
    xs, ys = _planar_arrays(points)
    n = xs.size
    if n < 2:
        raise InputError(f"ripley_k needs >= 2 points, got {n}")
    d = np.asarray(distances, dtype=np.float64)
    if d.size == 0 or np.any(d <= 0) or np.any(np.diff(d) <= 0):
        raise InputError("distances must be positive and strictly increasing")
    cap = window.shorter_side / 2.0
    if d[-1] > cap:
        raise InputError(
            f"max distance {d[-1]:.6g} km exceeds half the window's shorter side ({cap:.6g} km)"
        )
    for x, y in zip(xs, ys):
        if not window.contains(x, y):
            raise InputError(f"point ({x:.6g}, {y:.6g}) lies outside the study window")
    counts = pair_counts_within(xs, ys, d)
    return window.area * 2.0 * counts / (n * (n - 1.0))


def ripley_l(k_values) -> np.ndarray:
    """L(d) = sqrt(K(d) / pi); the identity line under uniform randomness."""
    k = np.asarray(k_values, dtype=np.float64)
    if np.any(k < 0):
        raise NumericalError("negative K value passed to ripley_l")
    return np.sqrt(k / math.pi)


def _one_simulation_l(n_points, window, distances, seed, sim_index):
    rng = np.random.default_rng([seed, sim_index])
    xs, ys = window.sample_uniform(n_points, rng)
    counts = pair_counts_within(xs, ys, np.asarray(distances, dtype=np.float64))
    k = window.area * 2.0 * counts / (n_points * (n_points - 1.0))
    return ripley_l(k)


def csr_envelope(
    n_points: int,
    window: StudyWindow,
    distances,
    n_sims: int = 9,
    seed: int = 42,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise min/max of L over ``n_sims`` uniform-randomness
    simulations.

    Each simulation draws from its own substream derived from
    ``(seed, index)``, so results are identical regardless of execution
    order or thread count.
    """
    if n_sims < 1:
        raise InputError(f"n_sims must be >= 1, got {n_sims}")
    if n_points < 2:
        raise InputError(f"n_points must be >= 2, got {n_points}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            curves = list(
                pool.map(
                    lambda i: _one_simulation_l(n_points, window, distances, seed, i),
                    range(n_sims),
                )
            )
    else:
        curves = [
            _one_simulation_l(n_points, window, distances, seed, i) for i in range(n_sims)
        ]
    stack = np.vstack(curves)
    return stack.min(axis=0), stack.max(axis=0)


def l_function_analysis(
    points,
    window: StudyWindow,
    distances,
    n_sims: int = 9,
    seed: int = 42,
    workers: int = 1,
) -> LFunctionResult:
    """Observed L plus its simulation envelope, bundled for reporting."""
    l_obs = ripley_l(ripley_k(points, window, distances))
    low, high = csr_envelope(len(list(points)), window, distances, n_sims, seed, workers)
    return LFunctionResult(
        distances=np.asarray(distances, dtype=np.float64),
        l_observed=l_obs,
        envelope_low=low,
        envelope_high=high,
        n_simulations=n_sims,
        seed=seed,
    )


def cluster_verdict(result: LFunctionResult) -> list[Verdict]:
    """Per-band comparison of observed L against the envelope."""
    verdicts = []
    for obs, low, high in zip(result.l_observed, result.envelope_low, result.envelope_high):
        if obs > high:
            verdicts.append(Verdict.CLUSTERED)
        elif obs < low:
            verdicts.append(Verdict.DISPERSED)
        else:
            verdicts.append(Verdict.RANDOM)
    return verdicts


def default_distance_grid(window: StudyWindow, n_bands: int = 40) -> np.ndarray:
    """Evenly spaced bands from 0 (exclusive) to a quarter of the window's
    shorter side."""
    if n_bands < 1:
        raise InputError(f"n_bands must be >= 1, got {n_bands}")
    return np.linspace(0.0, window.shorter_side / 4.0, n_bands + 1)[1:]


def _coverage_row(label, stations, regions) -> CoverageRow:
    from roadnet.geo import point_in_polygon

    coords = _coords_of(stations)
    # Multi-part regions share a name; a station counts once per name.
    parts_by_name: dict[str, list] = {}
    for region in regions:
        parts_by_name.setdefault(region.name, []).append(region)
    membership = {
        name: [any(point_in_polygon(c, part) for part in parts) for c in coords]
        for name, parts in parts_by_name.items()
    }
    in_any = sum(
        1 for i in range(len(coords)) if any(m[i] for m in membership.values())
    )
    return CoverageRow(
        label=label,
        count_total=len(coords),
        mean_nn_km=mean_nn_distance(stations) if len(coords) >= 2 else math.nan,
        region_counts={name: sum(m) for name, m in membership.items()},
        count_in_any_region=in_any,
    )


def coverage_report(registries, regions, unions=None) -> CoverageReport:
    """Coverage statistics per registry plus union rows.

    ``registries`` maps label -> list of stations.  ``unions`` is a list of
    label tuples to combine; by default the union of all registries is
    reported when more than one is given.
    """
    from roadnet.ingest import merge_networks

    labels = list(registries)
    if not labels:
        raise InputError("coverage_report needs at least one registry")
    if unions is None:
        unions = [tuple(labels)] if len(labels) > 1 else []
    region_names = []
    for region in regions:
        if region.name not in region_names:
            region_names.append(region.name)
    rows = [_coverage_row(label, registries[label], regions) for label in labels]
    for combo in unions:
        merged = merge_networks([registries[label] for label in combo])
        rows.append(_coverage_row("+".join(combo), merged, regions))
    return CoverageReport(region_names=region_names, rows=rows)
