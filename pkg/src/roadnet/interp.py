"""Spatial interpolation methods: inverse distance weighting, completely
regularized spline RBF, and ordinary kriging with first-order trend
removal, plus the empirical variogram and Gaussian model fitting that
kriging depends on.

All radial computations use great-circle km distances; planar projected
km feed only the trend surface.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import nnls

from roadnet.errors import InputError, NumericalError
from roadnet.geo import GeoCoord, haversine_km, project
from roadnet.kernels import crs_basis_array, haversine_matrix, haversine_to_point

# Two locations closer than this (km) are treated as coincident.
COINCIDENCE_KM = 1e-9


@dataclass(frozen=True)
class Sample:
    """A located scalar reading used as interpolation input."""

    station_id: str
    location: GeoCoord
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise InputError(f"sample {self.station_id!r} has non-finite value")


@dataclass(frozen=True)
class NeighborPolicy:
    """Bounds on how many nearby samples feed each prediction."""

    min_neighbors: int = 3
    max_neighbors: int = 6

    def __post_init__(self):
        if not (1 <= self.min_neighbors <= self.max_neighbors):
            raise InputError(
                f"need 1 <= min_neighbors <= max_neighbors, got "
                f"({self.min_neighbors}, {self.max_neighbors})"
            )


class ModelKind(enum.Enum):
    GAUSSIAN = "Gaussian"


@dataclass(frozen=True)
class VariogramModel:
    """Gaussian semivariogram with nugget, partial sill, and fixed range."""

    nugget: float = 0.0
    partial_sill: float = 1.0
    range_km: float = 100.0
    model: ModelKind = ModelKind.GAUSSIAN

    def __post_init__(self):
        if not (math.isfinite(self.nugget) and self.nugget >= 0):
            raise InputError(f"nugget must be finite and >= 0, got {self.nugget}")
        if not (math.isfinite(self.partial_sill) and self.partial_sill >= 0):
            raise InputError(f"partial sill must be finite and >= 0, got {self.partial_sill}")
        if not (math.isfinite(self.range_km) and self.range_km > 0):
            raise InputError(f"range must be positive, got {self.range_km}")


@dataclass(frozen=True)
class VariogramBin:
    """One lag bin of an empirical variogram; gamma_hat is NaN when the
    bin holds no pairs."""

    lag_lo_km: float
    lag_hi_km: float
    mean_h_km: float
    gamma_hat: float
    pair_count: int


@dataclass(frozen=True)
class EmpiricalVariogram:
    lag_size_km: float
    n_lags: int
    bins: tuple[VariogramBin, ...]


@dataclass(frozen=True)
class MethodParams:
    """Per-method tuning knobs; kriging settings ride in ``variogram``."""

    idw_power: float = 2.0
    rbf_sigma: float = 1.0
    variogram: VariogramModel = field(default_factory=VariogramModel)
    neighbor_policy: NeighborPolicy = field(default_factory=NeighborPolicy)

    def __post_init__(self):
        if not (math.isfinite(self.idw_power) and self.idw_power > 0):
            raise InputError(f"idw_power must be positive, got {self.idw_power}")
        if not (math.isfinite(self.rbf_sigma) and self.rbf_sigma > 0):
            raise InputError(f"rbf_sigma must be positive, got {self.rbf_sigma}")


@dataclass(frozen=True)
class TrendSurface:
    """First-order planar trend z = b0 + b1*x + b2*y over a local
    projection anchored at ``ref``."""

    beta0: float
    beta1: float
    beta2: float
    ref: GeoCoord

    def value_at(self, coord: GeoCoord) -> float:
        pt = project([coord], self.ref)[0]
        return self.beta0 + self.beta1 * pt.x + self.beta2 * pt.y


def _neighbor_distances(samples, target: GeoCoord) -> np.ndarray:
    lat = np.array([s.location.lat for s in samples], dtype=np.float64)
    lon = np.array([s.location.lon for s in samples], dtype=np.float64)
    return haversine_to_point(target.lat, target.lon, lat, lon)


def select_neighbors(samples, target: GeoCoord, policy: NeighborPolicy):
    """The ``policy.max_neighbors`` nearest samples by great-circle
    distance, ascending, distance ties broken by station id ascending.

    Returns (neighbors, distances_km).
    """
    samples = list(samples)
    if len(samples) < policy.min_neighbors:
        raise InputError(
            f"need at least {policy.min_neighbors} samples, got {len(samples)}"
        )
    d = _neighbor_distances(samples, target)
    order = sorted(range(len(samples)), key=lambda i: (d[i], samples[i].station_id))
    keep = order[: policy.max_neighbors]
    return [samples[i] for i in keep], d[keep]


def idw_predict(samples, target: GeoCoord, p: float, policy: NeighborPolicy) -> float:
    """Inverse-distance-weighted prediction with weights d^(-p) over the
    selected neighbors; exact at coincident sample locations."""
    if not (math.isfinite(p) and p > 0):
        raise InputError(f"power must be positive, got {p}")
    neighbors, d = select_neighbors(samples, target, policy)
    for s, di in zip(neighbors, d):
        if di < COINCIDENCE_KM:
            return s.value
    w = d ** (-p)
    z = np.array([s.value for s in neighbors])
    return float(np.sum(w * z) / np.sum(w))


def crs_basis(r, sigma: float):
    """Completely regularized spline basis.

    phi(0) = 0 and, for r > 0 with x = (sigma*r/2)^2,
    phi(r) = -(gamma_E + ln x + E1(x)).  Continuous at zero: the bracket
    behaves like -(x - x^2/4) for small x, so phi tends to 0 from below.
    """
    if not (math.isfinite(sigma) and sigma > 0):
        raise InputError(f"sigma must be positive, got {sigma}")
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0):
        raise InputError("r must be >= 0")
    out = crs_basis_array(np.atleast_1d(arr), float(sigma))
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def _pairwise_km(samples) -> np.ndarray:
    lat = np.array([s.location.lat for s in samples], dtype=np.float64)
    lon = np.array([s.location.lon for s in samples], dtype=np.float64)
    return haversine_matrix(lat, lon)


def _check_distinct(samples, d: np.ndarray, context: str):
    k = d.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            if d[i, j] < COINCIDENCE_KM:
                raise NumericalError(
                    f"{context}: samples {samples[i].station_id!r} and "
                    f"{samples[j].station_id!r} are coincident"
                )


def rbf_predict(samples, target: GeoCoord, sigma: float, policy: NeighborPolicy) -> float:
    """Completely-regularized-spline prediction with a bias term.

    Solves the augmented system [Phi 1; 1^T 0][w; b] = [z; 0] over the
    selected neighbors, then evaluates sum_i w_i*phi(d_i) + b at the
    target.  Exact at sample locations.
    """
    neighbors, d0 = select_neighbors(samples, target, policy)
    k = len(neighbors)
    dmat = _pairwise_km(neighbors)
    _check_distinct(neighbors, dmat, "rbf_predict")
    a = np.zeros((k + 1, k + 1))
    a[:k, :k] = crs_basis(dmat, sigma)
    a[:k, k] = 1.0
    a[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[:k] = [s.value for s in neighbors]
    try:
        sol = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"rbf_predict: singular system ({exc})") from exc
    return float(np.dot(sol[:k], crs_basis(d0, sigma)) + sol[k])


def empirical_variogram(samples, lag_size_km: float = 10.0, n_lags: int = 20) -> EmpiricalVariogram:
    """Binned semivariance estimates.

    Bin k covers (k*lag, (k+1)*lag]; within each bin
    gamma_hat = sum (z_i - z_j)^2 / (2N) over the N unordered pairs whose
    separation falls in the bin.  Pairs beyond lag_size*n_lags km are
    ignored.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise InputError(f"empirical_variogram needs >= 2 samples, got {len(samples)}")
    if lag_size_km <= 0 or n_lags < 1:
        raise InputError("lag_size_km must be > 0 and n_lags >= 1")
    dmat = _pairwise_km(samples)
    iu = np.triu_indices(len(samples), k=1)
    h = dmat[iu]
    z = np.array([s.value for s in samples])
    sq = (z[iu[0]] - z[iu[1]]) ** 2
    edges = lag_size_km * np.arange(n_lags + 1)
    # (lo, hi] binning: searchsorted left puts h == edge into the lower bin.
    idx = np.searchsorted(edges, h, side="left") - 1
    ok = (idx >= 0) & (idx < n_lags)
    counts = np.bincount(idx[ok], minlength=n_lags)
    sums = np.bincount(idx[ok], weights=sq[ok], minlength=n_lags)
    hsums = np.bincount(idx[ok], weights=h[ok], minlength=n_lags)
    bins = []
    for k in range(n_lags):
        n = int(counts[k])
        bins.append(
            VariogramBin(
                lag_lo_km=float(edges[k]),
                lag_hi_km=float(edges[k + 1]),
                mean_h_km=float(hsums[k] / n) if n else math.nan,
                gamma_hat=float(sums[k] / (2.0 * n)) if n else math.nan,
                pair_count=n,
            )
        )
    return EmpiricalVariogram(lag_size_km=lag_size_km, n_lags=n_lags, bins=tuple(bins))


def gaussian_variogram(h, model: VariogramModel):
    """Gaussian semivariogram, effective-range convention:
    gamma(h) = c0 + c*(1 - exp(-3 h^2 / a^2)) for h > 0, gamma(0) = 0,
    so gamma reaches ~95% of the sill at h = a."""
    arr = np.asarray(h, dtype=np.float64)
    if np.any(arr < 0):
        raise InputError("h must be >= 0")
    g = model.nugget + model.partial_sill * (
        1.0 - np.exp(-3.0 * arr**2 / model.range_km**2)
    )
    g = np.where(arr == 0.0, 0.0, g)
    return float(g) if arr.ndim == 0 else g


def fit_variogram(emp: EmpiricalVariogram, range_km: float = 100.0) -> VariogramModel:
    """Nugget and partial sill by pair-count-weighted least squares with
    the range held fixed; both clamped >= 0 (non-negative least squares)."""
    occupied = [b for b in emp.bins if b.pair_count > 0]
    if len(occupied) < 2:
        raise InputError(
            f"fit_variogram needs >= 2 occupied bins, got {len(occupied)}"
        )
    hs = np.array([b.mean_h_km for b in occupied])
    gammas = np.array([b.gamma_hat for b in occupied])
    weights = np.sqrt(np.array([b.pair_count for b in occupied], dtype=np.float64))
    shape = 1.0 - np.exp(-3.0 * hs**2 / range_km**2)
    a = np.column_stack([weights, weights * shape])
    coef, _ = nnls(a, weights * gammas)
    return VariogramModel(nugget=float(coef[0]), partial_sill=float(coef[1]), range_km=range_km)


def detrend_first_order(samples):
    """Ordinary least squares of value on projected (x, y) km.

    Returns (TrendSurface, residual samples).  The projection is anchored
    at the samples' mean latitude/longitude.
    """
    samples = list(samples)
    if len(samples) < 3:
        raise InputError(f"detrend_first_order needs >= 3 samples, got {len(samples)}")
    ref = GeoCoord(
        float(np.mean([s.location.lat for s in samples])),
        float(np.mean([s.location.lon for s in samples])),
    )
    pts = project([s.location for s in samples], ref)
    x = np.array([[1.0, p.x, p.y] for p in pts])
    z = np.array([s.value for s in samples])
    beta, _, rank, _ = np.linalg.lstsq(x, z, rcond=None)
    if rank < 3:
        raise NumericalError("detrend_first_order: sample locations are collinear")
    resid = z - x @ beta
    trend = TrendSurface(float(beta[0]), float(beta[1]), float(beta[2]), ref)
    residuals = [replace(s, value=float(r)) for s, r in zip(samples, resid)]
    return trend, residuals


def ok_weights(samples, target: GeoCoord, model: VariogramModel, policy: NeighborPolicy):
    """Ordinary kriging weights over the selected neighbors.

    Solves [Gamma 1; 1^T 0][lambda; mu] = [gamma(d_i, target); 1] and
    returns (neighbors, lambda) with sum(lambda) = 1 within 1e-8.  An
    all-zero model degenerates to the pure-nugget limit: equal weights.
    """
    neighbors, d0 = select_neighbors(samples, target, policy)
    k = len(neighbors)
    sill = model.nugget + model.partial_sill
    if sill == 0.0:
        return neighbors, np.full(k, 1.0 / k)
    dmat = _pairwise_km(neighbors)
    if model.nugget == 0.0:
        _check_distinct(neighbors, dmat, "ok_weights")
    # Kriging weights are invariant to scaling gamma; normalizing by the
    # sill keeps the augmented system well conditioned for tiny sills.
    scaled = VariogramModel(
        nugget=model.nugget / sill,
        partial_sill=model.partial_sill / sill,
        range_km=model.range_km,
    )
    a = np.zeros((k + 1, k + 1))
    a[:k, :k] = gaussian_variogram(dmat, scaled)
    a[:k, k] = 1.0
    a[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[:k] = gaussian_variogram(d0, scaled)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"ok_weights: singular kriging matrix ({exc})") from exc
    lam = sol[:k]
    if abs(lam.sum() - 1.0) > 1e-8:
        raise NumericalError(
            f"ok_weights: weights sum to {lam.sum()!r}, expected 1 within 1e-8"
        )
    return neighbors, lam


def ok_predict(samples, target: GeoCoord, model: VariogramModel, policy: NeighborPolicy) -> float:
    """Ordinary kriging prediction: sum lambda_i z_i over the selected
    neighbors with the weights from :func:`ok_weights`."""
    neighbors, lam = ok_weights(samples, target, model, policy)
    return float(np.dot(lam, [s.value for s in neighbors]))


def ok_full_predict(samples, target: GeoCoord, params: MethodParams) -> float:
    """The full kriging pipeline: first-order trend removal, empirical
    variogram of the residuals, Gaussian model fit with the configured
    range, ordinary kriging of the residuals, trend added back."""
    trend, residuals = detrend_first_order(samples)
    emp = empirical_variogram(residuals)
    fitted = fit_variogram(emp, range_km=params.variogram.range_km)
    return trend.value_at(target) + ok_predict(
        residuals, target, fitted, params.neighbor_policy
    )
