"""NumPy implementations of the numerical kernels.

This is the fallback backend used when the compiled extension
(:mod:`roadnet.kernels._core`) is unavailable.  Both backends implement the
same five functions with identical semantics; see ``kernels/__init__.py``
for the dispatch.
"""

import math

import numpy as np

EARTH_RADIUS_KM = 6371.0

# Euler-Mascheroni constant, used by the regularized-spline basis.
EULER_GAMMA = 0.5772156649015329

_DEG = math.pi / 180.0


def haversine_matrix(lat_deg, lon_deg):
    """Full n-by-n great-circle distance matrix in km.

    Symmetric with an exactly zero diagonal (upper triangle is computed
    and mirrored).
    """
    lat = np.asarray(lat_deg, dtype=np.float64) * _DEG
    lon = np.asarray(lon_deg, dtype=np.float64) * _DEG
    n = lat.shape[0]
    sin_half_dlat = np.sin(0.5 * (lat[None, :] - lat[:, None]))
    sin_half_dlon = np.sin(0.5 * (lon[None, :] - lon[:, None]))
    cos_lat = np.cos(lat)
    a = sin_half_dlat**2 + cos_lat[:, None] * cos_lat[None, :] * sin_half_dlon**2
    a = np.clip(a, 0.0, 1.0)
    d = 2.0 * EARTH_RADIUS_KM * np.arctan2(np.sqrt(a), np.sqrt(1.0 - a))
    # mirror the upper triangle so the result is exactly symmetric
    out = np.triu(d, 1)
    out = out + out.T
    return out


def haversine_to_point(lat0, lon0, lat_deg, lon_deg):
    """Great-circle distances in km from one point to each of n points."""
    lat = np.asarray(lat_deg, dtype=np.float64) * _DEG
    lon = np.asarray(lon_deg, dtype=np.float64) * _DEG
    rlat0 = lat0 * _DEG
    rlon0 = lon0 * _DEG
    sin_half_dlat = np.sin(0.5 * (lat - rlat0))
    sin_half_dlon = np.sin(0.5 * (lon - rlon0))
    a = sin_half_dlat**2 + math.cos(rlat0) * np.cos(lat) * sin_half_dlon**2
    a = np.clip(a, 0.0, 1.0)
    return 2.0 * EARTH_RADIUS_KM * np.arctan2(np.sqrt(a), np.sqrt(1.0 - a))


def pair_counts_within(x, y, thresholds):
    """Count unordered point pairs with euclidean distance <= t.

    Returns an int64 array with one cumulative count per threshold;
    ``thresholds`` must be ascending.  Comparisons are made on squared
    distances so both backends agree bit-for-bit.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    t = np.asarray(thresholds, dtype=np.float64)
    n = x.shape[0]
    iu = np.triu_indices(n, 1)
    dx = x[iu[0]] - x[iu[1]]
    dy = y[iu[0]] - y[iu[1]]
    d2 = np.sort(dx * dx + dy * dy)
    return np.searchsorted(d2, t * t, side="right").astype(np.int64)


def _exp1_series(x):
    """E1 for 0 < x <= 1 via the ascending series."""
    total = 0.0
    term = 1.0
    for k in range(1, 40):
        term *= x / k
        contrib = term / k if k % 2 == 1 else -term / k
        total += contrib
        if abs(contrib) < 1e-18 * max(1.0, abs(total)):
            break
    return -EULER_GAMMA - math.log(x) + total


def _exp1_contfrac(x):
    """E1 for x > 1 via a modified-Lentz continued fraction."""
    b = x + 1.0
    c = 1e308
    d = 1.0 / b
    h = d
    for i in range(1, 200):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x)


def exp1(x):
    """Exponential integral E1(x) for x > 0, absolute error <= 1e-12."""
    if x <= 0.0:
        raise ValueError("exp1 requires x > 0")
    if x <= 1.0:
        return _exp1_series(x)
    return _exp1_contfrac(x)


def _crs_series(xv):
    """-phi for x <= 1: the series x - x^2/4 + x^3/18 - ... term-by-term."""
    total = np.zeros_like(xv)
    term = np.ones_like(xv)
    sign = 1.0
    for k in range(1, 40):
        term = term * xv / k
        total = total + sign * term / k
        sign = -sign
        if np.all(term / k < 1e-18):
            break
    return total


def _exp1_contfrac_vec(xv):
    b = xv + 1.0
    c = np.full_like(xv, 1e308)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 200):
        a = -float(i * i)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return h * np.exp(-xv)


def crs_basis_array(r, sigma):
    """Completely regularized spline basis, elementwise over ``r``.

    phi(0) = 0 and phi(r) = -(gamma + ln x + E1(x)) with x = (sigma*r/2)^2.
    For x <= 1 the three terms are summed via their combined series, which
    avoids the log/E1 cancellation near zero.
    """
    r = np.asarray(r, dtype=np.float64)
    x = (0.5 * sigma * r) ** 2
    out = np.zeros_like(x)
    small = (x > 0.0) & (x <= 1.0)
    large = x > 1.0
    if np.any(small):
        out[small] = -_crs_series(x[small])
    if np.any(large):
        xv = x[large]
        out[large] = -(EULER_GAMMA + np.log(xv) + _exp1_contfrac_vec(xv))
    return out
