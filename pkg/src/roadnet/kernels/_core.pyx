# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels (hot loops).

Mirrors :mod:`roadnet.kernels._fallback` function-for-function.
"""

from libc.math cimport atan2, cos, exp, fabs, log, sin, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF EARTH_RADIUS_KM = 6371.0
DEF EULER_GAMMA = 0.5772156649015329
DEF DEG = 0.017453292519943295


cdef inline double _hav(double rlat1, double rlon1, double rlat2, double rlon2) nogil:
    cdef double sdlat = sin(0.5 * (rlat2 - rlat1))
    cdef double sdlon = sin(0.5 * (rlon2 - rlon1))
    cdef double a = sdlat * sdlat + cos(rlat1) * cos(rlat2) * sdlon * sdlon
    if a < 0.0:
        a = 0.0
    elif a > 1.0:
        a = 1.0
    return 2.0 * EARTH_RADIUS_KM * atan2(sqrt(a), sqrt(1.0 - a))


def haversine_matrix(lat_deg, lon_deg):
    """Full n-by-n great-circle distance matrix in km."""
    cdef double[::1] lat = np.ascontiguousarray(lat_deg, dtype=np.float64)
    cdef double[::1] lon = np.ascontiguousarray(lon_deg, dtype=np.float64)
    cdef Py_ssize_t n = lat.shape[0]
    out_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double d
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                d = _hav(lat[i] * DEG, lon[i] * DEG, lat[j] * DEG, lon[j] * DEG)
                out[i, j] = d
                out[j, i] = d
    return out_arr


def haversine_to_point(double lat0, double lon0, lat_deg, lon_deg):
    """Great-circle distances in km from one point to each of n points."""
    cdef double[::1] lat = np.ascontiguousarray(lat_deg, dtype=np.float64)
    cdef double[::1] lon = np.ascontiguousarray(lon_deg, dtype=np.float64)
    cdef Py_ssize_t n = lat.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double rlat0 = lat0 * DEG
    cdef double rlon0 = lon0 * DEG
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _hav(rlat0, rlon0, lat[i] * DEG, lon[i] * DEG)
    return out_arr


def pair_counts_within(x, y, thresholds):
    """Count unordered point pairs with euclidean distance <= t, per threshold."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[::1] t = np.ascontiguousarray(thresholds, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t m = t.shape[0]
    cdef cnp.ndarray t2_arr = np.asarray(t) ** 2
    cdef double[::1] t2 = t2_arr
    bins_arr = np.zeros(m + 1, dtype=np.int64)
    cdef long long[::1] bins = bins_arr
    cdef Py_ssize_t i, j, lo, hi, mid
    cdef double dx, dy, d2
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dx = xv[i] - xv[j]
                dy = yv[i] - yv[j]
                d2 = dx * dx + dy * dy
                # leftmost threshold with t2 >= d2
                lo = 0
                hi = m
                while lo < hi:
                    mid = (lo + hi) // 2
                    if t2[mid] >= d2:
                        hi = mid
                    else:
                        lo = mid + 1
                bins[lo] += 1
    # bins[k] pairs first covered by threshold k; bins[m] pairs beyond all
    return np.cumsum(bins_arr[:m]).astype(np.int64)


cdef double _exp1_series(double x) nogil:
    cdef double total = 0.0
    cdef double term = 1.0
    cdef double contrib
    cdef int k
    for k in range(1, 40):
        term *= x / k
        contrib = term / k
        if k % 2 == 0:
            contrib = -contrib
        total += contrib
        if fabs(contrib) < 1e-18 * max(1.0, fabs(total)):
            break
    return -EULER_GAMMA - log(x) + total


cdef double _exp1_contfrac(double x) nogil:
    cdef double b = x + 1.0
    cdef double c = 1e308
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double a, delta
    cdef int i
    for i in range(1, 200):
        a = -<double>(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if fabs(delta - 1.0) < 1e-16:
            break
    return h * exp(-x)


def exp1(double x):
    """Exponential integral E1(x) for x > 0, absolute error <= 1e-12."""
    if x <= 0.0:
        raise ValueError("exp1 requires x > 0")
    if x <= 1.0:
        return _exp1_series(x)
    return _exp1_contfrac(x)


cdef inline double _crs_one(double r, double sigma) nogil:
    cdef double x = 0.5 * sigma * r
    x = x * x
    cdef double total, term, sign
    cdef int k
    if x == 0.0:
        return 0.0
    if x <= 1.0:
        total = 0.0
        term = 1.0
        sign = 1.0
        for k in range(1, 40):
            term = term * x / k
            total += sign * term / k
            sign = -sign
            if term / k < 1e-18:
                break
        return -total
    return -(EULER_GAMMA + log(x) + _exp1_contfrac(x))


def crs_basis_array(r, double sigma):
    """Completely regularized spline basis, elementwise over ``r``."""
    r_arr = np.ascontiguousarray(r, dtype=np.float64)
    shape = r_arr.shape
    flat = np.ravel(r_arr)
    cdef double[::1] rv = flat
    cdef Py_ssize_t n = rv.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _crs_one(rv[i], sigma)
    return out_arr.reshape(shape)
