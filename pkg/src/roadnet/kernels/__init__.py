"""Numerical kernel dispatch.

Imports the compiled Cython backend when it is available, otherwise the
NumPy fallback.  ``BACKEND`` names the active implementation; setting the
environment variable ``ROADNET_DISABLE_EXT=1`` before import forces the
fallback (useful for benchmarking and debugging).

Both backends expose:

- ``haversine_matrix(lat_deg, lon_deg)``
- ``haversine_to_point(lat0, lon0, lat_deg, lon_deg)``
- ``pair_counts_within(x, y, thresholds)``
- ``exp1(x)``
- ``crs_basis_array(r, sigma)``
"""

import os

from roadnet.kernels import _fallback

if os.environ.get("ROADNET_DISABLE_EXT") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from roadnet.kernels import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

EARTH_RADIUS_KM = _fallback.EARTH_RADIUS_KM
EULER_GAMMA = _fallback.EULER_GAMMA

haversine_matrix = _impl.haversine_matrix
haversine_to_point = _impl.haversine_to_point
pair_counts_within = _impl.pair_counts_within
exp1 = _impl.exp1
crs_basis_array = _impl.crs_basis_array

__all__ = [
    "BACKEND",
    "EARTH_RADIUS_KM",
    "EULER_GAMMA",
    "haversine_matrix",
    "haversine_to_point",
    "pair_counts_within",
    "exp1",
    "crs_basis_array",
]
