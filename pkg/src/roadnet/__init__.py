"""roadnet: station-network coverage, clustering, and interpolation
analysis for road-weather monitoring.

The package answers three questions about a station network: how well it
covers a study area (coverage/nearest-neighbor reports), whether its
layout is clustered (Ripley's L-function against uniform-randomness
envelopes), and how well point readings extend to unobserved locations
(IDW, completely regularized spline RBF, and ordinary kriging under
leave-one-out cross-validation).
"""

from roadnet.errors import InputError, NumericalError, RoadnetError
from roadnet.geo import (
    GeoCoord,
    PlanarPoint,
    RegionPolygon,
    haversine_km,
    pairwise_distances,
    point_in_polygon,
    project,
    unproject,
)
from roadnet.ingest import (
    Network,
    ObservationSet,
    Station,
    Variable,
    load_observations,
    load_regions,
    load_stations,
    merge_networks,
    write_observations,
    write_stations,
)
from roadnet.pattern import (
    CoverageReport,
    CoverageRow,
    LFunctionResult,
    StudyWindow,
    Verdict,
    WindowKind,
    cluster_verdict,
    coverage_report,
    csr_envelope,
    default_distance_grid,
    l_function_analysis,
    mean_nn_distance,
    ripley_k,
    ripley_l,
)
from roadnet.interp import (
    EmpiricalVariogram,
    MethodParams,
    NeighborPolicy,
    Sample,
    TrendSurface,
    VariogramBin,
    VariogramModel,
    crs_basis,
    detrend_first_order,
    empirical_variogram,
    fit_variogram,
    gaussian_variogram,
    idw_predict,
    ok_full_predict,
    ok_predict,
    ok_weights,
    rbf_predict,
    select_neighbors,
)
from roadnet.crossval import (
    CrossValReport,
    CrossValRow,
    Method,
    SummaryStats,
    build_samples,
    compare_methods,
    loocv,
    optimize_parameter,
    predict,
    rms,
    summary_stats,
)

__version__ = "0.1.0"

__all__ = [
    "CoverageReport",
    "CoverageRow",
    "CrossValReport",
    "CrossValRow",
    "EmpiricalVariogram",
    "GeoCoord",
    "InputError",
    "LFunctionResult",
    "Method",
    "MethodParams",
    "NeighborPolicy",
    "Network",
    "NumericalError",
    "ObservationSet",
    "PlanarPoint",
    "RegionPolygon",
    "RoadnetError",
    "Sample",
    "Station",
    "StudyWindow",
    "SummaryStats",
    "TrendSurface",
    "Variable",
    "VariogramBin",
    "VariogramModel",
    "Verdict",
    "WindowKind",
    "build_samples",
    "cluster_verdict",
    "compare_methods",
    "coverage_report",
    "crs_basis",
    "csr_envelope",
    "default_distance_grid",
    "detrend_first_order",
    "empirical_variogram",
    "fit_variogram",
    "gaussian_variogram",
    "haversine_km",
    "idw_predict",
    "l_function_analysis",
    "load_observations",
    "load_regions",
    "load_stations",
    "loocv",
    "mean_nn_distance",
    "merge_networks",
    "ok_full_predict",
    "ok_predict",
    "ok_weights",
    "optimize_parameter",
    "pairwise_distances",
    "point_in_polygon",
    "predict",
    "project",
    "rbf_predict",
    "ripley_k",
    "ripley_l",
    "rms",
    "select_neighbors",
    "summary_stats",
    "unproject",
    "write_observations",
    "write_stations",
]
