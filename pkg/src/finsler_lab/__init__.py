"""Binet-Legendre and John metrics of Finsler unit balls, with Funk/Hilbert geometry."""
__version__ = "0.1.0"

from .bodies import (
    Body,
    DirectionSet,
    EllipsoidBody,
    LinearImage,
    PBall,
    PolytopeH,
    PolytopeV,
    Symmetrized,
    Translate,
    boundary_hit,
    default_directions,
    gauge,
    is_symmetric,
    quasireversibility_constant,
    sample_uniform,
    unit_ball_volume,
    volume,
)
from .binet_legendre import (
    DensityReport,
    bl_dual_metric,
    bl_metric,
    busemann_densities,
    second_moment,
    zermelo_bl_closed_form,
)
from .domain_geometry import (
    HilbertField,
    Polyline,
    ZermeloField,
    counterexample_drift,
    finsler_norm,
    funk_ball_radius,
    funk_distance,
    hilbert_distance,
    hilbert_norm,
    path_length,
    rfunk_distance,
)
from .errors import FinslerLabError
from .john import Ellipsoid, check_inclusion, john_metric, max_inscribed_ellipsoid
from .metric_tensor import MetricTensor
