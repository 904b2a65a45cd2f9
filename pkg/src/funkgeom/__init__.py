"""Funk weak metric of open convex bodies and its tautological Finsler structure."""

from .body import (
    Ball,
    ConvexBody,
    DimensionError,
    Ellipsoid,
    GeometryError,
    HalfSpace,
    HPolytope,
    ImplicitBody,
    Intersection,
    OutsideBodyError,
    affine_slice,
    contains,
    is_bounded,
    is_strictly_convex,
    ray_boundary,
    support_hyperplane,
)
from .finsler import (
    Polyline,
    QuadratureSpec,
    Sampled,
    TautologicalStructure,
    concat,
    infimum_estimate,
    path_length,
    segment_length_closed,
)
from .funk import (
    backward_sphere,
    backward_sphere_is_compact,
    forward_sphere,
    funk,
    funk_distance,
    funk_many,
    is_geodesic_chain,
    polygonal_geodesic_witness,
)
from .gauge import classify_minkowski, minkowski_gauge, radial_function

__version__ = "0.1.0"
