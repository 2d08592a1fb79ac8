"""Shape-sphere probabilities for labelled planar triangles."""
from .kinematics import (
    AngleClass,
    AngleKind,
    AspectClass,
    AspectKind,
    ClusterId,
    DegenerateTriangle,
    JacobiPair,
    TotalCollision,
    Triangle,
    canonical_cluster,
    classify_angle,
    classify_aspect,
    interior_angles,
    is_collinear,
    is_isosceles,
    jacobi,
    moment_of_inertia,
    side_lengths,
)
from .shape_map import (
    ShapePoint,
    SphericalCoords,
    cluster_rotate,
    geodesic_distance,
    landmarks,
    representative_triangle,
    shape_point,
    spherical_coords,
)

__version__ = "0.1.0"
