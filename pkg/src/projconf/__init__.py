"""Dilatation of planar projective maps and piecewise projective interpolation
between discretely conformally equivalent triangle meshes."""
from .dilatation import (
    BeltramiField,
    HalfCoefficients,
    HyperbolicPencil,
    beltrami_coefficient,
    beltrami_field,
    circles_mapped_to_circles,
    coefficients_from_matrix,
    contour_circle,
    matrix_from_coefficients,
)
from .discrete import (
    MeshPair,
    MetricTriangulation,
    check_equivalence_cross_ratios,
    edge_continuity,
    face_maps,
    generate_moebius_pair,
    solve_scale_factors,
)
from .errors import ProjconfError
from .projective import (
    Circle,
    Conic,
    Line,
    ProjectiveMap,
    apply,
    homography_from_correspondences,
    is_circle,
    pushforward_conic,
)
from .render import PiecewiseProjectiveMap, RasterJob, render_pullback
from .triangles import Triangle, app_map, cpp_map, exponent_t_center, family_map

__version__ = "0.1.0"

__all__ = [
    "BeltramiField",
    "HalfCoefficients",
    "HyperbolicPencil",
    "beltrami_coefficient",
    "beltrami_field",
    "circles_mapped_to_circles",
    "coefficients_from_matrix",
    "contour_circle",
    "matrix_from_coefficients",
    "MeshPair",
    "MetricTriangulation",
    "check_equivalence_cross_ratios",
    "edge_continuity",
    "face_maps",
    "generate_moebius_pair",
    "solve_scale_factors",
    "ProjconfError",
    "Circle",
    "Conic",
    "Line",
    "ProjectiveMap",
    "apply",
    "homography_from_correspondences",
    "is_circle",
    "pushforward_conic",
    "PiecewiseProjectiveMap",
    "RasterJob",
    "render_pullback",
    "Triangle",
    "app_map",
    "cpp_map",
    "exponent_t_center",
    "family_map",
]
