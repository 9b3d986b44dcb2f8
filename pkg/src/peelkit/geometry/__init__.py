"""Convex polytope kernel: hulls, cuts, intersections, balls and nets."""
from .affine import TOL, AffineHull, affine_hull
from .balls import Ball, ball_is_minimal, min_enclosing_ball
from .nets import NetError, sandwich_polytope, sphere_net, tangent_hyperplanes
from .polytope import (
    EmptyError,
    Halfspace,
    Hyperplane,
    MinkowskiReport,
    Polytope,
    UnboundedError,
    clip,
    contains_ball,
    contains_point,
    contains_points,
    cut,
    from_halfspaces,
    from_vertices,
    inside_ball,
    intersect,
    minkowski_scaled_sum,
    same_vertex_set,
    sample_uniform,
    scale,
    support_function,
)

__all__ = [
    "TOL", "AffineHull", "affine_hull", "Ball", "ball_is_minimal", "min_enclosing_ball",
    "NetError", "sandwich_polytope", "sphere_net", "tangent_hyperplanes", "EmptyError",
    "Halfspace", "Hyperplane", "MinkowskiReport", "Polytope", "UnboundedError", "clip",
    "contains_ball", "contains_point", "contains_points", "cut", "from_halfspaces",
    "from_vertices", "inside_ball", "intersect", "minkowski_scaled_sum", "same_vertex_set",
    "sample_uniform", "scale", "support_function",
]
