"""Exact rational geometry: polyhedra, linear programming, arrangements."""
from .arrangement import Cell, enumerate_cells
from .lp import LPResult, lp_max
from .polyhedra import (
    Halfspace,
    HPolyhedron,
    VPolyhedron,
    cone_generators,
    h_to_v,
    intersect_all,
    irredundant,
    poly_contains,
    poly_equal,
    v_to_h,
)
from .rational import QVector, Rational, dot, qvec, to_rational

__all__ = [
    "Cell", "enumerate_cells", "LPResult", "lp_max", "Halfspace", "HPolyhedron",
    "VPolyhedron", "cone_generators", "h_to_v", "intersect_all", "irredundant",
    "poly_contains", "poly_equal", "v_to_h", "QVector", "Rational", "dot", "qvec",
    "to_rational",
]
