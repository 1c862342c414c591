"""Exact computations with integer packing sets, packing polyhedra and
their k-aggregation closures."""
from .closure import (
    ClosureResult,
    RepresentativeFamily,
    aggregate,
    closure,
    closure_inf,
    closure_k,
    closure_k_downset,
    closure_monotonicity,
    global_box,
    lambda_cells,
    verify_closure,
)
from .downset import (
    BoundedSupport,
    DownsetModel,
    PackingPolyhedron,
    farkas_decompose,
    normalize_downset,
    polyhedron_integer_hull,
    positive_part,
    recession_free_coords,
    sup_oracle,
)
from .packset import INF, KnapsackIneq, PackingSet, from_knapsack, integer_hull

__version__ = "0.1.0"
