"""Finite median algebras, their cube complexes and wall metrics."""

from . import models
from .algebra import (
    ball,
    center,
    gate,
    gate_preimage,
    gate_to_convex,
    halfspace_hull,
    hull,
    interval,
    interval_intersection,
    is_convex,
    join,
    median,
    triple_intersection,
)
from .complex import build_complex, check_local_cubulation, skeleton_from_vertices
from .errors import *  # noqa: F401,F403
from .fileformat import WallspaceFile, parse, parse_text, serialize
from .metric import (
    LayeredExhaustion,
    WeightedWallspace,
    build_exhaustion,
    cauchy_gap_check,
    check_median_metric,
    distance,
    floyd,
    frontier,
    retract_layer,
    subdivide_wall,
    thicken,
    verify_median_metric,
)
from .model import MedianModel, from_bitstrings, maj, median_closure
from .rank import is_additive, rank, rank_interval
from .squares import (
    classify_quadruple,
    double_projection,
    find_square_in_interval,
    flag_span,
    iter_squares,
    square_product_iso,
)
from .table import MedianTable, sholander_median, verify_axioms, verify_model_axioms
from .wallspace import (
    HalfspaceSystem,
    Ultrafilter,
    compare_cubulation,
    sageev_cubulation,
    ultrafilter_of_vertex,
    vertex_of_ultrafilter,
)

__version__ = "0.1.0"
