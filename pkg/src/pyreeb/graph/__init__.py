"""Графы Риба: модель, формат `.reeb`, комплексы, сглаживание, метрика высоты путей."""
from .reeb import (
    DEFAULT_TOLERANCE,
    Edge,
    GraphPoint,
    IsomorphismResult,
    ReebGraph,
    ReebGraphError,
    ValidationReport,
    Vertex,
    Violation,
    ViolationRule,
    betti_numbers,
    canonicalize,
    disjoint_union,
    edge_graph,
    is_isomorphic,
    loop_graph,
    points_at_level,
    truncated_components,
    validate,
)
from .reeb_format import ReebFormatError, format_reeb, parse_reeb, read_reeb, write_reeb
from .complex import ComplexParseError, PLComplex, complex_of_graph, parse_complex, read_complex, reeb_of_complex
from .smoothing import Diagonal, FiberComponents, fiber_components_oracle, prism_complex, smooth
from .metric import DISCONNECTED, PathHeightMetric, d_f, parse_point

__all__ = [
    "DEFAULT_TOLERANCE",
    "Edge",
    "GraphPoint",
    "IsomorphismResult",
    "ReebGraph",
    "ReebGraphError",
    "ValidationReport",
    "Vertex",
    "Violation",
    "ViolationRule",
    "betti_numbers",
    "canonicalize",
    "disjoint_union",
    "edge_graph",
    "is_isomorphic",
    "loop_graph",
    "points_at_level",
    "truncated_components",
    "validate",
    "ReebFormatError",
    "format_reeb",
    "parse_reeb",
    "read_reeb",
    "write_reeb",
    "ComplexParseError",
    "PLComplex",
    "complex_of_graph",
    "parse_complex",
    "read_complex",
    "reeb_of_complex",
    "Diagonal",
    "FiberComponents",
    "fiber_components_oracle",
    "prism_complex",
    "smooth",
    "DISCONNECTED",
    "PathHeightMetric",
    "d_f",
    "parse_point",
]
