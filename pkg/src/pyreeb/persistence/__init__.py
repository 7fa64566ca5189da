"""Расширенная устойчивость графов Риба и расстояние bottleneck."""
from .diagram import DIAGRAM_SCHEMA, DiagramPoint, PairKind, PersistenceDiagram, read_diagram, write_diagram
from .extended import ExtendedPersistence, extended_diagrams, extended_persistence, persistence_pairs
from .bottleneck import bottleneck, matching_feasible, point_cost

__all__ = [
    "DIAGRAM_SCHEMA",
    "DiagramPoint",
    "PairKind",
    "PersistenceDiagram",
    "read_diagram",
    "write_diagram",
    "ExtendedPersistence",
    "extended_diagrams",
    "extended_persistence",
    "persistence_pairs",
    "bottleneck",
    "matching_feasible",
    "point_cost",
]
