"""pyreeb: графы Риба, их сглаживание, расстояние чередования, функциональное искажение
и расширенная устойчивость с проверкой неравенств между ними."""
from .graph import ReebGraph, canonicalize, is_isomorphic, parse_reeb, read_reeb, smooth, write_reeb
from .interval import BoundInterval

__all__ = [
    "ReebGraph",
    "canonicalize",
    "is_isomorphic",
    "parse_reeb",
    "read_reeb",
    "smooth",
    "write_reeb",
    "BoundInterval",
]
