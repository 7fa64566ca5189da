"""Косвязки над прямой и расстояние чередования."""
from .cosheaf import (
    ConstructibleCosheaf,
    CosheafError,
    Section,
    corestriction,
    cosheaf_of,
    evaluate,
    realize,
    same_fibre_counts,
    shift,
)
from .interleaving import (
    CERTIFICATE_SCHEMA,
    DEFAULT_BUDGET,
    BinaryCSP,
    Decision,
    InterleavingCertificate,
    InterleavingResult,
    component_count,
    d_I_bounds,
    decide_interleaving,
    interleaving_distance_is_infinite,
    verify_certificate,
)

__all__ = [
    "ConstructibleCosheaf",
    "CosheafError",
    "Section",
    "corestriction",
    "cosheaf_of",
    "evaluate",
    "realize",
    "same_fibre_counts",
    "shift",
    "CERTIFICATE_SCHEMA",
    "DEFAULT_BUDGET",
    "BinaryCSP",
    "Decision",
    "InterleavingCertificate",
    "InterleavingResult",
    "component_count",
    "d_I_bounds",
    "decide_interleaving",
    "interleaving_distance_is_infinite",
    "verify_certificate",
]
