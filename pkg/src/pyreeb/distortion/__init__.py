"""Функциональное искажение: пары отображений на подразбиениях и оценки d_FD."""
from .maps import (
    DiscontinuousMapError,
    LevelStrategy,
    Mesh,
    MeshCell,
    SubdividedMap,
    components_of,
    from_isomorphism,
    inverse_isomorphism,
    level_seed,
    map_pair_from_dict,
    map_pair_to_dict,
    route_length,
    target_router,
)
from .bounds import (
    DEFAULT_MESH,
    DEFAULT_SEARCH_BUDGET,
    MAPPAIR_SCHEMA,
    CachedMetric,
    PairEvaluation,
    best_map_pair,
    evaluate_pair,
    fdd_bounds,
    fdd_lower_bound,
    fdd_upper_bound,
    replay_map_pair,
    validate_map_pair,
)

__all__ = [
    "DiscontinuousMapError",
    "LevelStrategy",
    "Mesh",
    "MeshCell",
    "SubdividedMap",
    "components_of",
    "from_isomorphism",
    "inverse_isomorphism",
    "level_seed",
    "map_pair_from_dict",
    "map_pair_to_dict",
    "route_length",
    "target_router",
    "DEFAULT_MESH",
    "DEFAULT_SEARCH_BUDGET",
    "MAPPAIR_SCHEMA",
    "CachedMetric",
    "PairEvaluation",
    "best_map_pair",
    "evaluate_pair",
    "fdd_bounds",
    "fdd_lower_bound",
    "fdd_upper_bound",
    "replay_map_pair",
    "validate_map_pair",
]
