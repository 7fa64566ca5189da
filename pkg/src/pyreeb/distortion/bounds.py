"""Целевая функция функционального искажения и гарантированные оценки d_FD.

Верхняя оценка даётся любой явной парой непрерывных отображений (φ, ψ): значение целевой функции
max{D(φ, ψ), ‖f − g∘φ‖, ‖g − f∘ψ‖} плюс погрешность подразбиения. Нижняя оценка берётся из
теорем устойчивости: bottleneck диаграмм и нижняя граница расстояния чередования.
"""

from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Any, Optional

import jsonschema
import numpy as np

from pyreeb.cosheaf import DEFAULT_BUDGET, cosheaf_of, d_I_bounds
from pyreeb.graph import GraphPoint, PathHeightMetric, ReebGraph, is_isomorphic, points_at_level
from pyreeb.graph.reeb import Cell, point_cell
from pyreeb.interval import Bound, BoundInterval, bound_str
from pyreeb.persistence import bottleneck, extended_diagrams
from pyreeb.util import to_value

from .maps import (
    DiscontinuousMapError,
    LevelStrategy,
    SubdividedMap,
    components_of,
    from_isomorphism,
    inverse_isomorphism,
    level_seed,
    map_pair_from_dict,
    map_pair_to_dict,
)

logger = logging.getLogger(__name__)

DEFAULT_MESH = Fraction(1, 20)
DEFAULT_SEARCH_BUDGET = 200  # шаги локального поиска

MAPPAIR_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Пара отображений графов Риба",
    "type": "object",
    "required": ["mesh", "phi", "psi"],
    "properties": {
        "mesh": {"type": "string", "pattern": r"^\d+(/\d+|\.\d+)?$"},
        "phi": {"$ref": "#/definitions/assignment"},
        "psi": {"$ref": "#/definitions/assignment"},
    },
    "definitions": {
        "point": {"type": "string", "pattern": r"^(v\d+|e\d+:\S+)$"},
        "assignment": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"$ref": "#/definitions/point"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
    "additionalProperties": True,
}


class CachedMetric:
    """d_f с запоминанием ответов для пар точек."""

    def __init__(self, graph: ReebGraph):
        self.metric = PathHeightMetric(graph)
        self._cache: dict[tuple[GraphPoint, GraphPoint], Bound] = {}

    def distance(self, p: GraphPoint, q: GraphPoint) -> Bound:
        """d_f(p, q)."""
        key = (p, q) if str(p) <= str(q) else (q, p)
        d = self._cache.get(key)
        if d is None:
            d = self.metric.distance(p, q)
            self._cache[key] = d
        return d


@dataclass(frozen=True)
class PairEvaluation:
    """Значения слагаемых целевой функции для пары отображений.

    :param distortion: D(φ, ψ) по выборке соответствия в вершинах подразбиений
    :param sup_fg: ‖f − g∘φ‖_∞
    :param sup_gf: ‖g − f∘ψ‖_∞
    :param mesh_error: поправка на выборку в вершинах подразбиений
    """

    distortion: Bound
    sup_fg: Fraction
    sup_gf: Fraction
    objective: Bound
    mesh_error: Fraction

    @property
    def certified(self) -> Bound:
        """Гарантированная верхняя оценка d_FD: objective + mesh_error."""
        if math.isinf(self.objective):
            return math.inf
        return self.objective + self.mesh_error

    def to_dict(self) -> dict[str, str]:
        """Словарь для JSON."""
        return {
            "D": bound_str(self.distortion),
            "sup_fg": bound_str(self.sup_fg),
            "sup_gf": bound_str(self.sup_gf),
            "objective": bound_str(self.objective),
            "mesh_error": bound_str(self.mesh_error),
            "certified": bound_str(self.certified),
        }


def _distortion_term(dx: Bound, dy: Bound) -> Bound:
    if math.isinf(dx) and math.isinf(dy):
        return Fraction(0)
    if math.isinf(dx) or math.isinf(dy):
        return math.inf
    return abs(dx - dy) / 2  # type: ignore[operator]


def evaluate_pair(
    phi: SubdividedMap,
    psi: SubdividedMap,
    metric_x: Optional[CachedMetric] = None,
    metric_y: Optional[CachedMetric] = None,
) -> PairEvaluation:
    """Вычисляет D(φ, ψ), обе равномерные нормы и погрешность подразбиения для пары φ: X → Y, ψ: Y → X.

    Соответствие C(φ, ψ) берётся в вершинах обоих подразбиений: пары (x, φ(x)) и (ψ(y), y).
    Нормы ‖f − g∘φ‖ и ‖g − f∘ψ‖ точны (маршруты кусочно-линейны по значению). Погрешность
    равна нулю для взаимно обратных отображений, сохраняющих значения, и сумме поячеечных
    погрешностей обоих отображений в остальных случаях.
    """
    x, y = phi.source, phi.target
    if psi.source != y or psi.target != x:
        raise DiscontinuousMapError("Отображения пары должны идти X -> Y и Y -> X")
    metric_x = metric_x if metric_x is not None else CachedMetric(x)
    metric_y = metric_y if metric_y is not None else CachedMetric(y)

    samples: list[tuple[GraphPoint, GraphPoint]] = []
    seen: set[tuple[GraphPoint, GraphPoint]] = set()
    for p in phi.grid.nodes:
        pair = (p, phi.assignment[p])
        if pair not in seen:
            seen.add(pair)
            samples.append(pair)
    for q in psi.grid.nodes:
        pair = (psi.assignment[q], q)
        if pair not in seen:
            seen.add(pair)
            samples.append(pair)

    distortion: Bound = Fraction(0)
    for i, (p, q) in enumerate(samples):
        for p2, q2 in samples[i + 1:]:
            term = _distortion_term(metric_x.distance(p, p2), metric_y.distance(q, q2))
            if term > distortion:
                distortion = term
                if math.isinf(distortion):
                    break
        if math.isinf(distortion):
            break

    sup_fg = phi.sup_deviation()
    sup_gf = psi.sup_deviation()
    objective = max(distortion, sup_fg, sup_gf)
    if phi.is_value_preserving_isometry_of(psi):
        mesh_error = Fraction(0)
    else:
        mesh_error = phi.cell_error() + psi.cell_error()
    return PairEvaluation(distortion, sup_fg, sup_gf, objective, mesh_error)


class _LocalSearch:
    """Случайный локальный поиск: одна вершина подразбиения получает другой образ того же уровня,
    изменение принимается при строгом улучшении гарантированной оценки."""

    def __init__(
        self,
        phi: SubdividedMap,
        psi: SubdividedMap,
        evaluation: PairEvaluation,
        seed: int,
        metrics: tuple[CachedMetric, CachedMetric],
    ):
        self.maps = [phi, psi]
        self.evaluation = evaluation
        self.rng = np.random.default_rng(seed)
        self.metrics = metrics
        self.accepted = 0
        # диапазон значений и ячейки компоненты для каждой ячейки целевого графа
        self.ranges: list[dict[Cell, tuple[Fraction, Fraction, frozenset[Cell]]]] = []
        for m in self.maps:
            info: dict[Cell, tuple[Fraction, Fraction, frozenset[Cell]]] = {}
            for group in components_of(m.target):
                values = [m.target.value(c[1]) for c in group if c[0] == "v"]
                entry = (min(values), max(values), frozenset(group))
                for c in group:
                    info[c] = entry
            self.ranges.append(info)

    def candidates(self, side: int, node: GraphPoint) -> list[GraphPoint]:
        """Точки целевого графа на уровне узла (обрезанном к диапазону компоненты текущего образа)."""
        m = self.maps[side]
        lo, hi, cells = self.ranges[side][point_cell(m.assignment[node])]
        level = min(max(m.grid.value(node), lo), hi)
        return [q for q in points_at_level(m.target, level) if point_cell(q) in cells]

    def step(self) -> None:
        """Один шаг поиска. Число обращений к генератору не зависит от исхода шага."""
        side = int(self.rng.integers(2))
        m = self.maps[side]
        node = m.grid.nodes[int(self.rng.integers(len(m.grid.nodes)))]
        options = self.candidates(side, node)
        choice = options[int(self.rng.integers(len(options)))]
        if choice == m.assignment[node]:
            return
        moved = m.with_assignment(node, choice)
        if moved is None:
            return
        maps = list(self.maps)
        maps[side] = moved
        evaluation = evaluate_pair(maps[0], maps[1], *self.metrics)
        if evaluation.certified < self.evaluation.certified:
            self.maps = maps
            self.evaluation = evaluation
            self.accepted += 1


def best_map_pair(
    x: ReebGraph,
    y: ReebGraph,
    mesh: Any = DEFAULT_MESH,
    budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> Optional[tuple[SubdividedMap, SubdividedMap, PairEvaluation, str]]:
    """Лучшая найденная пара отображений, её оценка и происхождение (`isomorphism`, `clamp`,
    `rescale`, `search`). None, если числа компонент графов различаются."""
    mesh = to_value(mesh)
    iso = is_isomorphic(x, y)
    if iso:
        phi = from_isomorphism(x, y, iso, mesh)
        psi = from_isomorphism(y, x, inverse_isomorphism(iso), mesh)
        return phi, psi, evaluate_pair(phi, psi), "isomorphism"
    if len(components_of(x)) != len(components_of(y)):
        return None

    metrics = (CachedMetric(x), CachedMetric(y))
    best: Optional[tuple[SubdividedMap, SubdividedMap, PairEvaluation, str]] = None
    for strategy in (LevelStrategy.CLAMP, LevelStrategy.RESCALE):
        phi = level_seed(x, y, mesh, strategy, metrics[1].metric)
        psi = level_seed(y, x, mesh, strategy, metrics[0].metric)
        assert phi is not None and psi is not None
        evaluation = evaluate_pair(phi, psi, *metrics)
        logger.debug("Начальная пара %s: %s", strategy, bound_str(evaluation.certified))
        if best is None or evaluation.certified < best[2].certified:
            best = (phi, psi, evaluation, strategy)
    assert best is not None
    if budget <= 0:
        return best

    search = _LocalSearch(best[0], best[1], best[2], seed, metrics)
    for _ in range(budget):
        search.step()
    logger.debug("Локальный поиск: %d шагов, принято %d", budget, search.accepted)
    if search.accepted:
        return search.maps[0], search.maps[1], search.evaluation, "search"
    return best


def fdd_upper_bound(
    x: ReebGraph,
    y: ReebGraph,
    mesh: Any = DEFAULT_MESH,
    budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> BoundInterval:
    """Верхняя оценка d_FD: наименьшая гарантированная оценка среди рассмотренных пар отображений.

    Сертификат `mappair` содержит пару отображений для повторной проверки.
    """
    found = best_map_pair(x, y, mesh, budget, seed)
    if found is None:
        return BoundInterval(Fraction(0), math.inf, "trivial", "components")
    phi, psi, evaluation, provenance = found
    return BoundInterval(
        Fraction(0),
        evaluation.certified,
        "trivial",
        provenance,
        certificates={"mappair": map_pair_to_dict(phi, psi), "evaluation": evaluation.to_dict()},
    )


def fdd_lower_bound(
    x: ReebGraph,
    y: ReebGraph,
    tolerance: Any = Fraction(1, 1000),
    budget: int = DEFAULT_BUDGET,
    interleaving: Optional[BoundInterval] = None,
) -> BoundInterval:
    """Нижняя оценка d_FD: max(d_B(Dg₀), d_B(ExDg₁)/3, нижняя граница d_I).

    Если поиск чередования не уложился в бюджет, слагаемое d_I не учитывается, а интервал помечается.

    :param interleaving: уже вычисленная оценка d_I (иначе вычисляется здесь)
    """
    dg0_x, ex1_x = extended_diagrams(x)
    dg0_y, ex1_y = extended_diagrams(y)
    terms: list[tuple[Bound, str]] = [
        (bottleneck(dg0_x, dg0_y), "dB0"),
        (bottleneck(ex1_x, ex1_y) / 3, "dB1/3"),
    ]
    d_i = interleaving if interleaving is not None else d_I_bounds(cosheaf_of(x), cosheaf_of(y), tolerance, budget)
    if not d_i.undecided:
        terms.append((d_i.lo, "dI"))
    lo, provenance = terms[0]
    for value, name in terms[1:]:
        if value > lo:
            lo, provenance = value, name
    certificates: dict[str, Any] = {"dI": d_i.to_dict()}
    return BoundInterval(lo, math.inf, provenance, "trivial", d_i.undecided, certificates)


def fdd_bounds(
    x: ReebGraph,
    y: ReebGraph,
    mesh: Any = DEFAULT_MESH,
    budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
    tolerance: Any = Fraction(1, 1000),
    interleaving_budget: int = DEFAULT_BUDGET,
    interleaving: Optional[BoundInterval] = None,
) -> BoundInterval:
    """Гарантированный интервал для d_FD."""
    lower = fdd_lower_bound(x, y, tolerance, interleaving_budget, interleaving)
    upper = fdd_upper_bound(x, y, mesh, budget, seed)
    result = BoundInterval(
        lower.lo,
        upper.hi,
        lower.lo_provenance,
        upper.hi_provenance,
        lower.undecided,
        {**lower.certificates, **upper.certificates},
    )
    if not result.consistent():
        logger.warning(
            "Нижняя оценка d_FD %s больше верхней %s", bound_str(result.lo), bound_str(result.hi)
        )
    return result


def validate_map_pair(data: Any) -> None:
    """Проверка JSON пары отображений схемой."""
    try:
        jsonschema.validate(instance=data, schema=MAPPAIR_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ValueError(f"Пара отображений не соответствует схеме: {e.message}") from e


def replay_map_pair(x: ReebGraph, y: ReebGraph, data: Any) -> PairEvaluation:
    """Повторно вычисляет оценку по сертификату `mappair`."""
    validate_map_pair(data)
    phi, psi = map_pair_from_dict(x, y, data)
    return evaluate_pair(phi, psi)
