"""Граф Риба: модель данных, проверка, каноническая форма и изоморфизм с сохранением функции.

Граф Риба задаётся конечным мультиграфом, вершинам которого приписаны значения функции,
а каждое ребро строго монотонно: значение нижнего конца меньше значения верхнего.
Функция на ребре получается линейной интерполяцией значений концов.
"""

from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
import logging
from typing import Any, Optional, Self

import networkx as nx
from networkx.algorithms.isomorphism import MultiDiGraphMatcher

from pyreeb.util import UnionFind, exact_str, format_value, to_value

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = Fraction(1, 10**9)  # допуск сравнения значений в is_isomorphic


class ReebGraphError(ValueError):
    """Граф или точка графа непригодны для операции."""
    pass  # pylint: disable=unnecessary-pass


@dataclass(frozen=True)
class Vertex:
    """Вершина графа Риба."""

    id: int
    value: Fraction


@dataclass(frozen=True)
class Edge:
    """Ребро графа Риба, ориентированное от нижней вершины к верхней."""

    id: int
    lower: int
    upper: int


@dataclass(frozen=True)
class ReebGraph:
    """Конечный граф Риба (неизменяемый).

    Кратные рёбра допустимы и различаются идентификаторами, граф может быть несвязным.
    Конструктор не проверяет инварианты: для этого служит `validate`.
    """

    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()

    @classmethod
    def from_lists(
        cls,
        vertices: Iterable[tuple[int, Any]],
        edges: Iterable[tuple[int, int, int]] = (),
    ) -> Self:
        """Создаёт граф из пар (id, значение) и троек (id ребра, нижняя вершина, верхняя вершина)."""
        return cls(
            vertices=tuple(Vertex(int(vid), to_value(value)) for vid, value in vertices),
            edges=tuple(Edge(int(eid), int(lo), int(up)) for eid, lo, up in edges),
        )

    @cached_property
    def values(self) -> dict[int, Fraction]:
        """Значения функции по идентификаторам вершин."""
        return {v.id: v.value for v in self.vertices}

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        """Рёбра по идентификаторам."""
        return {e.id: e for e in self.edges}

    def value(self, vertex_id: int) -> Fraction:
        """Значение функции в вершине."""
        return self.values[vertex_id]

    def edge(self, edge_id: int) -> Edge:
        """Ребро по идентификатору."""
        return self.edge_by_id[edge_id]

    def edge_values(self, edge_id: int) -> tuple[Fraction, Fraction]:
        """Значения на нижнем и верхнем концах ребра."""
        e = self.edge_by_id[edge_id]
        return self.values[e.lower], self.values[e.upper]

    def height(self, edge_id: int) -> Fraction:
        """Высота ребра: разность значений концов."""
        lo, up = self.edge_values(edge_id)
        return up - lo

    @property
    def critical_values(self) -> list[Fraction]:
        """Отсортированные различные значения в вершинах."""
        return sorted(set(self.values.values()))

    @property
    def value_range(self) -> tuple[Fraction, Fraction]:
        """Минимум и максимум функции."""
        if not self.vertices:
            raise ReebGraphError("Пустой граф не имеет диапазона значений")
        vals = self.values.values()
        return min(vals), max(vals)

    def shift_values(self, c: Any) -> "ReebGraph":
        """Граф с функцией f + c."""
        delta = to_value(c)
        return ReebGraph(
            vertices=tuple(Vertex(v.id, v.value + delta) for v in self.vertices),
            edges=self.edges,
        )

    def __str__(self) -> str:
        vs = ", ".join(f"v{v.id}={format_value(v.value)}" for v in self.vertices)
        es = ", ".join(f"e{e.id}:{e.lower}->{e.upper}" for e in self.edges)
        return f"ReebGraph({vs}; {es})"


def edge_graph(a: Any, b: Any) -> ReebGraph:
    """Одно ребро a -> b."""
    return ReebGraph.from_lists([(0, a), (1, b)], [(0, 0, 1)])


def loop_graph(a: Any, b: Any) -> ReebGraph:
    """Петля высоты b - a: две вершины, соединённые двумя параллельными рёбрами."""
    return ReebGraph.from_lists([(0, a), (1, b)], [(0, 0, 1), (1, 0, 1)])


def disjoint_union(first: ReebGraph, second: ReebGraph) -> ReebGraph:
    """Несвязное объединение; идентификаторы второго графа сдвигаются."""
    v_shift = max((v.id for v in first.vertices), default=-1) + 1
    e_shift = max((e.id for e in first.edges), default=-1) + 1
    return ReebGraph(
        vertices=first.vertices + tuple(Vertex(v.id + v_shift, v.value) for v in second.vertices),
        edges=first.edges
        + tuple(Edge(e.id + e_shift, e.lower + v_shift, e.upper + v_shift) for e in second.edges),
    )


@dataclass(frozen=True)
class GraphPoint:
    """Точка графа Риба: вершина или внутренняя точка ребра с параметром 0 < s < 1."""

    vertex: Optional[int] = None
    edge: Optional[int] = None
    s: Optional[Fraction] = None

    def __post_init__(self):
        if (self.vertex is None) == (self.edge is None):
            raise ReebGraphError("Точка задаётся либо вершиной, либо ребром с параметром")
        if self.edge is not None:
            if self.s is None or not (0 < self.s < 1):
                raise ReebGraphError(f"Параметр точки на ребре должен лежать в (0, 1): {self.s}")
        elif self.s is not None:
            raise ReebGraphError("У точки-вершины не бывает параметра")

    @classmethod
    def at(cls, vertex_id: int) -> Self:
        """Точка-вершина."""
        return cls(vertex=vertex_id)

    @classmethod
    def on(cls, edge_id: int, s: Any) -> Self:
        """Внутренняя точка ребра."""
        return cls(edge=edge_id, s=to_value(s))

    def check(self, graph: ReebGraph) -> None:
        """Проверяет, что точка ссылается на существующую вершину или ребро."""
        if self.vertex is not None and self.vertex not in graph.values:
            raise ReebGraphError(f"Нет вершины {self.vertex}")
        if self.edge is not None and self.edge not in graph.edge_by_id:
            raise ReebGraphError(f"Нет ребра {self.edge}")

    def value(self, graph: ReebGraph) -> Fraction:
        """Значение функции в точке."""
        self.check(graph)
        if self.vertex is not None:
            return graph.value(self.vertex)
        assert self.edge is not None and self.s is not None
        lo, up = graph.edge_values(self.edge)
        return (1 - self.s) * lo + self.s * up

    def __str__(self) -> str:
        if self.vertex is not None:
            return f"v{self.vertex}"
        return f"e{self.edge}:{exact_str(self.s)}"  # type: ignore[arg-type]


def points_at_level(graph: ReebGraph, level: Any) -> list[GraphPoint]:
    """Все точки графа со значением `level`: вершины на уровне и по точке на каждом пересекающем ребре."""
    a = to_value(level)
    points = [GraphPoint.at(v.id) for v in graph.vertices if v.value == a]
    for e in graph.edges:
        lo, up = graph.edge_values(e.id)
        if lo < a < up:
            points.append(GraphPoint.on(e.id, (a - lo) / (up - lo)))
    return points


# Ячейки графа для union-find: ("v", id) или ("e", id)
type Cell = tuple[str, int]


def point_cell(point: GraphPoint) -> Cell:
    """Ячейка, содержащая точку."""
    if point.vertex is not None:
        return ("v", point.vertex)
    return ("e", point.edge)  # type: ignore[return-value]


def truncated_components(
    graph: ReebGraph, lo: Optional[Fraction], hi: Optional[Fraction]
) -> UnionFind[Cell]:
    """Компоненты связности прообраза f⁻¹([lo, hi]) (None означает бесконечную границу).

    Вершина входит, если её значение лежит в отрезке; ребро входит, если его внутренность
    пересекает отрезок (f(нижний) < hi и f(верхний) > lo). Ребро приклеивается к входящим концам.
    """
    uf: UnionFind[Cell] = UnionFind()
    vals = graph.values
    for v in graph.vertices:
        if (lo is None or v.value >= lo) and (hi is None or v.value <= hi):
            uf.add(("v", v.id))
    for e in graph.edges:
        v_lo, v_up = vals[e.lower], vals[e.upper]
        if (hi is None or v_lo < hi) and (lo is None or v_up > lo):
            cell = ("e", e.id)
            uf.add(cell)
            for end in (e.lower, e.upper):
                if ("v", end) in uf:
                    uf.union(cell, ("v", end))
    return uf


def betti_numbers(graph: ReebGraph) -> tuple[int, int]:
    """Число компонент связности и число независимых циклов (E - V + C)."""
    uf = truncated_components(graph, None, None)
    components = len({uf.find(("v", v.id)) for v in graph.vertices})
    return components, len(graph.edges) - len(graph.vertices) + components


class ViolationRule(Enum):
    """Нарушаемые правила графа Риба."""

    DUPLICATE_VERTEX = "duplicate vertex id"
    DUPLICATE_EDGE = "duplicate edge id"
    DANGLING_REFERENCE = "dangling reference"
    SELF_LOOP = "self-loop"
    NON_MONOTONE_EDGE = "non-monotone edge"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Violation:
    """Нарушение инварианта: правило, объект (`v3`, `e5`) и пояснение."""

    rule: ViolationRule
    ref: str
    message: str

    def __str__(self) -> str:
        return f"{self.ref}: {self.rule}: {self.message}"


@dataclass
class ValidationReport:
    """Результат проверки графа: пустой список нарушений означает корректный граф."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True, если нарушений нет."""
        return not self.violations

    def rules(self) -> set[ViolationRule]:
        """Множество нарушенных правил."""
        return {v.rule for v in self.violations}


def validate(graph: ReebGraph, allow_flat_edges: bool = False) -> ValidationReport:
    """Проверяет инварианты графа Риба; нарушения возвращаются как данные.

    :param allow_flat_edges: допускать рёбра нулевой высоты (вход `canonicalize`)
    """
    report = ValidationReport()
    values: dict[int, Fraction] = {}
    for v in graph.vertices:
        if v.id in values:
            report.violations.append(
                Violation(ViolationRule.DUPLICATE_VERTEX, f"v{v.id}", "идентификатор вершины повторяется")
            )
        values[v.id] = v.value
    seen_edges: set[int] = set()
    for e in graph.edges:
        ref = f"e{e.id}"
        if e.id in seen_edges:
            report.violations.append(
                Violation(ViolationRule.DUPLICATE_EDGE, ref, "идентификатор ребра повторяется")
            )
        seen_edges.add(e.id)
        missing = [vid for vid in (e.lower, e.upper) if vid not in values]
        if missing:
            report.violations.append(
                Violation(
                    ViolationRule.DANGLING_REFERENCE,
                    ref,
                    f"ссылка на отсутствующую вершину {', '.join(map(str, missing))}",
                )
            )
            continue
        if e.lower == e.upper:
            report.violations.append(Violation(ViolationRule.SELF_LOOP, ref, "ребро-петля"))
            continue
        lo, up = values[e.lower], values[e.upper]
        if lo > up or (lo == up and not allow_flat_edges):
            report.violations.append(
                Violation(
                    ViolationRule.NON_MONOTONE_EDGE,
                    ref,
                    f"значения концов {format_value(lo)} -> {format_value(up)} не возрастают строго",
                )
            )
    return report


def canonicalize(graph: ReebGraph) -> ReebGraph:
    """Каноническая форма графа Риба.

    1. Рёбра нулевой высоты стягиваются; стягивание, замыкающее петлю на одном уровне,
       схлопывает её (предупреждение в журнале).
    2. Регулярные вершины (одно ребро снизу и одно сверху) удаляются склейкой рёбер.
    3. Идентификаторы перенумеровываются детерминированно: по значению, затем по локальной
       сигнатуре (степени и значения соседей), затем по прежнему порядку.

    Операция идемпотентна: повторное применение возвращает равный граф.
    """
    report = validate(graph, allow_flat_edges=True)
    fatal = report.rules() - {ViolationRule.SELF_LOOP}
    if fatal:
        raise ReebGraphError(
            "Граф непригоден для канонизации: " + "; ".join(str(v) for v in report.violations)
        )
    values = graph.values

    # 1. стягивание рёбер нулевой высоты
    uf: UnionFind[int] = UnionFind(v.id for v in graph.vertices)
    sloped: list[Edge] = []
    for e in sorted(graph.edges, key=lambda e: e.id):
        if values[e.lower] == values[e.upper]:
            if not uf.union(e.lower, e.upper):
                logger.warning(
                    "Стягивание ребра e%d нулевой высоты замыкает петлю на уровне %s: петля схлопнута",
                    e.id,
                    format_value(values[e.lower]),
                )
        else:
            sloped.append(e)
    rep = {v.id: uf.find(v.id) for v in graph.vertices}
    alive = sorted(set(rep.values()))
    ends: dict[int, list[int]] = {e.id: [rep[e.lower], rep[e.upper]] for e in sloped}
    down: dict[int, set[int]] = {vid: set() for vid in alive}
    up: dict[int, set[int]] = {vid: set() for vid in alive}
    for eid, (lo, hi) in ends.items():
        up[lo].add(eid)
        down[hi].add(eid)

    # 2. удаление регулярных вершин
    worklist = list(alive)
    removed: set[int] = set()
    while worklist:
        vid = worklist.pop()
        if vid in removed or len(down[vid]) != 1 or len(up[vid]) != 1:
            continue
        (below,) = down[vid]
        (above,) = up[vid]
        top = ends[above][1]
        # ребро `below` продлевается до верхнего конца ребра `above`
        ends[below][1] = top
        down[top].discard(above)
        down[top].add(below)
        del ends[above]
        removed.add(vid)
        worklist.append(top)
    vertex_ids = [vid for vid in alive if vid not in removed]

    # 3. детерминированная перенумерация
    def signature(vid: int) -> tuple:
        return (
            values[vid],
            len(down[vid]),
            len(up[vid]),
            tuple(sorted(values[ends[eid][0]] for eid in down[vid])),
            tuple(sorted(values[ends[eid][1]] for eid in up[vid])),
            vid,
        )

    order = sorted(vertex_ids, key=signature)
    new_vid = {old: new for new, old in enumerate(order)}
    edge_order = sorted(ends, key=lambda eid: (new_vid[ends[eid][0]], new_vid[ends[eid][1]], eid))
    result = ReebGraph(
        vertices=tuple(Vertex(new_vid[old], values[old]) for old in order),
        edges=tuple(
            Edge(new, new_vid[ends[old][0]], new_vid[ends[old][1]]) for new, old in enumerate(edge_order)
        ),
    )
    logger.debug(
        "Канонизация: %d вершин, %d рёбер -> %d вершин, %d рёбер",
        len(graph.vertices),
        len(graph.edges),
        len(result.vertices),
        len(result.edges),
    )
    return result


@dataclass(frozen=True)
class IsomorphismResult:
    """Результат проверки изоморфизма; при успехе содержит соответствие вершин и рёбер."""

    is_isomorphic: bool
    vertex_map: Optional[dict[int, int]] = None
    edge_map: Optional[dict[int, int]] = None

    def __bool__(self) -> bool:
        return self.is_isomorphic


def _as_networkx(graph: ReebGraph) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    for v in graph.vertices:
        g.add_node(v.id, value=v.value)
    for e in graph.edges:
        g.add_edge(e.lower, e.upper, key=e.id)
    return g


def is_isomorphic(
    a: ReebGraph, b: ReebGraph, tolerance: Any = DEFAULT_TOLERANCE
) -> IsomorphismResult:
    """Изоморфизм графов Риба с сохранением инцидентности, ориентации и значений (с допуском).

    Перебор с возвратом (VF2) ограничен кандидатами с совместимыми значениями.
    """
    tol = to_value(tolerance)
    if len(a.vertices) != len(b.vertices) or len(a.edges) != len(b.edges):
        return IsomorphismResult(False)
    vals_a = sorted(a.values.values())
    vals_b = sorted(b.values.values())
    if any(abs(x - y) > tol for x, y in zip(vals_a, vals_b)):
        return IsomorphismResult(False)

    matcher = MultiDiGraphMatcher(
        _as_networkx(a),
        _as_networkx(b),
        node_match=lambda n1, n2: abs(n1["value"] - n2["value"]) <= tol,
    )
    if not matcher.is_isomorphic():
        return IsomorphismResult(False)
    vertex_map = {int(k): int(v) for k, v in matcher.mapping.items()}

    # параллельные рёбра сопоставляются в порядке идентификаторов
    groups_b: dict[tuple[int, int], list[int]] = defaultdict(list)
    for e in sorted(b.edges, key=lambda e: e.id):
        groups_b[(e.lower, e.upper)].append(e.id)
    edge_map: dict[int, int] = {}
    for e in sorted(a.edges, key=lambda e: e.id):
        edge_map[e.id] = groups_b[(vertex_map[e.lower], vertex_map[e.upper])].pop(0)
    return IsomorphismResult(True, vertex_map, edge_map)
