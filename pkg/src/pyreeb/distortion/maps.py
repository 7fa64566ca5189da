"""Непрерывные отображения графов Риба, заданные на подразбиении.

Каждое ребро исходного графа делится на ⌈h/m⌉ равных по высоте частей. Отображение задаётся образами
вершин подразбиения и маршрутами в целевом графе для каждой ячейки. Точка ячейки с долей λ по
значению переходит в точку маршрута с той же долей длины маршрута по значению (сумма |Δg|).
"""

from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Any, Optional

import networkx as nx

from pyreeb.graph import (
    GraphPoint,
    IsomorphismResult,
    PathHeightMetric,
    ReebGraph,
    parse_point,
    points_at_level,
    truncated_components,
)
from pyreeb.graph.reeb import Cell, point_cell
from pyreeb.util import UnionFind, exact_str, parse_exact, to_value

logger = logging.getLogger(__name__)


class DiscontinuousMapError(ValueError):
    """Образы соседних вершин подразбиения нельзя соединить маршрутом."""
    pass  # pylint: disable=unnecessary-pass


@dataclass(frozen=True)
class MeshCell:
    """Ячейка подразбиения: отрезок ребра между соседними вершинами подразбиения."""

    lower: GraphPoint
    upper: GraphPoint
    edge: int
    height: Fraction


class Mesh:
    """Подразбиение рёбер графа на части высоты не больше m."""

    def __init__(self, graph: ReebGraph, mesh: Any):
        self.graph = graph
        self.mesh = to_value(mesh)
        if self.mesh <= 0:
            raise ValueError(f"Шаг подразбиения должен быть положительным: {mesh}")
        self.nodes: list[GraphPoint] = [GraphPoint.at(v.id) for v in sorted(graph.vertices, key=lambda v: v.id)]
        self.cells: list[MeshCell] = []
        for e in sorted(graph.edges, key=lambda e: e.id):
            h = graph.height(e.id)
            k = max(1, math.ceil(h / self.mesh))
            chain = [GraphPoint.at(e.lower)]
            chain += [GraphPoint.on(e.id, Fraction(i, k)) for i in range(1, k)]
            chain.append(GraphPoint.at(e.upper))
            self.nodes.extend(chain[1:-1])
            self.cells.extend(MeshCell(a, b, e.id, h / k) for a, b in zip(chain, chain[1:]))
        self.neighbors: dict[GraphPoint, list[GraphPoint]] = {p: [] for p in self.nodes}
        for cell in self.cells:
            self.neighbors[cell.lower].append(cell.upper)
            self.neighbors[cell.upper].append(cell.lower)

    def value(self, p: GraphPoint) -> Fraction:
        """Значение функции в вершине подразбиения."""
        return p.value(self.graph)


def target_router(target: ReebGraph) -> Callable[[GraphPoint, GraphPoint], Optional[list[GraphPoint]]]:
    """Маршрутизатор: кратчайший по длине значения путь между точками целевого графа."""
    base = nx.Graph()
    for v in target.vertices:
        base.add_node(("v", v.id))
    for e in target.edges:
        # параллельные рёбра имеют одинаковую высоту
        base.add_edge(("v", e.lower), ("v", e.upper), weight=target.height(e.id), edge=e.id)

    def route(p: GraphPoint, q: GraphPoint) -> Optional[list[GraphPoint]]:
        if p == q:
            return [p]
        if p.edge is not None and p.edge == q.edge:
            return [p, q]
        for a, b in ((p, q), (q, p)):
            if a.edge is not None and b.vertex is not None:
                e = target.edge(a.edge)
                if b.vertex in (e.lower, e.upper):
                    return [p, q]
        g = base.copy()
        for name, point in (("p", p), ("q", q)):
            if point.vertex is not None:
                continue
            e = target.edge(point.edge)  # type: ignore[arg-type]
            value = point.value(target)
            lo, up = target.edge_values(e.id)
            g.add_edge(name, ("v", e.lower), weight=value - lo)
            g.add_edge(name, ("v", e.upper), weight=up - value)
        source = ("v", p.vertex) if p.vertex is not None else "p"
        sink = ("v", q.vertex) if q.vertex is not None else "q"
        try:
            path = nx.dijkstra_path(g, source, sink, weight="weight")
        except nx.NetworkXNoPath:
            return None
        result = [p]
        for node in path[1:-1]:
            result.append(GraphPoint.at(node[1]))
        result.append(q)
        return result

    return route


def route_length(target: ReebGraph, route: list[GraphPoint]) -> Fraction:
    """Длина маршрута по значению: сумма |Δg|."""
    values = [p.value(target) for p in route]
    return sum((abs(b - a) for a, b in zip(values, values[1:])), Fraction(0))


def _joinable(target: ReebGraph, a: GraphPoint, b: GraphPoint) -> bool:
    if a == b:
        return True
    if a.edge is not None and a.edge == b.edge:
        return True
    for x, y in ((a, b), (b, a)):
        if x.edge is not None:
            e = target.edge(x.edge)
            if y.vertex in (e.lower, e.upper):
                return True
    if a.vertex is not None and b.vertex is not None:
        return any(
            {e.lower, e.upper} == {a.vertex, b.vertex} for e in target.edges
        )
    return False


class SubdividedMap:
    """Непрерывное отображение source -> target на подразбиении source.

    :param assignment: образ каждой вершины подразбиения
    :param routes: маршрут для каждой ячейки (по умолчанию строится кратчайший по длине значения)
    """

    def __init__(
        self,
        source: ReebGraph,
        target: ReebGraph,
        mesh: Any,
        assignment: dict[GraphPoint, GraphPoint],
        routes: Optional[list[list[GraphPoint]]] = None,
        router: Optional[Callable[[GraphPoint, GraphPoint], Optional[list[GraphPoint]]]] = None,
    ):
        self.source = source
        self.target = target
        self.grid = Mesh(source, mesh)
        missing = [str(p) for p in self.grid.nodes if p not in assignment]
        if missing:
            raise DiscontinuousMapError(f"Не заданы образы вершин подразбиения: {', '.join(missing[:5])}")
        for p in assignment.values():
            p.check(target)
        self.assignment = dict(assignment)
        self.router = router if router is not None else target_router(target)
        if routes is None:
            routes = []
            for cell in self.grid.cells:
                r = self.router(self.assignment[cell.lower], self.assignment[cell.upper])
                if r is None:
                    raise DiscontinuousMapError(
                        f"Образы {self.assignment[cell.lower]} и {self.assignment[cell.upper]} "
                        f"ячейки ребра {cell.edge} лежат в разных компонентах"
                    )
                routes.append(r)
        self.routes = routes
        self.check()

    @property
    def mesh(self) -> Fraction:
        """Шаг подразбиения."""
        return self.grid.mesh

    def check(self) -> None:
        """Проверка непрерывности: маршрут каждой ячейки соединяет образы её концов,
        соседние точки маршрута лежат на общем замкнутом ребре."""
        if len(self.routes) != len(self.grid.cells):
            raise DiscontinuousMapError("Число маршрутов не совпадает с числом ячеек")
        for cell, route in zip(self.grid.cells, self.routes):
            if not route or route[0] != self.assignment[cell.lower] or route[-1] != self.assignment[cell.upper]:
                raise DiscontinuousMapError(f"Маршрут ячейки ребра {cell.edge} не соединяет образы её концов")
            for a, b in zip(route, route[1:]):
                if not _joinable(self.target, a, b):
                    raise DiscontinuousMapError(f"Точки маршрута {a} и {b} не лежат на общем ребре")

    def with_assignment(self, point: GraphPoint, image: GraphPoint) -> Optional["SubdividedMap"]:
        """Копия с новым образом одной вершины подразбиения; None, если отображение теряет непрерывность."""
        assignment = dict(self.assignment)
        assignment[point] = image
        routes = list(self.routes)
        for i, cell in enumerate(self.grid.cells):
            if point in (cell.lower, cell.upper):
                r = self.router(assignment[cell.lower], assignment[cell.upper])
                if r is None:
                    return None
                routes[i] = r
        return SubdividedMap(self.source, self.target, self.mesh, assignment, routes, self.router)

    def sup_deviation(self) -> Fraction:
        """‖f − g∘φ‖_∞: точно, по вершинам подразбиения (включая изолированные) и точкам излома маршрутов."""
        worst = max(
            (abs(p.value(self.source) - image.value(self.target)) for p, image in self.assignment.items()),
            default=Fraction(0),
        )
        for cell, route in zip(self.grid.cells, self.routes):
            f0, f1 = cell.lower.value(self.source), cell.upper.value(self.source)
            values = [p.value(self.target) for p in route]
            total = route_length(self.target, route)
            travelled = Fraction(0)
            for i, g in enumerate(values):
                if i:
                    travelled += abs(g - values[i - 1])
                lam = travelled / total if total else Fraction(0)
                worst = max(worst, abs(f0 + lam * (f1 - f0) - g))
            if not total:
                worst = max(worst, abs(f1 - values[-1]))
        return worst

    def cell_error(self) -> Fraction:
        """Наибольшая по ячейкам величина (высота ячейки + длина маршрута) / 2."""
        return max(
            ((cell.height + route_length(self.target, route)) / 2 for cell, route in zip(self.grid.cells, self.routes)),
            default=Fraction(0),
        )

    def is_value_preserving_isometry_of(self, inverse: "SubdividedMap") -> bool:
        """Оба отображения сохраняют значения, взаимно обратны на вершинах подразбиений и переводят
        ячейки в монотонные отрезки той же высоты."""
        for first, second in ((self, inverse), (inverse, self)):
            for p, image in first.assignment.items():
                if image.value(first.target) != p.value(first.source):
                    return False
                if second.assignment.get(image) != p:
                    return False
            for cell, route in zip(first.grid.cells, first.routes):
                if route_length(first.target, route) != cell.height:
                    return False
        return True

    def to_list(self) -> list[list[str]]:
        """Таблица образов для JSON: пары (вершина подразбиения, образ)."""
        return [[str(p), str(self.assignment[p])] for p in self.grid.nodes]

    @staticmethod
    def from_list(source: ReebGraph, target: ReebGraph, mesh: Any, rows: Iterable[list[str]]) -> "SubdividedMap":
        """Восстанавливает отображение из таблицы образов (маршруты строятся заново)."""
        assignment = {parse_point(a): parse_point(b) for a, b in rows}
        return SubdividedMap(source, target, mesh, assignment)


def from_isomorphism(source: ReebGraph, target: ReebGraph, iso: IsomorphismResult, mesh: Any) -> SubdividedMap:
    """Отображение, индуцированное изоморфизмом с сохранением функции."""
    if not iso.is_isomorphic or iso.vertex_map is None or iso.edge_map is None:
        raise ValueError("Нужен изоморфизм с соответствием вершин и рёбер")
    grid = Mesh(source, mesh)
    assignment: dict[GraphPoint, GraphPoint] = {}
    for p in grid.nodes:
        if p.vertex is not None:
            assignment[p] = GraphPoint.at(iso.vertex_map[p.vertex])
        else:
            assignment[p] = GraphPoint.on(iso.edge_map[p.edge], p.s)  # type: ignore[index]
    return SubdividedMap(source, target, mesh, assignment)


def inverse_isomorphism(iso: IsomorphismResult) -> IsomorphismResult:
    """Обратный изоморфизм."""
    assert iso.vertex_map is not None and iso.edge_map is not None
    return IsomorphismResult(
        True,
        {b: a for a, b in iso.vertex_map.items()},
        {b: a for a, b in iso.edge_map.items()},
    )


def components_of(graph: ReebGraph) -> list[list[Cell]]:
    """Компоненты связности графа, упорядоченные по (минимум, максимум, размер)."""
    uf: UnionFind[Cell] = truncated_components(graph, None, None)
    groups = [g for g in uf.groups() if any(c[0] == "v" for c in g)]

    def key(group: list[Cell]) -> tuple:
        values = [graph.value(c[1]) for c in group if c[0] == "v"]
        return (min(values), max(values), len(group), min(group))

    return sorted(groups, key=key)


class LevelStrategy:
    """Выбор целевого уровня для точки со значением a."""

    CLAMP = "clamp"
    RESCALE = "rescale"


def level_seed(
    source: ReebGraph,
    target: ReebGraph,
    mesh: Any,
    strategy: str,
    metric: Optional[PathHeightMetric] = None,
) -> Optional[SubdividedMap]:
    """Начальное отображение: уровни переносятся стратегией CLAMP (обрезка к диапазону компоненты-образа)
    или RESCALE (аффинное растяжение диапазона), а точка на уровне выбирается жадно, ближайшей по d_g
    к образу уже обработанного соседа. Компоненты сопоставляются по порядку (минимум, максимум, размер).
    Возвращает None, если число компонент различается."""
    src_components = components_of(source)
    tgt_components = components_of(target)
    if len(src_components) != len(tgt_components):
        return None
    metric = metric if metric is not None else PathHeightMetric(target)
    grid = Mesh(source, mesh)
    cell_component: dict[Cell, int] = {}
    for i, group in enumerate(src_components):
        for c in group:
            cell_component[c] = i
    assignment: dict[GraphPoint, GraphPoint] = {}
    for i, (src_group, tgt_group) in enumerate(zip(src_components, tgt_components)):
        src_values = [source.value(c[1]) for c in src_group if c[0] == "v"]
        tgt_values = [target.value(c[1]) for c in tgt_group if c[0] == "v"]
        a_lo, a_hi = min(src_values), max(src_values)
        b_lo, b_hi = min(tgt_values), max(tgt_values)
        tgt_cells = set(tgt_group)

        def level(a: Fraction) -> Fraction:
            if strategy == LevelStrategy.RESCALE and a_hi > a_lo:
                return b_lo + (a - a_lo) * (b_hi - b_lo) / (a_hi - a_lo)
            if strategy == LevelStrategy.RESCALE:
                return (b_lo + b_hi) / 2
            return min(max(a, b_lo), b_hi)

        nodes = [p for p in grid.nodes if cell_component[point_cell(p)] == i]
        root = min(nodes, key=lambda p: (grid.value(p), str(p)))
        queue: deque[tuple[GraphPoint, Optional[GraphPoint]]] = deque([(root, None)])
        seen = {root}
        while queue:
            p, parent = queue.popleft()
            candidates = [q for q in points_at_level(target, level(grid.value(p))) if point_cell(q) in tgt_cells]
            if parent is None:
                assignment[p] = candidates[0]
            else:
                anchor = assignment[parent]
                assignment[p] = min(candidates, key=lambda q: metric.distance(anchor, q))
            for nb in grid.neighbors[p]:
                if nb not in seen:
                    seen.add(nb)
                    queue.append((nb, p))
    return SubdividedMap(source, target, mesh, assignment)


def map_pair_to_dict(phi: SubdividedMap, psi: SubdividedMap) -> dict[str, Any]:
    """Пара отображений для JSON."""
    return {
        "mesh": exact_str(phi.mesh),
        "phi": phi.to_list(),
        "psi": psi.to_list(),
    }


def map_pair_from_dict(x: ReebGraph, y: ReebGraph, data: dict) -> tuple[SubdividedMap, SubdividedMap]:
    """Восстанавливает пару отображений из JSON."""
    mesh = parse_exact(str(data["mesh"]))
    return (
        SubdividedMap.from_list(x, y, mesh, data["phi"]),
        SubdividedMap.from_list(y, x, mesh, data["psi"]),
    )
