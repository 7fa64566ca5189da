"""Псевдометрика высоты путей d_f на графе Риба.

d_f(p, q) есть наименьшая длина отрезка [a, b], для которого p и q лежат в одной компоненте
связности f⁻¹([a, b]). Концы отрезка достаточно перебирать среди значений в вершинах и f(p), f(q).
"""

from bisect import bisect_left
from fractions import Fraction
import logging
import math
import re

from pyreeb.util import UnionFind, ValueParseError, parse_exact

from .reeb import Cell, GraphPoint, ReebGraph, ReebGraphError, point_cell, truncated_components

logger = logging.getLogger(__name__)

DISCONNECTED = math.inf  # точки в разных компонентах графа

_POINT_RE = re.compile(r"^(?:v(\d+)|e(\d+):(\S+))$")


def parse_point(text: str) -> GraphPoint:
    """Разбирает запись точки: `v<id>` или `e<id>:<s>` с 0 < s < 1 (s десятичное или `p/q`)."""
    m = _POINT_RE.match(text.strip())
    if not m:
        raise ReebGraphError(f"Некорректная запись точки: {text!r} (ожидается v<id> или e<id>:<s>)")
    if m.group(1) is not None:
        return GraphPoint.at(int(m.group(1)))
    try:
        s = parse_exact(m.group(3))
    except ValueParseError as e:
        raise ReebGraphError(f"Некорректный параметр точки: {text!r}") from e
    return GraphPoint.on(int(m.group(2)), s)


class PathHeightMetric:
    """d_f для многих запросов к одному графу.

    Компоненты f⁻¹([a, b]) зависят только от классов уровней a и b относительно значений в вершинах
    (совпадение со значением или попадание в промежуток между ними), поэтому разбиения
    кешируются по паре классов.
    """

    def __init__(self, graph: ReebGraph):
        self.graph = graph
        self.levels: list[Fraction] = graph.critical_values
        self._cache: dict[tuple[int, int], UnionFind[Cell]] = {}
        self._whole = truncated_components(graph, None, None)

    def level_class(self, a: Fraction) -> int:
        """Класс уровня: 2i для значения c_i, нечётные числа для промежутков, −1 ниже минимума."""
        i = bisect_left(self.levels, a)
        if i < len(self.levels) and self.levels[i] == a:
            return 2 * i
        return 2 * i - 1

    def components(self, a: Fraction, b: Fraction) -> UnionFind[Cell]:
        """Разбиение ячеек f⁻¹([a, b]) на компоненты."""
        key = (self.level_class(a), self.level_class(b))
        uf = self._cache.get(key)
        if uf is None:
            uf = truncated_components(self.graph, a, b)
            self._cache[key] = uf
        return uf

    def distance(self, p: GraphPoint, q: GraphPoint) -> Fraction | float:
        """d_f(p, q); DISCONNECTED (бесконечность) для точек из разных компонент графа."""
        fp, fq = p.value(self.graph), q.value(self.graph)
        if p == q:
            return Fraction(0)
        cp, cq = point_cell(p), point_cell(q)
        if not self._whole.same(cp, cq):
            return DISCONNECTED
        lo, hi = min(fp, fq), max(fp, fq)
        lows = sorted({c for c in self.levels if c <= lo} | {lo}, reverse=True)
        highs = sorted({c for c in self.levels if c >= hi} | {hi})
        candidates = sorted(((b - a, a, b) for a in lows for b in highs), key=lambda t: t[0])
        for width, a, b in candidates:
            if self.components(a, b).same(cp, cq):
                return width
        # отрезок на весь диапазон связывает точки одной компоненты
        raise ReebGraphError(f"Не найден связывающий отрезок для {p} и {q}")


def d_f(graph: ReebGraph, p: GraphPoint, q: GraphPoint) -> Fraction | float:
    """Псевдометрика высоты путей между двумя точками графа."""
    p.check(graph)
    q.check(graph)
    return PathHeightMetric(graph).distance(p, q)
