"""Расстояние bottleneck между диаграммами устойчивости."""

from fractions import Fraction
import logging

import networkx as nx
from networkx.algorithms import bipartite

from .diagram import DiagramPoint, PersistenceDiagram

logger = logging.getLogger(__name__)


def point_cost(p: DiagramPoint, q: DiagramPoint) -> Fraction:
    """Расстояние в норме ∞ между точками (ориентация пары не учитывается)."""
    return max(abs(p.birth - q.birth), abs(p.death - q.death))


def matching_feasible(first: PersistenceDiagram, second: PersistenceDiagram, r: Fraction) -> bool:
    """Есть ли частичное сопоставление стоимости не больше r.

    Двудольный граф: слева точки первой диаграммы и диагональные копии точек второй, справа точки
    второй и диагональные копии точек первой. Стоимость допустима, если есть совершенное паросочетание.
    """
    a, b = first.points, second.points
    g = nx.Graph()
    left = [("a", i) for i in range(len(a))] + [("b'", j) for j in range(len(b))]
    right = [("b", j) for j in range(len(b))] + [("a'", i) for i in range(len(a))]
    g.add_nodes_from(left, bipartite=0)
    g.add_nodes_from(right, bipartite=1)
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            if point_cost(p, q) <= r:
                g.add_edge(("a", i), ("b", j))
        if p.persistence <= r:
            g.add_edge(("a", i), ("a'", i))
    for j, q in enumerate(b):
        if q.persistence <= r:
            g.add_edge(("b'", j), ("b", j))
        for i in range(len(a)):
            g.add_edge(("b'", j), ("a'", i))
    matching = bipartite.hopcroft_karp_matching(g, top_nodes=left)
    return len(matching) // 2 == len(left)


def bottleneck(first: PersistenceDiagram, second: PersistenceDiagram) -> Fraction:
    """Расстояние bottleneck: наименьшая стоимость среди кандидатов (попарные расстояния и
    расстояния до диагонали), при которой существует сопоставление. Поиск делением пополам."""
    candidates = {Fraction(0)}
    candidates.update(p.persistence for p in first.points + second.points)
    candidates.update(point_cost(p, q) for p in first.points for q in second.points)
    ordered = sorted(candidates)
    lo, hi = 0, len(ordered) - 1
    # при наибольшем кандидате все точки можно отправить на диагональ
    while lo < hi:
        mid = (lo + hi) // 2
        if matching_feasible(first, second, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    logger.debug("bottleneck: %d и %d точек, %d кандидатов -> %s", len(first), len(second), len(ordered), ordered[lo])
    return ordered[lo]
