from fractions import Fraction
import math

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from pyreeb.generate import generate_random_reeb
from pyreeb.graph import (
    GraphPoint,
    PathHeightMetric,
    ReebGraph,
    ReebGraphError,
    d_f,
    disjoint_union,
    edge_graph,
    loop_graph,
    parse_point,
)
from tests.oracles import df_bruteforce


def _sample_points(graph: ReebGraph) -> list[GraphPoint]:
    return [GraphPoint.at(v.id) for v in graph.vertices] + [GraphPoint.on(e.id, "0.5") for e in graph.edges]


class TestParsePoint:
    """Тесты записи точек графа"""

    def test_parse(self):
        """Вершины и точки рёбер"""
        assert parse_point("v3") == GraphPoint.at(3)
        assert parse_point("e2:0.25") == GraphPoint.on(2, "0.25")
        assert parse_point("e0:1/3") == GraphPoint.on(0, Fraction(1, 3))
        assert str(GraphPoint.on(0, Fraction(1, 3))) == "e0:1/3"

    def test_errors(self):
        """Некорректные записи"""
        for text in ("x1", "v", "e1", "e1:1", "e1:0", "e1:abc"):
            with pytest.raises(ReebGraphError):
                parse_point(text)


class TestPathHeightMetric:
    """Тесты псевдометрики высоты путей"""

    def test_edge(self):
        """На одном ребре расстояние равно разности значений"""
        g = edge_graph(0, 2)
        assert d_f(g, GraphPoint.at(0), GraphPoint.at(1)) == 2
        assert d_f(g, GraphPoint.on(0, "0.25"), GraphPoint.on(0, "0.75")) == 1
        assert d_f(g, GraphPoint.at(1), GraphPoint.at(1)) == 0

    def test_loop_sides(self):
        """Точки на разных сторонах петли соединяются через вершину"""
        g = loop_graph(0, 1)
        assert d_f(g, GraphPoint.on(0, "0.5"), GraphPoint.on(1, "0.5")) == Fraction(1, 2)
        assert d_f(g, GraphPoint.on(0, "0.25"), GraphPoint.on(1, "0.5")) == Fraction(1, 2)

    def test_disconnected(self):
        """Точки разных компонент находятся на бесконечном расстоянии"""
        g = disjoint_union(edge_graph(0, 1), edge_graph(0, 1))
        assert math.isinf(d_f(g, GraphPoint.at(0), GraphPoint.at(2)))

    def test_missing_point(self):
        """Точка вне графа"""
        with pytest.raises(ReebGraphError):
            d_f(edge_graph(0, 1), GraphPoint.at(0), GraphPoint.at(9))

    def test_symmetric(self):
        """Симметричность на графе с двумя ветвями"""
        g = ReebGraph.from_lists([(0, 0), (1, 1), (2, 3)], [(0, 0, 2), (1, 1, 2)])
        metric = PathHeightMetric(g)
        p, q = GraphPoint.at(0), GraphPoint.at(1)
        assert metric.distance(p, q) == metric.distance(q, p) == 3

    @given(st.integers(2, 6), st.integers(0, 2), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_matches_bruteforce(self, n, loops, seed):
        """Совпадение с перебором простых путей"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        metric = PathHeightMetric(g)
        points = _sample_points(g)
        for p in points:
            for q in points:
                assert metric.distance(p, q) == df_bruteforce(g, p, q)

    @given(st.integers(2, 6), st.integers(0, 2), st.integers(0, 10**6))
    @settings(max_examples=20, deadline=None)
    def test_triangle_inequality(self, n, loops, seed):
        """Неравенство треугольника"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        metric = PathHeightMetric(g)
        points = _sample_points(g)
        for p in points:
            for q in points:
                for r in points:
                    assert metric.distance(p, r) <= metric.distance(p, q) + metric.distance(q, r)
