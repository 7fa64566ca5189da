from fractions import Fraction
import math

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from pyreeb.distortion import (
    DiscontinuousMapError,
    LevelStrategy,
    Mesh,
    SubdividedMap,
    best_map_pair,
    components_of,
    evaluate_pair,
    fdd_bounds,
    fdd_lower_bound,
    fdd_upper_bound,
    from_isomorphism,
    inverse_isomorphism,
    level_seed,
    map_pair_from_dict,
    map_pair_to_dict,
    replay_map_pair,
    route_length,
    target_router,
    validate_map_pair,
)
from pyreeb.generate import generate_random_reeb
from pyreeb.graph import GraphPoint, ReebGraph, disjoint_union, edge_graph, is_isomorphic, loop_graph
from pyreeb.interval import BoundInterval

QUARTER = Fraction(1, 4)


def _edge_to_edge_pair() -> tuple[SubdividedMap, SubdividedMap]:
    """X = [0, 1], Y = [0, 2]; φ сохраняет значения, ψ делит значение пополам."""
    x, y = edge_graph(0, 1), edge_graph(0, 2)
    phi = {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.on(0, "0.5")}
    for i in range(1, 4):
        phi[GraphPoint.on(0, Fraction(i, 4))] = GraphPoint.on(0, Fraction(i, 8))
    psi = {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.at(1)}
    for i in range(1, 8):
        psi[GraphPoint.on(0, Fraction(i, 8))] = GraphPoint.on(0, Fraction(i, 8))
    return SubdividedMap(x, y, QUARTER, phi), SubdividedMap(y, x, QUARTER, psi)


def _loop_to_edge_pair() -> tuple[SubdividedMap, SubdividedMap]:
    """Петля стягивается на ребро, ребро вкладывается в первую сторону петли."""
    x, y = loop_graph(0, 1), edge_graph(0, 1)
    phi = {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.at(1)}
    psi = dict(phi)
    for i in range(1, 4):
        s = Fraction(i, 4)
        phi[GraphPoint.on(0, s)] = GraphPoint.on(0, s)
        phi[GraphPoint.on(1, s)] = GraphPoint.on(0, s)
        psi[GraphPoint.on(0, s)] = GraphPoint.on(0, s)
    return SubdividedMap(x, y, QUARTER, phi), SubdividedMap(y, x, QUARTER, psi)


class TestMesh:
    """Тесты подразбиения"""

    def test_cells(self):
        """Ребро высоты 1 с шагом 1/4 делится на четыре ячейки"""
        grid = Mesh(edge_graph(0, 1), QUARTER)
        assert len(grid.cells) == 4
        assert all(cell.height == QUARTER for cell in grid.cells)
        assert grid.nodes[:2] == [GraphPoint.at(0), GraphPoint.at(1)]
        assert len(grid.neighbors[GraphPoint.on(0, "0.5")]) == 2

    def test_uneven_height(self):
        """Шаг не больше заданного: высота 1 при шаге 0.3 даёт четыре ячейки"""
        grid = Mesh(edge_graph(0, 1), "0.3")
        assert [c.height for c in grid.cells] == [QUARTER] * 4

    def test_bad_mesh(self):
        """Шаг должен быть положительным"""
        with pytest.raises(ValueError):
            Mesh(edge_graph(0, 1), 0)


class TestRouter:
    """Тесты маршрутов в целевом графе"""

    def test_routes(self):
        """Маршрут по ребру и через вершину"""
        y = loop_graph(0, 1)
        route = target_router(y)
        p, q = GraphPoint.on(0, "0.5"), GraphPoint.on(1, "0.25")
        assert route(p, GraphPoint.on(0, "0.75")) == [p, GraphPoint.on(0, "0.75")]
        path = route(p, q)
        assert path is not None
        assert path[1] == GraphPoint.at(0)
        assert route_length(y, path) == Fraction(3, 4)

    def test_no_route(self):
        """Между компонентами маршрута нет"""
        y = disjoint_union(edge_graph(0, 1), edge_graph(0, 1))
        assert target_router(y)(GraphPoint.at(0), GraphPoint.at(3)) is None


class TestSubdividedMap:
    """Тесты отображений на подразбиении"""

    def test_isolated_vertex_deviation(self):
        """Изолированная вершина учитывается в равномерной норме"""
        x = ReebGraph.from_lists([(0, 0)], [])
        y = ReebGraph.from_lists([(0, 1)], [])
        phi = SubdividedMap(x, y, "0.25", {GraphPoint.at(0): GraphPoint.at(0)})
        assert phi.sup_deviation() == 1
        assert phi.cell_error() == 0

    def test_missing_images(self):
        """Все вершины подразбиения должны иметь образ"""
        with pytest.raises(DiscontinuousMapError):
            SubdividedMap(edge_graph(0, 1), edge_graph(0, 1), 1, {GraphPoint.at(0): GraphPoint.at(0)})

    def test_discontinuous(self):
        """Образы концов ячейки в разных компонентах"""
        y = disjoint_union(edge_graph(0, 1), edge_graph(0, 1))
        assignment = {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.at(3)}
        with pytest.raises(DiscontinuousMapError):
            SubdividedMap(edge_graph(0, 1), y, 1, assignment)

    def test_bad_route(self):
        """Явный маршрут должен идти по рёбрам"""
        x, y = edge_graph(0, 1), edge_graph(0, 1)
        assignment = {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.at(1)}
        with pytest.raises(DiscontinuousMapError):
            SubdividedMap(x, y, 1, assignment, routes=[[GraphPoint.at(1), GraphPoint.at(0)]])

    def test_deviation_and_cell_error(self):
        """Равномерная норма и поячеечная погрешность"""
        phi, psi = _edge_to_edge_pair()
        assert phi.sup_deviation() == 0
        assert psi.sup_deviation() == 1
        assert phi.cell_error() == QUARTER
        assert psi.cell_error() == Fraction(3, 16)

    def test_with_assignment(self):
        """Замена образа одной вершины"""
        phi, _ = _loop_to_edge_pair()
        moved = phi.with_assignment(GraphPoint.on(1, "0.5"), GraphPoint.on(0, "0.75"))
        assert moved is not None
        assert moved.assignment[GraphPoint.on(1, "0.5")] == GraphPoint.on(0, "0.75")
        assert phi.assignment[GraphPoint.on(1, "0.5")] == GraphPoint.on(0, "0.5")
        assert moved.sup_deviation() == QUARTER

    def test_list_roundtrip(self):
        """Таблица образов восстанавливает отображение"""
        phi, psi = _edge_to_edge_pair()
        data = map_pair_to_dict(phi, psi)
        assert data["mesh"] == "0.25"
        validate_map_pair(data)
        phi2, psi2 = map_pair_from_dict(phi.source, phi.target, data)
        assert phi2.assignment == phi.assignment
        assert psi2.assignment == psi.assignment


class TestEvaluatePair:
    """Тесты целевой функции"""

    def test_edge_to_longer_edge(self):
        """X = [0, 1], Y = [0, 2]: D = 1/2, нормы 0 и 1, погрешность 7/16"""
        ev = evaluate_pair(*_edge_to_edge_pair())
        assert ev.distortion == Fraction(1, 2)
        assert (ev.sup_fg, ev.sup_gf) == (0, 1)
        assert ev.objective == 1
        assert ev.mesh_error == Fraction(7, 16)
        assert ev.certified == Fraction(23, 16)
        assert ev.to_dict()["certified"] == "1.4375"

    def test_loop_collapse(self):
        """Стягивание петли высоты 1: D = 1/4"""
        ev = evaluate_pair(*_loop_to_edge_pair())
        assert ev.distortion == QUARTER
        assert (ev.sup_fg, ev.sup_gf) == (0, 0)
        assert ev.mesh_error == Fraction(1, 2)
        assert ev.certified == Fraction(3, 4)

    def test_isomorphism_exact(self):
        """Изоморфизм даёт нулевую оценку без погрешности"""
        g = generate_random_reeb(6, 2, 7)
        iso = is_isomorphic(g, g)
        phi = from_isomorphism(g, g, iso, "0.1")
        psi = from_isomorphism(g, g, inverse_isomorphism(iso), "0.1")
        assert phi.is_value_preserving_isometry_of(psi)
        ev = evaluate_pair(phi, psi)
        assert ev.objective == 0
        assert ev.mesh_error == 0

    def test_wrong_direction(self):
        """Отображения пары должны идти навстречу друг другу"""
        phi, _ = _edge_to_edge_pair()
        with pytest.raises(DiscontinuousMapError):
            evaluate_pair(phi, phi)

    def test_disconnected_distortion(self):
        """Склейка двух компонент в одну даёт бесконечное искажение"""
        x = disjoint_union(edge_graph(0, 1), edge_graph(0, 1))
        y = edge_graph(0, 1)
        phi_map = {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.at(1)}
        phi_map |= {GraphPoint.at(2): GraphPoint.at(0), GraphPoint.at(3): GraphPoint.at(1)}
        phi = SubdividedMap(x, y, 1, phi_map)
        psi = SubdividedMap(y, x, 1, {GraphPoint.at(0): GraphPoint.at(0), GraphPoint.at(1): GraphPoint.at(1)})
        ev = evaluate_pair(phi, psi)
        assert math.isinf(ev.distortion)
        assert math.isinf(ev.certified)


class TestSeeds:
    """Тесты начальных отображений"""

    def test_components_order(self):
        """Компоненты упорядочены по минимуму и максимуму"""
        g = disjoint_union(edge_graph(5, 6), edge_graph(0, 1))
        groups = components_of(g)
        assert [min(g.value(c[1]) for c in grp if c[0] == "v") for grp in groups] == [0, 5]

    def test_component_mismatch(self):
        """Разное число компонент: начального отображения нет"""
        x = disjoint_union(edge_graph(0, 1), edge_graph(0, 1))
        assert level_seed(x, edge_graph(0, 1), QUARTER, LevelStrategy.CLAMP) is None
        assert best_map_pair(x, edge_graph(0, 1)) is None

    def test_clamp_preserves_values(self):
        """CLAMP сохраняет значения внутри общего диапазона"""
        phi = level_seed(edge_graph(0, 1), edge_graph(0, 2), QUARTER, LevelStrategy.CLAMP)
        assert phi is not None
        assert phi.sup_deviation() == 0

    def test_rescale(self):
        """RESCALE растягивает диапазон"""
        phi = level_seed(edge_graph(0, 1), edge_graph(0, 2), QUARTER, LevelStrategy.RESCALE)
        assert phi is not None
        assert phi.assignment[GraphPoint.at(1)] == GraphPoint.at(1)
        assert phi.sup_deviation() == 1

    @given(st.integers(2, 6), st.integers(0, 2), st.integers(0, 10**6), st.integers(0, 10**6))
    @settings(max_examples=20, deadline=None)
    def test_seeds_are_continuous(self, n, loops, seed_a, seed_b):
        """Начальные отображения непрерывны для графов с одинаковым числом компонент"""
        x = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed_a)
        y = generate_random_reeb(n + 1, 0, seed_b)
        for strategy in (LevelStrategy.CLAMP, LevelStrategy.RESCALE):
            phi = level_seed(x, y, "0.1", strategy)
            assert phi is not None
            phi.check()


class TestFddBounds:
    """Тесты оценок функционального искажения"""

    def test_edges_clamp(self):
        """Рёбра [0, 1] и [0, 2]: верхняя оценка 11/10 от CLAMP, нижняя 1 от dB0"""
        x, y = edge_graph(0, 1), edge_graph(0, 2)
        upper = fdd_upper_bound(x, y, budget=0)
        assert upper.hi == Fraction(11, 10)
        assert upper.hi_provenance == "clamp"
        lower = fdd_lower_bound(x, y)
        assert lower.lo == 1
        assert lower.lo_provenance == "dB0"
        assert math.isinf(lower.hi)

    def test_loop_vs_edge(self):
        """Петля и ребро: нижняя оценка от d_I около 1/4, верхняя не больше 7/20"""
        bounds = fdd_bounds(loop_graph(0, 1), edge_graph(0, 1), budget=20)
        assert bounds.lo_provenance == "dI"
        assert Fraction(249, 1000) <= bounds.lo <= QUARTER
        assert bounds.hi <= Fraction(7, 20)
        assert bounds.consistent()
        assert {"dI", "mappair", "evaluation"} <= set(bounds.certificates)

    def test_isolated_vertices(self):
        """Точки на уровнях 0 и 1: интервал содержит 1 и согласован"""
        x = ReebGraph.from_lists([(0, 0)], [])
        y = ReebGraph.from_lists([(0, 1)], [])
        upper = fdd_upper_bound(x, y)
        assert upper.hi == 1
        bounds = fdd_bounds(x, y)
        assert bounds.contains(1)
        assert bounds.consistent()

    def test_identical(self):
        """Изоморфные графы: верхняя оценка 0"""
        g = generate_random_reeb(5, 1, 11)
        upper = fdd_upper_bound(g, g)
        assert upper.hi == 0
        assert upper.hi_provenance == "isomorphism"

    def test_components(self):
        """Разное число компонент: верхней оценки нет"""
        x = disjoint_union(edge_graph(0, 1), edge_graph(0, 1))
        upper = fdd_upper_bound(x, edge_graph(0, 1))
        assert math.isinf(upper.hi)
        assert upper.hi_provenance == "components"

    def test_precomputed_interleaving(self):
        """Готовая оценка d_I используется без пересчёта"""
        lower = fdd_lower_bound(loop_graph(0, 1), edge_graph(0, 1), interleaving=BoundInterval(Fraction(1, 5), QUARTER))
        assert lower.lo == Fraction(1, 5)
        undecided = BoundInterval(Fraction(0), 1, undecided=True)
        lower = fdd_lower_bound(loop_graph(0, 1), edge_graph(0, 1), interleaving=undecided)
        assert lower.lo == Fraction(1, 6)
        assert lower.lo_provenance == "dB1/3"
        assert lower.undecided

    def test_search_monotone(self):
        """Больший бюджет поиска при том же зерне не ухудшает оценку"""
        x = generate_random_reeb(5, 1, 3)
        y = generate_random_reeb(5, 1, 4)
        short = fdd_upper_bound(x, y, mesh="0.1", budget=10, seed=5)
        long = fdd_upper_bound(x, y, mesh="0.1", budget=30, seed=5)
        assert long.hi <= short.hi
        assert fdd_upper_bound(x, y, mesh="0.1", budget=30, seed=5).hi == long.hi

    def test_replay(self):
        """Повторная проверка сертификата даёт ту же оценку"""
        x = generate_random_reeb(5, 1, 3)
        y = generate_random_reeb(4, 1, 9)
        upper = fdd_upper_bound(x, y, mesh="0.1", budget=15, seed=2)
        assert replay_map_pair(x, y, upper.certificates["mappair"]).certified == upper.hi

    def test_bad_certificate(self):
        """Сертификат, не соответствующий схеме"""
        with pytest.raises(ValueError):
            validate_map_pair({"mesh": "1/0x", "phi": [], "psi": []})
        with pytest.raises(ValueError):
            replay_map_pair(edge_graph(0, 1), edge_graph(0, 1), {"mesh": "0.5", "phi": [["v0"]], "psi": []})

