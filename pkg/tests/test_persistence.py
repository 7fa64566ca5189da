from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from pyreeb.cosheaf import cosheaf_of, d_I_bounds
from pyreeb.generate import generate_random_reeb
from pyreeb.graph import ReebGraph, betti_numbers, disjoint_union, edge_graph, loop_graph
from pyreeb.persistence import (
    DiagramPoint,
    PairKind,
    PersistenceDiagram,
    bottleneck,
    extended_diagrams,
    extended_persistence,
    read_diagram,
    write_diagram,
)
from tests.oracles import bottleneck_bruteforce

_values = st.integers(0, 20).map(lambda k: Fraction(k, 4))
_pairs = st.lists(st.tuples(_values, _values), max_size=3)


class TestExtendedPersistence:
    """Тесты расширенной устойчивости"""

    def test_edge(self):
        """Ребро: одна расширенная пара размерности 0"""
        ep = extended_persistence(edge_graph(0, 1))
        assert ep.dg0 == PersistenceDiagram.from_pairs([(0, 1)])
        assert len(ep.exdg1) == 0

    def test_loop(self):
        """Петля: расширенная пара (1, 0) размерности 1"""
        dg0, exdg1 = extended_diagrams(loop_graph(0, 1))
        assert dg0 == PersistenceDiagram.from_pairs([(0, 1)])
        assert exdg1 == PersistenceDiagram.from_pairs([(1, 0)], dim=1)

    def test_ordinary_pair(self):
        """Два спуска к общему максимуму дают обычную пару размерности 0"""
        merged = ReebGraph.from_lists([(0, 0), (1, 1), (2, 3)], [(0, 0, 2), (1, 1, 2)])
        ep = extended_persistence(merged)
        assert ep.ordinary0 == PersistenceDiagram.from_pairs([(1, 3)], kind=PairKind.ORDINARY)
        assert ep.extended0 == PersistenceDiagram.from_pairs([(0, 3)])

    def test_disconnected(self):
        """По расширенной паре на каждую компоненту"""
        g = disjoint_union(edge_graph(0, 3), edge_graph(1, 2))
        assert extended_persistence(g).extended0 == PersistenceDiagram.from_pairs([(0, 3), (1, 2)])

    @given(st.integers(2, 7), st.integers(0, 3), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_counts(self, n, loops, seed):
        """По одной расширенной паре на компоненту и на независимый цикл"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        ep = extended_persistence(g)
        components, cycles = betti_numbers(g)
        assert len(ep.extended0) == components
        assert len(ep.exdg1) == cycles
        lo, hi = g.value_range
        assert ep.extended0 == PersistenceDiagram.from_pairs([(lo, hi)])


class TestBottleneck:
    """Тесты расстояния bottleneck"""

    def test_to_diagonal(self):
        """Одна точка против пустой диаграммы"""
        assert bottleneck(PersistenceDiagram.from_pairs([(1, 0)], dim=1), PersistenceDiagram()) == Fraction(1, 2)

    def test_matched(self):
        """Сопоставление двух точек"""
        a = PersistenceDiagram.from_pairs([(0, 1)])
        b = PersistenceDiagram.from_pairs([(0, 2)])
        assert bottleneck(a, b) == 1
        assert bottleneck(a, a) == 0
        assert bottleneck(PersistenceDiagram(), PersistenceDiagram()) == 0

    @given(_pairs, _pairs)
    @settings(max_examples=60, deadline=None)
    def test_matches_bruteforce(self, first, second):
        """Совпадение с перебором сопоставлений"""
        a, b = PersistenceDiagram.from_pairs(first), PersistenceDiagram.from_pairs(second)
        assert bottleneck(a, b) == bottleneck_bruteforce(a, b)
        assert bottleneck(a, b) == bottleneck(b, a)

    @given(_pairs, st.integers(-8, 8))
    @settings(max_examples=30, deadline=None)
    def test_shift(self, pairs, k):
        """Сдвиг диаграммы на (c, c) меняет расстояние не больше чем на |c|"""
        a = PersistenceDiagram.from_pairs(pairs)
        c = Fraction(k, 4)
        assert bottleneck(a, a.shifted(c)) <= abs(c)

    @pytest.mark.slow
    @given(st.integers(2, 5), st.integers(0, 2), st.integers(0, 10**6), st.integers(0, 10**6))
    @settings(max_examples=10, deadline=None)
    def test_stability_against_interleaving(self, n, loops, seed_a, seed_b):
        """dB(Dg0) ≤ 7·d_I и dB(ExDg1) ≤ 21·d_I по верхней границе d_I"""
        x = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed_a)
        y = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed_b)
        d_i = d_I_bounds(cosheaf_of(x), cosheaf_of(y), tolerance="0.01")
        dg0_x, ex1_x = extended_diagrams(x)
        dg0_y, ex1_y = extended_diagrams(y)
        slack = Fraction(1, 10**9)
        assert bottleneck(dg0_x, dg0_y) <= 7 * d_i.hi + slack
        assert bottleneck(ex1_x, ex1_y) <= 21 * d_i.hi + slack


class TestDiagramFile:
    """Тесты JSON-представления диаграмм"""

    def test_write_read(self, tmp_path):
        """Запись и чтение файла"""
        path = tmp_path / "dg.json"
        ep = extended_persistence(loop_graph(0, "0.5"))
        write_diagram(ep.all, str(path))
        assert read_diagram(str(path)) == ep.all

    def test_string_values(self):
        """Значения можно задавать строками"""
        dg = PersistenceDiagram.from_dict({"points": [{"dim": 1, "kind": "ext", "birth": "0.75", "death": 0}]})
        assert dg.points == (DiagramPoint(Fraction(3, 4), Fraction(0), 1, PairKind.EXTENDED),)

    def test_schema_errors(self):
        """Нарушения схемы"""
        with pytest.raises(ValueError):
            PersistenceDiagram.from_dict({"points": [{"dim": 2, "kind": "ext", "birth": 0, "death": 1}]})
        with pytest.raises(ValueError):
            PersistenceDiagram.from_dict({})

    def test_restrict(self):
        """Классы dim0 и ext1"""
        ep = extended_persistence(loop_graph(0, 1))
        assert ep.all.restrict("dim0") == ep.dg0
        assert ep.all.restrict("ext1") == ep.exdg1
        with pytest.raises(ValueError):
            ep.all.restrict("dim2")
