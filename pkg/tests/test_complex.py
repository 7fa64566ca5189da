from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from pyreeb.generate import generate_random_reeb
from pyreeb.graph import (
    ComplexParseError,
    PLComplex,
    ReebGraph,
    complex_of_graph,
    edge_graph,
    is_isomorphic,
    loop_graph,
    parse_complex,
    points_at_level,
    prism_complex,
    reeb_of_complex,
)
from tests.oracles import level_set_components

TRIANGLE = """\
v 0 0
v 1 1
v 2 2
f 0 1
f 1 2
f 0 2
"""


class TestParseComplex:
    """Тесты формата .plc"""

    def test_parse(self):
        """Вершины, рёбра и треугольники"""
        plc = parse_complex(TRIANGLE + "t 2 0 1\n")
        assert plc.values == {0: 0, 1: 1, 2: 2}
        assert plc.edges == ((0, 1), (0, 2), (1, 2))
        assert plc.triangles == ((0, 1, 2),)

    def test_missing_face(self):
        """Треугольник без объявленного ребра отвергается с позицией строки"""
        text = "v 0 0\nv 1 1\nv 2 2\nf 0 1\nt 0 1 2\n"
        with pytest.raises(ComplexParseError) as info:
            parse_complex(text)
        assert (info.value.line, info.value.column) == (5, 1)
        assert "(0, 2)" in str(info.value)

    def test_lenient_completes_faces(self):
        """В мягком режиме недостающие рёбра достраиваются"""
        plc = parse_complex("v 0 0\nv 1 1\nv 2 2\nt 0 1 2\n", lenient=True)
        assert plc.edges == ((0, 1), (0, 2), (1, 2))

    def test_errors(self):
        """Дубликаты, висячие ссылки, вырожденные симплексы, неверная арность"""
        with pytest.raises(ComplexParseError, match=r"^2:3:"):
            parse_complex("v 0 0\nv 0 1\n")
        with pytest.raises(ComplexParseError, match="отсутствующую вершину"):
            parse_complex("v 0 0\nf 0 1\n")
        with pytest.raises(ComplexParseError, match="вырожденный"):
            parse_complex("v 0 0\nf 0 0\n")
        with pytest.raises(ComplexParseError, match="повторное ребро"):
            parse_complex("v 0 0\nv 1 1\nf 0 1\nf 1 0\n")
        with pytest.raises(ComplexParseError, match=r"^1:1:"):
            parse_complex("t 0 1\n")
        with pytest.raises(ComplexParseError, match=r"^1:3:"):
            parse_complex("v x 0\n")


class TestReebOfComplex:
    """Тесты построения графа Риба комплекса"""

    def test_path_with_interior_max(self):
        """Путь со значениями 0, 2, 1: максимум и два спуска"""
        plc = PLComplex.build([(0, 0), (1, 2), (2, 1)], [(0, 1), (1, 2)])
        expected = ReebGraph.from_lists([(0, 0), (1, 1), (2, 2)], [(0, 0, 2), (1, 1, 2)])
        assert is_isomorphic(reeb_of_complex(plc), expected)

    def test_triangle_boundary(self):
        """Граница треугольника даёт петлю"""
        assert is_isomorphic(reeb_of_complex(parse_complex(TRIANGLE)), loop_graph(0, 2))

    def test_filled_triangle(self):
        """Заполненный треугольник даёт ребро"""
        assert is_isomorphic(reeb_of_complex(parse_complex(TRIANGLE + "t 0 1 2\n")), edge_graph(0, 2))

    def test_equal_values(self):
        """Равные значения не мешают построению"""
        plc = PLComplex.build([(0, 0), (1, 1), (2, 1), (3, 2)], [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)])
        # ребро 1-2 лежит на одном уровне и стягивается в точку, оба цикла сохраняются
        expected = ReebGraph.from_lists([(0, 0), (1, 1), (2, 2)], [(0, 0, 1), (1, 0, 1), (2, 1, 2), (3, 1, 2)])
        assert is_isomorphic(reeb_of_complex(plc), expected)

    def test_empty(self):
        """Пустой комплекс"""
        assert reeb_of_complex(PLComplex.build([])) == ReebGraph()

    @given(st.integers(2, 7), st.integers(0, 3), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_graph_complex_roundtrip(self, n, loops, seed):
        """Граф Риба одномерного комплекса графа изоморфен самому графу"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        assert is_isomorphic(reeb_of_complex(complex_of_graph(g)), g)

    @given(st.integers(2, 6), st.integers(0, 2), st.integers(0, 10**6))
    @settings(max_examples=20, deadline=None)
    def test_level_sets_match_oracle(self, n, loops, seed):
        """Число точек графа Риба на уровне равно числу компонент множества уровня комплекса"""
        g = generate_random_reeb(n, min(loops, n * (n - 1) // 2), seed)
        plc = prism_complex(g, Fraction(1, 20))
        reeb = reeb_of_complex(plc)
        for i in range(-2, 42):
            level = Fraction(i, 40) + Fraction(1, 7001)
            assert len(points_at_level(reeb, level)) == level_set_components(plc, level)
