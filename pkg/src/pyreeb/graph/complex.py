"""Симплициальные комплексы размерности не выше 2 с кусочно-линейной функцией и построение их графа Риба.

Формат `.plc`::

    # комментарий
    v <id> <значение>
    f <i> <j>          # ребро
    t <i> <j> <k>      # треугольник
"""

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import logging
from typing import Any

from pyreeb.util import UnionFind, ValueParseError, parse_value, to_value

from .reeb import Edge, ReebGraph, Vertex, canonicalize
from .reeb_format import parse_uint, tokenize

logger = logging.getLogger(__name__)


class ComplexParseError(ValueError):
    """Ошибка в описании комплекса: синтаксис, замкнутость граней, дубликаты, висячие ссылки.

    Для комплексов, построенных программно, строка и столбец равны 0.
    """

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class PLComplex:
    """Конечный симплициальный комплекс размерности ≤ 2 со значениями в вершинах.

    Рёбра и треугольники хранятся как отсортированные кортежи идентификаторов вершин.
    Используйте `build`: он проверяет замкнутость граней и отсутствие дубликатов.
    """

    values: dict[int, Fraction]
    edges: tuple[tuple[int, int], ...] = ()
    triangles: tuple[tuple[int, int, int], ...] = ()

    @classmethod
    def build(
        cls,
        vertices: Iterable[tuple[int, Any]],
        edges: Iterable[Iterable[int]] = (),
        triangles: Iterable[Iterable[int]] = (),
        lenient: bool = False,
    ) -> "PLComplex":
        """Собирает и проверяет комплекс.

        :param lenient: достраивать недостающие рёбра треугольников вместо ошибки
        """
        builder = _ComplexBuilder(lenient)
        for vid, value in vertices:
            builder.add_vertex(int(vid), to_value(value))
        for edge in edges:
            builder.add_edge(tuple(int(x) for x in edge))
        for tri in triangles:
            builder.add_triangle(tuple(int(x) for x in tri))
        return builder.finish()

    @cached_property
    def order(self) -> list[int]:
        """Вершины в порядке обхода: по значению, при равенстве по идентификатору."""
        return sorted(self.values, key=lambda vid: (self.values[vid], vid))


class _ComplexBuilder:
    def __init__(self, lenient: bool):
        self.lenient = lenient
        self.values: dict[int, Fraction] = {}
        self.edges: dict[tuple[int, int], tuple[int, int]] = {}
        self.triangles: dict[tuple[int, int, int], tuple[int, int]] = {}

    def add_vertex(self, vid: int, value: Fraction, line: int = 0, column: int = 0) -> None:
        if vid in self.values:
            raise ComplexParseError(line, column, f"повторный идентификатор вершины {vid}")
        self.values[vid] = value

    def _check_vertices(self, simplex: tuple[int, ...], line: int, column: int) -> tuple[int, ...]:
        if len(set(simplex)) != len(simplex):
            raise ComplexParseError(line, column, f"вырожденный симплекс {simplex}")
        for vid in simplex:
            if vid not in self.values:
                raise ComplexParseError(line, column, f"ссылка на отсутствующую вершину {vid}")
        return tuple(sorted(simplex))

    def add_edge(self, edge: tuple[int, ...], line: int = 0, column: int = 0) -> None:
        if len(edge) != 2:
            raise ComplexParseError(line, column, "ребро задаётся двумя вершинами")
        key = self._check_vertices(edge, line, column)
        if key in self.edges:
            raise ComplexParseError(line, column, f"повторное ребро {key}")
        self.edges[key] = (line, column)  # type: ignore[index]

    def add_triangle(self, tri: tuple[int, ...], line: int = 0, column: int = 0) -> None:
        if len(tri) != 3:
            raise ComplexParseError(line, column, "треугольник задаётся тремя вершинами")
        key = self._check_vertices(tri, line, column)
        if key in self.triangles:
            raise ComplexParseError(line, column, f"повторный треугольник {key}")
        self.triangles[key] = (line, column)  # type: ignore[index]

    def finish(self) -> PLComplex:
        for (i, j, k), (line, column) in self.triangles.items():
            for face in ((i, j), (i, k), (j, k)):
                if face in self.edges:
                    continue
                if not self.lenient:
                    raise ComplexParseError(
                        line, column, f"ребро {face} треугольника {(i, j, k)} не объявлено"
                    )
                logger.debug("Достроено ребро %s треугольника %s", face, (i, j, k))
                self.edges[face] = (line, column)
        return PLComplex(
            values=dict(self.values),
            edges=tuple(sorted(self.edges)),
            triangles=tuple(sorted(self.triangles)),
        )


def parse_complex(text: str, lenient: bool = False) -> PLComplex:
    """Разбирает текст `.plc` с диагностикой по строкам и столбцам."""
    builder = _ComplexBuilder(lenient)
    arity = {"v": 2, "f": 2, "t": 3}
    for line_no, tokens in tokenize(text):
        col, kind = tokens[0]
        args = tokens[1:]
        if kind not in arity:
            raise ComplexParseError(line_no, col, f"неизвестный вид строки {kind!r}")
        if len(args) != arity[kind]:
            raise ComplexParseError(line_no, col, f"строка '{kind}' требует {arity[kind]} аргумента(ов)")
        try:
            if kind == "v":
                vid = parse_uint(line_no, args[0][0], args[0][1], "идентификатор вершины")
                try:
                    value = parse_value(args[1][1])
                except ValueParseError as e:
                    raise ComplexParseError(line_no, args[1][0], str(e)) from e
                builder.add_vertex(vid, value, line_no, args[0][0])
            else:
                ids = tuple(parse_uint(line_no, c, t, "идентификатор вершины") for c, t in args)
                if kind == "f":
                    builder.add_edge(ids, line_no, col)
                else:
                    builder.add_triangle(ids, line_no, col)
        except ComplexParseError:
            raise
        except ValueError as e:
            # ReebFormatError из parse_uint
            raise ComplexParseError(line_no, getattr(e, "column", col), getattr(e, "message", str(e))) from e
    return builder.finish()


def read_complex(path: str, lenient: bool = False) -> PLComplex:
    """Читает комплекс из файла `.plc`."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_complex(f.read(), lenient=lenient)


type _Node = tuple[int, int]  # ребро (a, c) в рангах; (k, k) обозначает вершину ранга k


def reeb_of_complex(plc: PLComplex) -> ReebGraph:
    """Канонический граф Риба пары (|K|, f).

    Обход значений снизу вверх; равные значения упорядочиваются по идентификатору вершины
    (символическое возмущение). В каждом событии (вершине ранга k) и в каждой полосе между
    соседними событиями компоненты множества уровня вычисляются заново через union-find по
    пересекающим рёбрам, склеенным треугольниками. Компоненты событий становятся вершинами графа,
    компоненты полос становятся рёбрами. Рёбра нулевой высоты, возникшие из равных значений,
    и регулярные вершины удаляются канонизацией.
    """
    order = plc.order
    n = len(order)
    if n == 0:
        return ReebGraph()
    rank = {vid: r for r, vid in enumerate(order, start=1)}
    edges = [tuple(sorted((rank[i], rank[j]))) for i, j in plc.edges]
    triangles = [tuple(sorted((rank[i], rank[j], rank[k]))) for i, j, k in plc.triangles]

    event_of: list[dict[_Node, int]] = [{} for _ in range(n + 1)]
    vertices: list[Vertex] = []
    for k in range(1, n + 1):
        uf: UnionFind[_Node] = UnionFind([(k, k)])
        for a, c in edges:
            if a < k < c:
                uf.add((a, c))
        for a, b, c in triangles:
            if not a < k < c:
                continue
            if b == k:
                uf.union((k, k), (a, c))
            elif b < k:
                uf.union((a, c), (b, c))
            else:
                uf.union((a, b), (a, c))
        value = plc.values[order[k - 1]]
        for group in uf.groups():
            vid = len(vertices)
            vertices.append(Vertex(vid, value))
            for node in group:
                event_of[k][node] = vid

    def lower_end(node: _Node, k: int) -> int:
        a, c = node
        return event_of[k][(k, k)] if a == k else event_of[k][(a, c)]

    def upper_end(node: _Node, k: int) -> int:
        a, c = node
        return event_of[k + 1][(k + 1, k + 1)] if c == k + 1 else event_of[k + 1][(a, c)]

    graph_edges: list[Edge] = []
    for k in range(1, n):
        uf = UnionFind()
        for a, c in edges:
            if a <= k < c:
                uf.add((a, c))
        for a, b, c in triangles:
            if not a <= k < c:
                continue
            if b <= k:
                uf.union((a, c), (b, c))
            else:
                uf.union((a, b), (a, c))
        for group in uf.groups():
            node = group[0]
            graph_edges.append(Edge(len(graph_edges), lower_end(node, k), upper_end(node, k)))
    logger.debug(
        "Обход комплекса: %d событий, %d вершин и %d рёбер до канонизации",
        n,
        len(vertices),
        len(graph_edges),
    )
    return canonicalize(ReebGraph(vertices=tuple(vertices), edges=tuple(graph_edges)))


def complex_of_graph(graph: ReebGraph) -> PLComplex:
    """Граф Риба как одномерный комплекс (каждое ребро делится пополам, чтобы не было кратных рёбер)."""
    values = dict(graph.values)
    next_id = max(values, default=-1) + 1
    edges: list[tuple[int, int]] = []
    for e in graph.edges:
        mid = next_id
        next_id += 1
        lo, up = graph.edge_values(e.id)
        values[mid] = (lo + up) / 2
        edges += [(e.lower, mid), (mid, e.upper)]
    return PLComplex.build(values.items(), edges)
