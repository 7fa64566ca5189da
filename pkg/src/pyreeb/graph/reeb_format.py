"""Текстовый формат `.reeb`.

Строки вида::

    # комментарий
    v <id> <значение: десятичная запись или p/q>
    e <id нижней вершины> <id верхней вершины>

Повторные строки `e` создают параллельные рёбра; идентификаторы рёбер присваиваются
по порядку строк. Рёбра, нарушающие строгую монотонность, отвергаются.
"""

import logging
from typing import Iterable, TextIO

from pyreeb.util import ValueParseError, exact_str, parse_exact

from .reeb import Edge, ReebGraph, Vertex, validate

logger = logging.getLogger(__name__)


class ReebFormatError(ValueError):
    """Ошибка в файле `.reeb` с указанием строки и столбца."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def tokenize(text: str) -> Iterable[tuple[int, list[tuple[int, str]]]]:
    """Разбивает текст на строки токенов `(столбец, токен)`; пустые строки и комментарии пропускаются."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens: list[tuple[int, str]] = []
        pos = 0
        for word in line.split():
            pos = line.index(word, pos)
            tokens.append((pos + 1, word))
            pos += len(word)
        if tokens:
            yield line_no, tokens


def parse_uint(line: int, column: int, token: str, what: str) -> int:
    """Разбирает неотрицательный целый идентификатор."""
    if not token.isdigit():
        raise ReebFormatError(line, column, f"{what}: ожидается неотрицательное целое, получено {token!r}")
    return int(token)


def parse_reeb(text: str) -> ReebGraph:
    """Разбирает текст `.reeb` в граф Риба и проверяет его инварианты."""
    vertices: list[Vertex] = []
    edges: list[Edge] = []
    vertex_lines: dict[int, int] = {}
    edge_positions: dict[int, tuple[int, int]] = {}
    for line_no, tokens in tokenize(text):
        col, kind = tokens[0]
        args = tokens[1:]
        if kind == "v":
            if len(args) != 2:
                raise ReebFormatError(line_no, col, "ожидается 'v <id> <значение>'")
            vid = parse_uint(line_no, args[0][0], args[0][1], "идентификатор вершины")
            if vid in vertex_lines:
                raise ReebFormatError(
                    line_no, args[0][0], f"вершина {vid} уже объявлена в строке {vertex_lines[vid]}"
                )
            try:
                value = parse_exact(args[1][1])
            except ValueParseError as e:
                raise ReebFormatError(line_no, args[1][0], str(e)) from e
            vertex_lines[vid] = line_no
            vertices.append(Vertex(vid, value))
        elif kind == "e":
            if len(args) != 2:
                raise ReebFormatError(line_no, col, "ожидается 'e <нижняя> <верхняя>'")
            lo = parse_uint(line_no, args[0][0], args[0][1], "нижняя вершина")
            up = parse_uint(line_no, args[1][0], args[1][1], "верхняя вершина")
            edge_positions[len(edges)] = (line_no, col)
            edges.append(Edge(len(edges), lo, up))
        else:
            raise ReebFormatError(line_no, col, f"неизвестный вид строки {kind!r}")

    graph = ReebGraph(vertices=tuple(vertices), edges=tuple(edges))
    report = validate(graph)
    if not report.ok:
        first = report.violations[0]
        # ссылка вида `e3`: берём позицию строки ребра
        line_no, col = edge_positions.get(int(first.ref[1:]), (0, 0)) if first.ref.startswith("e") else (0, 0)
        raise ReebFormatError(line_no, col, str(first))
    logger.debug("Прочитан граф: %d вершин, %d рёбер", len(vertices), len(edges))
    return graph


def format_reeb(graph: ReebGraph) -> str:
    """Записывает граф в формате `.reeb`; рёбра выводятся в порядке идентификаторов."""
    lines = [f"v {v.id} {exact_str(v.value)}" for v in sorted(graph.vertices, key=lambda v: v.id)]
    lines += [f"e {e.lower} {e.upper}" for e in sorted(graph.edges, key=lambda e: e.id)]
    return "\n".join(lines) + "\n"


def read_reeb(path: str) -> ReebGraph:
    """Читает граф из файла `.reeb`."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_reeb(f.read())


def write_reeb(graph: ReebGraph, out: str | TextIO) -> None:
    """Записывает граф в файл (путь или открытый поток)."""
    if isinstance(out, str):
        with open(out, "w", encoding="utf-8") as f:
            f.write(format_reeb(graph))
        logger.info("Граф записан в %s", out)
    else:
        out.write(format_reeb(graph))
