"""Расширенная устойчивость функции на графе Риба.

Расширенная фильтрация строится через конус: вершина ω, затем ячейки графа по возрастанию
(ребро входит со значением верхнего конца), затем конусы ω*σ по убыванию (ω*v со значением f(v),
ω*e со значением нижнего конца). Равные значения упорядочиваются по размерности и идентификатору.
Редукция граничной матрицы над Z/2 даёт пары:

- обе ячейки в подъёме: обычная пара;
- первая в подъёме, вторая в спуске: расширенная пара (рождение на подъёме, смерть на спуске);
- обе в спуске: относительная пара.

Размерность пары равна размерности первой ячейки в конусе. Пары нулевой длины отбрасываются,
кроме расширенных.
"""

from dataclasses import dataclass
from fractions import Fraction
import logging

from pyreeb.graph import ReebGraph

from .diagram import DiagramPoint, PairKind, PersistenceDiagram

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _ConeCell:
    dim: int
    value: Fraction
    descending: bool
    boundary: tuple[tuple[str, int], ...]
    key: tuple[str, int]


@dataclass(frozen=True)
class ExtendedPersistence:
    """Четыре диаграммы расширенной устойчивости."""

    ordinary0: PersistenceDiagram
    extended0: PersistenceDiagram
    extended1: PersistenceDiagram
    relative1: PersistenceDiagram

    @property
    def dg0(self) -> PersistenceDiagram:
        """Dg₀: обычные и расширенные пары размерности 0."""
        return self.ordinary0 + self.extended0

    @property
    def exdg1(self) -> PersistenceDiagram:
        """ExDg₁: расширенные пары размерности 1, по одной на независимый цикл."""
        return self.extended1

    @property
    def all(self) -> PersistenceDiagram:
        """Все точки вместе."""
        return self.ordinary0 + self.extended0 + self.extended1 + self.relative1


def _filtration(graph: ReebGraph) -> list[_ConeCell]:
    ascending: list[_ConeCell] = []
    descending: list[_ConeCell] = []
    for v in graph.vertices:
        ascending.append(_ConeCell(0, v.value, False, (), ("v", v.id)))
        descending.append(_ConeCell(1, v.value, True, (("v", v.id), ("w", 0)), ("cv", v.id)))
    for e in graph.edges:
        lo, up = graph.edge_values(e.id)
        ascending.append(_ConeCell(1, up, False, (("v", e.lower), ("v", e.upper)), ("e", e.id)))
        descending.append(
            _ConeCell(2, lo, True, (("e", e.id), ("cv", e.lower), ("cv", e.upper)), ("ce", e.id))
        )
    ascending.sort(key=lambda c: (c.value, c.dim, c.key[1]))
    descending.sort(key=lambda c: (-c.value, c.dim, c.key[1]))
    return [_ConeCell(0, Fraction(0), False, (), ("w", 0))] + ascending + descending


def persistence_pairs(graph: ReebGraph) -> list[tuple[int, int]]:
    """Пары (i, j) номеров ячеек конической фильтрации после редукции."""
    cells = _filtration(graph)
    index = {c.key: i for i, c in enumerate(cells)}
    pivot_of: dict[int, int] = {}  # низ столбца -> номер столбца
    columns: dict[int, set[int]] = {}
    pairs: list[tuple[int, int]] = []
    for j, cell in enumerate(cells):
        column = {index[k] for k in cell.boundary}
        while column:
            low = max(column)
            if low not in pivot_of:
                break
            column ^= columns[pivot_of[low]]
        if column:
            low = max(column)
            pivot_of[low] = j
            columns[j] = column
            pairs.append((low, j))
    return pairs


def extended_persistence(graph: ReebGraph) -> ExtendedPersistence:
    """Расширенная устойчивость: обычные, расширенные (размерностей 0 и 1) и относительные пары."""
    cells = _filtration(graph)
    groups: dict[tuple[PairKind, int], list[DiagramPoint]] = {
        (PairKind.ORDINARY, 0): [],
        (PairKind.EXTENDED, 0): [],
        (PairKind.EXTENDED, 1): [],
        (PairKind.RELATIVE, 1): [],
    }
    for i, j in persistence_pairs(graph):
        birth, death = cells[i], cells[j]
        if not birth.descending and not death.descending:
            kind = PairKind.ORDINARY
        elif not birth.descending:
            kind = PairKind.EXTENDED
        else:
            kind = PairKind.RELATIVE
        if kind is not PairKind.EXTENDED and birth.value == death.value:
            continue
        groups.setdefault((kind, birth.dim), []).append(
            DiagramPoint(birth.value, death.value, birth.dim, kind)
        )
    logger.debug(
        "Расширенная устойчивость: %s",
        ", ".join(f"{kind}{dim}={len(points)}" for (kind, dim), points in groups.items()),
    )
    return ExtendedPersistence(
        ordinary0=PersistenceDiagram.of(groups[(PairKind.ORDINARY, 0)]),
        extended0=PersistenceDiagram.of(groups[(PairKind.EXTENDED, 0)]),
        extended1=PersistenceDiagram.of(groups[(PairKind.EXTENDED, 1)]),
        relative1=PersistenceDiagram.of(groups[(PairKind.RELATIVE, 1)]),
    )


def extended_diagrams(graph: ReebGraph) -> tuple[PersistenceDiagram, PersistenceDiagram]:
    """(Dg₀, ExDg₁) графа."""
    ep = extended_persistence(graph)
    return ep.dg0, ep.exdg1
