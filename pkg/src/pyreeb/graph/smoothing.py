"""Сглаживание графа Риба: граф Риба функции f(x) + t на X × [−ε, ε]."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
from typing import Any

from pyreeb.util import to_value

from .complex import PLComplex, reeb_of_complex
from .reeb import Cell, ReebGraph, ReebGraphError, canonicalize, truncated_components

logger = logging.getLogger(__name__)


class Diagonal(Enum):
    """Диагональ, разрезающая четырёхугольник призмы."""

    RISING = "rising"  # нижний угол нижнего конца -> верхний угол верхнего конца
    FALLING = "falling"  # верхний угол нижнего конца -> нижний угол верхнего конца


def prism_complex(graph: ReebGraph, epsilon: Fraction, diagonal: Diagonal = Diagonal.RISING) -> PLComplex:
    """Триангуляция призмы X × [−ε, ε].

    Каждая вершина w даёт вертикальное ребро со значениями f(w) − ε и f(w) + ε. Каждое ребро графа
    делится пополам вертикальным столбцом, а каждая из двух половин даёт четырёхугольник,
    разрезанный диагональю `diagonal`. Функция f(x) + t аффинна на четырёхугольнике, поэтому граф Риба
    от выбора диагонали не зависит.
    """
    values: dict[int, Fraction] = {}
    edges: list[tuple[int, int]] = []
    triangles: list[tuple[int, int, int]] = []

    def column(value: Fraction) -> tuple[int, int]:
        bottom, top = len(values), len(values) + 1
        values[bottom] = value - epsilon
        values[top] = value + epsilon
        edges.append((bottom, top))
        return bottom, top

    def quad(lower: tuple[int, int], upper: tuple[int, int]) -> None:
        (p_bot, p_top), (q_bot, q_top) = lower, upper
        edges.extend([(p_bot, q_bot), (p_top, q_top)])
        if diagonal is Diagonal.RISING:
            edges.append((p_bot, q_top))
            triangles.extend([(p_bot, q_bot, q_top), (p_bot, p_top, q_top)])
        else:
            edges.append((p_top, q_bot))
            triangles.extend([(p_bot, p_top, q_bot), (p_top, q_bot, q_top)])

    columns = {v.id: column(v.value) for v in sorted(graph.vertices, key=lambda v: v.id)}
    for e in sorted(graph.edges, key=lambda e: e.id):
        lo, up = graph.edge_values(e.id)
        middle = column((lo + up) / 2)
        quad(columns[e.lower], middle)
        quad(middle, columns[e.upper])
    return PLComplex.build(values.items(), edges, triangles)


def smooth(graph: ReebGraph, epsilon: Any, diagonal: Diagonal = Diagonal.RISING) -> ReebGraph:
    """ε-сглаживание: канонический граф Риба пары (X × [−ε, ε], f(x) + t).

    При ε = 0 возвращается канонизированная копия графа.
    """
    eps = to_value(epsilon)
    if eps < 0:
        raise ReebGraphError(f"Параметр сглаживания должен быть неотрицательным: {epsilon}")
    if eps == 0:
        return canonicalize(graph)
    result = reeb_of_complex(prism_complex(graph, eps, diagonal))
    logger.debug(
        "Сглаживание на %s: %d вершин, %d рёбер -> %d вершин, %d рёбер",
        eps,
        len(graph.vertices),
        len(graph.edges),
        len(result.vertices),
        len(result.edges),
    )
    return result


@dataclass(frozen=True)
class FiberComponents:
    """Компоненты связности f⁻¹([a − ε, a + ε]) с перечнем ячеек графа в каждой."""

    components: tuple[tuple[Cell, ...], ...]

    @property
    def count(self) -> int:
        """Число компонент."""
        return len(self.components)


def fiber_components_oracle(graph: ReebGraph, epsilon: Any, level: Any) -> FiberComponents:
    """Независимый подсчёт слоя сглаженного графа над уровнем a: компоненты f⁻¹([a − ε, a + ε])."""
    eps, a = to_value(epsilon), to_value(level)
    uf = truncated_components(graph, a - eps, a + eps)
    return FiberComponents(tuple(tuple(sorted(group)) for group in sorted(uf.groups(), key=min)))
