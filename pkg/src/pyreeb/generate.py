"""Случайные графы Риба для экспериментов."""

from fractions import Fraction
import logging
from itertools import combinations

import numpy as np

from .graph import ReebGraph, canonicalize

logger = logging.getLogger(__name__)

GRID = 1000  # значения берутся из сетки k/GRID, 0 < k < GRID


class GeneratorError(ValueError):
    """Параметры генерации невыполнимы."""
    pass  # pylint: disable=unnecessary-pass


def generate_random_reeb(n_vertices: int, n_loops: int, seed: int) -> ReebGraph:
    """Случайный канонический граф Риба с заданным числом независимых циклов.

    Значения вершин различны и равномерно выбираются из сетки на (0, 1). Каждая вершина, кроме
    нижней, присоединяется ребром к случайной вершине с меньшим значением (возрастающее
    остовное дерево). Затем добавляются `n_loops` рёбер между различными случайными парами вершин;
    пара может совпасть с ребром дерева, тогда возникает кратное ребро. Результат канонизируется.
    """
    if n_vertices < 2:
        raise GeneratorError(f"Нужно не меньше двух вершин: {n_vertices}")
    if n_vertices >= GRID:
        raise GeneratorError(f"Сетка значений допускает не больше {GRID - 1} вершин: {n_vertices}")
    if n_loops < 0:
        raise GeneratorError(f"Число циклов не может быть отрицательным: {n_loops}")
    pairs = list(combinations(range(n_vertices), 2))
    if n_loops > len(pairs):
        raise GeneratorError(
            f"Для {n_vertices} вершин доступно только {len(pairs)} пар, запрошено циклов: {n_loops}"
        )

    rng = np.random.default_rng(seed)
    ticks = sorted(int(k) + 1 for k in rng.choice(GRID - 1, size=n_vertices, replace=False))
    # вершина i имеет i-е по возрастанию значение
    vertices = [(i, Fraction(k, GRID)) for i, k in enumerate(ticks)]
    edges: list[tuple[int, int, int]] = []
    for i in range(1, n_vertices):
        parent = int(rng.integers(i))
        edges.append((len(edges), parent, i))
    for index in sorted(rng.choice(len(pairs), size=n_loops, replace=False).tolist()):
        lo, up = pairs[index]
        edges.append((len(edges), lo, up))

    graph = canonicalize(ReebGraph.from_lists(vertices, edges))
    logger.debug(
        "Случайный граф (seed=%d): %d вершин, %d рёбер после канонизации",
        seed,
        len(graph.vertices),
        len(graph.edges),
    )
    return graph
