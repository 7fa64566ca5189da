"""Конструктивные косвязки над прямой, соответствующие графам Риба.

Косвязка F(I) = π₀ f⁻¹(I) задаётся конечными данными:

- критические значения s_0 < … < s_{n−1};
- множества страт A_0, …, A_n (A_i лежит над интервалом (s_{i−1}, s_i), A_0 и A_n пусты);
- критические множества B_0, …, B_{n−1};
- отображения left[j]: A_j → B_j (страта снизу) и right[j]: A_{j+1} → B_j (страта сверху).

Элементы множеств нумеруются целыми числами. Ячейка `("A", i, k)` обозначает k-й элемент A_i,
ячейка `("B", j, k)` обозначает k-й элемент B_j.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import logging
from typing import Any, Optional

from pyreeb.graph import ReebGraph, Vertex, Edge, canonicalize
from pyreeb.util import UnionFind, to_value

logger = logging.getLogger(__name__)

type CosheafCell = tuple[str, int, int]


class CosheafError(ValueError):
    """Структурно некорректная косвязка."""
    pass  # pylint: disable=unnecessary-pass


@dataclass(frozen=True)
class Section:
    """Значение косвязки на интервале: компоненты склеенного клеточного графа."""

    components: tuple[tuple[CosheafCell, ...], ...]

    @cached_property
    def index(self) -> dict[CosheafCell, int]:
        """Номер компоненты по ячейке."""
        return {cell: i for i, comp in enumerate(self.components) for cell in comp}

    def __len__(self) -> int:
        return len(self.components)

    def map_into(self, other: "Section") -> tuple[int, ...]:
        """Отображение, индуцированное вложением интервалов: компонента переходит в компоненту,
        содержащую её ячейки. Все ячейки этого сечения должны присутствовать в `other`."""
        try:
            return tuple(other.index[comp[0]] for comp in self.components)
        except KeyError as e:
            raise CosheafError(f"Ячейка {e.args[0]} отсутствует в объемлющем сечении") from e


@dataclass(frozen=True)
class ConstructibleCosheaf:
    """Конструктивная косвязка множеств над прямой (неизменяемая)."""

    critical: tuple[Fraction, ...]
    strata: tuple[int, ...]
    crit_sizes: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.critical)
        if any(a >= b for a, b in zip(self.critical, self.critical[1:])):
            raise CosheafError("Критические значения должны строго возрастать")
        if len(self.strata) != n + 1 or len(self.crit_sizes) != n:
            raise CosheafError(
                f"Для {n} критических значений нужны {n + 1} страт и {n} критических множеств"
            )
        if n == 0:
            if self.strata != (0,):
                raise CosheafError("Косвязка без критических значений должна быть пустой")
            return
        if self.strata[0] or self.strata[n]:
            raise CosheafError("Крайние страты A_0 и A_n должны быть пусты")
        if len(self.left) != n or len(self.right) != n:
            raise CosheafError("Нужно по одному левому и правому отображению на критическое значение")
        for j in range(n):
            for name, mapping, size in (
                ("left", self.left[j], self.strata[j]),
                ("right", self.right[j], self.strata[j + 1]),
            ):
                if len(mapping) != size:
                    raise CosheafError(f"{name}[{j}]: ожидается {size} образов, задано {len(mapping)}")
                if any(not 0 <= b < self.crit_sizes[j] for b in mapping):
                    raise CosheafError(f"{name}[{j}]: образ вне B_{j}")

    @classmethod
    def build(
        cls,
        critical: list[Any],
        strata: list[int],
        crit_sizes: list[int],
        left: list[list[int]],
        right: list[list[int]],
    ) -> "ConstructibleCosheaf":
        """Создаёт косвязку из списков; значения приводятся к точным дробям."""
        return cls(
            critical=tuple(to_value(s) for s in critical),
            strata=tuple(strata),
            crit_sizes=tuple(crit_sizes),
            left=tuple(tuple(m) for m in left),
            right=tuple(tuple(m) for m in right),
        )

    @property
    def n(self) -> int:
        """Число критических значений."""
        return len(self.critical)

    @cached_property
    def _section_cache(self) -> dict[tuple, Section]:
        return {}

    def _stratum_bounds(self, i: int) -> tuple[Optional[Fraction], Optional[Fraction]]:
        low = self.critical[i - 1] if i > 0 else None
        high = self.critical[i] if i < self.n else None
        return low, high

    def cells(self, lo: Fraction, hi: Fraction, closed: bool) -> list[CosheafCell]:
        """Ячейки над интервалом.

        Открытый интервал (lo, hi) содержит критические ячейки с lo < s_j < hi и страты, пересекающие
        интервал. «Толстый» отрезок ⟦lo, hi⟧ (сколь угодно малая открытая окрестность [lo, hi])
        содержит критические ячейки с lo ≤ s_j ≤ hi и страты, замыкание которых пересекает [lo, hi].
        """
        result: list[CosheafCell] = []
        if closed:
            j_from, j_to = bisect_left(self.critical, lo), bisect_right(self.critical, hi)
        else:
            j_from, j_to = bisect_right(self.critical, lo), bisect_left(self.critical, hi)
        for i in range(self.n + 1):
            if not self.strata[i]:
                continue
            low, high = self._stratum_bounds(i)
            if closed:
                meets = (low is None or low <= hi) and (high is None or high >= lo)
            else:
                meets = (low is None or low < hi) and (high is None or high > lo)
            if meets:
                result.extend(("A", i, k) for k in range(self.strata[i]))
        for j in range(j_from, j_to):
            result.extend(("B", j, k) for k in range(self.crit_sizes[j]))
        return result

    def section(self, lo: Any, hi: Any, closed: bool = False) -> Section:
        """Значение косвязки на открытом интервале (lo, hi) или на толстом отрезке ⟦lo, hi⟧."""
        a, b = to_value(lo), to_value(hi)
        key = (a, b, closed)
        cached = self._section_cache.get(key)
        if cached is not None:
            return cached
        if a > b or (a == b and not closed):
            result = Section(())
        else:
            cells = self.cells(a, b, closed)
            uf: UnionFind[CosheafCell] = UnionFind(cells)
            for cell in cells:
                kind, i, k = cell
                if kind != "A":
                    continue
                for j, mapping in ((i - 1, self.right), (i, self.left)):
                    if 0 <= j < self.n and ("B", j, mapping[j][k]) in uf:
                        uf.union(cell, ("B", j, mapping[j][k]))
            groups = sorted((tuple(sorted(g)) for g in uf.groups()), key=lambda g: g[0])
            result = Section(tuple(groups))
        self._section_cache[key] = result
        return result

    def point(self, t: Any) -> Section:
        """Значение на малой окрестности точки t."""
        return self.section(t, t, closed=True)

    def pruned(self) -> "ConstructibleCosheaf":
        """Удаляет вырожденные критические значения, у которых оба отображения биективны."""
        critical = list(self.critical)
        strata = list(self.strata)
        crit_sizes = list(self.crit_sizes)
        left = [list(m) for m in self.left]
        right = [list(m) for m in self.right]
        j = 0
        while j < len(critical):
            size = crit_sizes[j]
            if (
                strata[j] == size
                and strata[j + 1] == size
                and sorted(left[j]) == list(range(size))
                and sorted(right[j]) == list(range(size))
                and size > 0
            ):
                # элемент страты сверху получает номер элемента страты снизу с тем же образом
                below_of = {b: k for k, b in enumerate(left[j])}
                renumber = [below_of[b] for b in right[j]]
                if j + 1 < len(critical):
                    upper_left = [0] * size
                    for k_up, k_low in enumerate(renumber):
                        upper_left[k_low] = left[j + 1][k_up]
                    left[j + 1] = upper_left
                del critical[j], strata[j + 1], crit_sizes[j], left[j], right[j]
                logger.debug("Удалено вырожденное критическое значение")
            else:
                j += 1
        return ConstructibleCosheaf(
            critical=tuple(critical),
            strata=tuple(strata),
            crit_sizes=tuple(crit_sizes),
            left=tuple(tuple(m) for m in left),
            right=tuple(tuple(m) for m in right),
        )


def cosheaf_of(graph: ReebGraph) -> ConstructibleCosheaf:
    """Косвязка F(I) = π₀ f⁻¹(I) графа Риба.

    A_i состоит из рёбер, покрывающих страту i (в порядке идентификаторов). B_j составляют вершины
    со значением s_j (в порядке идентификаторов), затем рёбра, проходящие через s_j, как одноэлементные
    компоненты. Отображения переводят ребро в вершину-конец или в само проходящее ребро.
    """
    critical = graph.critical_values
    n = len(critical)
    edges = sorted(graph.edges, key=lambda e: e.id)
    vertices = sorted(graph.vertices, key=lambda v: v.id)
    strata_members: list[list[Edge]] = [[] for _ in range(n + 1)]
    crit_vertex: list[dict[int, int]] = [{} for _ in range(n)]
    crit_pass: list[dict[int, int]] = [{} for _ in range(n)]
    level = {s: j for j, s in enumerate(critical)}
    for v in vertices:
        j = level[v.value]
        crit_vertex[j][v.id] = len(crit_vertex[j])
    for e in edges:
        lo, up = graph.edge_values(e.id)
        j_lo, j_up = level[lo], level[up]
        for i in range(j_lo + 1, j_up + 1):
            strata_members[i].append(e)
        for j in range(j_lo + 1, j_up):
            crit_pass[j][e.id] = len(crit_vertex[j]) + len(crit_pass[j])

    def image(j: int, e: Edge) -> int:
        for end in (e.lower, e.upper):
            if end in crit_vertex[j]:
                return crit_vertex[j][end]
        return crit_pass[j][e.id]

    left = tuple(tuple(image(j, e) for e in strata_members[j]) for j in range(n))
    right = tuple(tuple(image(j, e) for e in strata_members[j + 1]) for j in range(n))
    return ConstructibleCosheaf(
        critical=tuple(critical),
        strata=tuple(len(m) for m in strata_members),
        crit_sizes=tuple(len(crit_vertex[j]) + len(crit_pass[j]) for j in range(n)),
        left=left,
        right=right,
    )


def evaluate(cs: ConstructibleCosheaf, lo: Any, hi: Any) -> Section:
    """Значение косвязки на открытом интервале (lo, hi); пустой интервал даёт пустое множество."""
    return cs.section(lo, hi)


def corestriction(cs: ConstructibleCosheaf, inner: tuple[Any, Any], outer: tuple[Any, Any]) -> tuple[int, ...]:
    """Отображение F(I) -> F(J), индуцированное вложением открытых интервалов I ⊆ J."""
    (a, b), (c, d) = inner, outer
    if to_value(c) > to_value(a) or to_value(d) < to_value(b):
        raise CosheafError(f"Интервал ({a}, {b}) не содержится в ({c}, {d})")
    return cs.section(a, b).map_into(cs.section(c, d))


def shift(cs: ConstructibleCosheaf, epsilon: Any) -> ConstructibleCosheaf:
    """Сдвинутая косвязка I -> F(I^ε), где I^ε = (a − ε, b + ε)."""
    eps = to_value(epsilon)
    if eps < 0:
        raise CosheafError(f"Сдвиг должен быть неотрицательным: {epsilon}")
    if eps == 0 or cs.n == 0:
        return cs
    points = sorted({s + d for s in cs.critical for d in (-eps, eps)})
    n = len(points)
    point_sections = [cs.section(t - eps, t + eps, closed=True) for t in points]
    strata_sections: list[Section] = [Section(())]
    for t0, t1 in zip(points, points[1:]):
        m = (t0 + t1) / 2
        strata_sections.append(cs.section(m - eps, m + eps, closed=True))
    strata_sections.append(Section(()))
    left = tuple(strata_sections[j].map_into(point_sections[j]) for j in range(n))
    right = tuple(strata_sections[j + 1].map_into(point_sections[j]) for j in range(n))
    shifted = ConstructibleCosheaf(
        critical=tuple(points),
        strata=tuple(len(s) for s in strata_sections),
        crit_sizes=tuple(len(s) for s in point_sections),
        left=left,
        right=right,
    )
    return shifted.pruned()


def realize(cs: ConstructibleCosheaf) -> ReebGraph:
    """Граф Риба косвязки: вершина на каждый элемент B_j, ребро на каждый элемент A_i; канонизирован."""
    if cs.n == 0:
        return ReebGraph()
    vertices: list[Vertex] = []
    vertex_id: dict[tuple[int, int], int] = {}
    for j, s in enumerate(cs.critical):
        for k in range(cs.crit_sizes[j]):
            vertex_id[(j, k)] = len(vertices)
            vertices.append(Vertex(len(vertices), s))
    edges: list[Edge] = []
    for i in range(1, cs.n):
        for k in range(cs.strata[i]):
            lower = vertex_id[(i - 1, cs.right[i - 1][k])]
            upper = vertex_id[(i, cs.left[i][k])]
            edges.append(Edge(len(edges), lower, upper))
    return canonicalize(ReebGraph(vertices=tuple(vertices), edges=tuple(edges)))


def same_fibre_counts(first: ConstructibleCosheaf, second: ConstructibleCosheaf) -> bool:
    """Равны размеры сечений на всех атомарных ячейках общего измельчения и мультимножества
    размеров прообразов при вложении открытых ячеек в соседние точки.

    Это необходимое условие изоморфизма косвязок, но не достаточное: сами отображения не
    сравниваются. Изоморфизм проверяется через `realize` и `is_isomorphic`."""
    points = sorted(set(first.critical) | set(second.critical))
    for t in points:
        if len(first.point(t)) != len(second.point(t)):
            return False
    for t0, t1 in zip(points, points[1:]):
        m = (t0 + t1) / 2
        sa, sb = first.point(m), second.point(m)
        if len(sa) != len(sb):
            return False
        for t in (t0, t1):
            fa = sorted(_fibres(sa.map_into(first.point(t)), len(first.point(t))))
            fb = sorted(_fibres(sb.map_into(second.point(t)), len(second.point(t))))
            if fa != fb:
                return False
    return True


def _fibres(mapping: tuple[int, ...], size: int) -> list[int]:
    counts = [0] * size
    for b in mapping:
        counts[b] += 1
    return counts
