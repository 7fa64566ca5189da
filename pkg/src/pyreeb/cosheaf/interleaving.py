"""Решение задачи о ε-чередовании косвязок и оценка расстояния чередования.

Семейства φ_I: F(I) -> G(I^ε) и ψ_I: G(I) -> F(I^ε) ищутся на атомарных ячейках общего
измельчения S* = S_F ∪ S_G ∪ (S_F ± ε) ∪ (S_G ± ε) ∪ (S_F ± 2ε) ∪ (S_G ± 2ε): в каждой точке S*
и в каждом открытом промежутке между соседними точками. Внутри промежутка обе косвязки и их
сдвиги постоянны, поэтому естественность достаточно проверить на вложениях промежутка в соседние
точки. Вместе с условиями на композиции ψφ и φψ это конечная задача удовлетворения бинарных
ограничений, которая решается согласованием дуг (AC-3) и перебором с возвратом.
"""

from bisect import bisect_left
from collections.abc import Hashable
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
import math
from typing import Any, Optional

import jsonschema

from pyreeb.interval import BoundInterval
from pyreeb.util import exact_str, parse_exact, to_value

from .cosheaf import ConstructibleCosheaf, CosheafCell, CosheafError, Section

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7  # узлы перебора на одно решение


class Decision(Enum):
    """Исход проверки ε-чередования."""

    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"

    def __str__(self) -> str:
        return self.value


class BinaryCSP[V: Hashable]:
    """Задача с бинарными ограничениями над конечными целочисленными доменами.

    Ограничение между переменными a и b задаётся множеством допустимых пар значений;
    повторные ограничения на одну пару пересекаются.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.domains: dict[V, list[int]] = {}
        self.allowed: dict[tuple[V, V], set[tuple[int, int]]] = {}
        self.neighbors: dict[V, list[V]] = {}
        self.nodes = 0

    def add_variable(self, var: V, domain: list[int]) -> None:
        """Добавляет переменную с доменом."""
        self.domains[var] = list(domain)
        self.neighbors.setdefault(var, [])

    def add_constraint(self, a: V, b: V, pairs: set[tuple[int, int]]) -> None:
        """Добавляет ограничение: (значение a, значение b) должно лежать в `pairs`."""
        if (a, b) in self.allowed:
            self.allowed[(a, b)] &= pairs
            self.allowed[(b, a)] &= {(y, x) for x, y in pairs}
            return
        self.allowed[(a, b)] = set(pairs)
        self.allowed[(b, a)] = {(y, x) for x, y in pairs}
        self.neighbors[a].append(b)
        self.neighbors[b].append(a)

    def consistent(self, assignment: dict[V, int]) -> bool:
        """Проверяет полное присваивание."""
        for var, domain in self.domains.items():
            if assignment.get(var) not in domain:
                return False
        return all((assignment[a], assignment[b]) in pairs for (a, b), pairs in self.allowed.items())

    def _revise(self, a: V, b: V) -> bool:
        pairs = self.allowed[(a, b)]
        support = self.domains[b]
        kept = [x for x in self.domains[a] if any((x, y) in pairs for y in support)]
        if len(kept) != len(self.domains[a]):
            self.domains[a] = kept
            return True
        return False

    def arc_consistency(self) -> bool:
        """AC-3; возвращает False, если какой-то домен опустел."""
        queue = list(self.allowed)
        queued = set(queue)
        while queue:
            a, b = queue.pop()
            queued.discard((a, b))
            if self._revise(a, b):
                if not self.domains[a]:
                    return False
                for c in self.neighbors[a]:
                    if c != b and (c, a) not in queued:
                        queue.append((c, a))
                        queued.add((c, a))
        return True

    def _select(self, assignment: dict[V, int], order: dict[V, int]) -> Optional[V]:
        best: Optional[V] = None
        best_key: tuple[int, int] = (0, 0)
        for var, domain in self.domains.items():
            if var in assignment:
                continue
            key = (len(domain), order[var])
            if best is None or key < best_key:
                best, best_key = var, key
        return best

    def _forward_check(self, var: V, value: int, assignment: dict[V, int], saved: dict[V, list[int]]) -> bool:
        for other in self.neighbors[var]:
            if other in assignment:
                if (value, assignment[other]) not in self.allowed[(var, other)]:
                    return False
                continue
            pairs = self.allowed[(var, other)]
            kept = [y for y in self.domains[other] if (value, y) in pairs]
            if len(kept) != len(self.domains[other]):
                saved.setdefault(other, self.domains[other])
                self.domains[other] = kept
                if not kept:
                    return False
        return True

    def solve(self) -> tuple[Decision, Optional[dict[V, int]]]:
        """Поиск присваивания: наименьший домен первым, с проверкой вперёд и бюджетом узлов."""
        if any(not d for d in self.domains.values()) or not self.arc_consistency():
            return Decision.NO, None
        order = {var: i for i, var in enumerate(self.domains)}
        assignment: dict[V, int] = {}
        var = self._select(assignment, order)
        if var is None:
            return Decision.YES, assignment
        # кадр: переменная, оставшиеся значения, снимок изменённых доменов
        stack: list[tuple[V, list[int], dict[V, list[int]]]] = [(var, list(self.domains[var]), {})]
        while stack:
            var, values, saved = stack[-1]
            if var in assignment:
                for other, domain in saved.items():
                    self.domains[other] = domain
                saved.clear()
                del assignment[var]
            if not values:
                stack.pop()
                continue
            value = values.pop(0)
            self.nodes += 1
            if self.nodes > self.budget:
                return Decision.UNDECIDED, None
            saved[var] = self.domains[var]
            self.domains[var] = [value]
            assignment[var] = value
            if not self._forward_check(var, value, assignment, saved):
                continue
            nxt = self._select(assignment, order)
            if nxt is None:
                return Decision.YES, dict(assignment)
            stack.append((nxt, list(self.domains[nxt]), {}))
        return Decision.NO, None


CERTIFICATE_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Сертификат ε-чередования",
    "type": "object",
    "required": ["epsilon", "cells", "phi", "psi"],
    "properties": {
        "epsilon": {"type": "string"},
        "cells": {"type": "array", "items": {"type": "string"}},
        "phi": {"$ref": "#/definitions/tables"},
        "psi": {"$ref": "#/definitions/tables"},
    },
    "definitions": {
        "tables": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        }
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class InterleavingCertificate:
    """ε-чередование на атомарных ячейках.

    `cells` содержит точки измельчения и середины промежутков между ними (чётные номера для точек).
    `phi[c][x]` есть образ компоненты x сечения F в ячейке c среди компонент G⟦t − ε, t + ε⟧,
    `psi[c][y]` определяется симметрично.
    """

    epsilon: Fraction
    cells: tuple[Fraction, ...]
    phi: tuple[tuple[int, ...], ...]
    psi: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict[str, Any]:
        """Словарь для JSON."""
        return {
            "epsilon": exact_str(self.epsilon),
            "cells": [exact_str(t) for t in self.cells],
            "phi": [list(m) for m in self.phi],
            "psi": [list(m) for m in self.psi],
        }

    @staticmethod
    def from_dict(data: dict) -> "InterleavingCertificate":
        """Разбор словаря с проверкой схемой."""
        try:
            jsonschema.validate(instance=data, schema=CERTIFICATE_SCHEMA)
        except jsonschema.ValidationError as e:
            raise CosheafError(f"Сертификат не соответствует схеме: {e.message}") from e
        return InterleavingCertificate(
            epsilon=parse_exact(str(data["epsilon"])),
            cells=tuple(parse_exact(str(t)) for t in data["cells"]),
            phi=tuple(tuple(int(x) for x in m) for m in data["phi"]),
            psi=tuple(tuple(int(x) for x in m) for m in data["psi"]),
        )


@dataclass(frozen=True)
class InterleavingResult:
    """Исход решения с сертификатом для YES и числом узлов перебора."""

    decision: Decision
    certificate: Optional[InterleavingCertificate] = None
    nodes: int = 0


type _Var = tuple[str, int, int]  # (сторона, ячейка, компонента)

_OTHER = {"phi": "psi", "psi": "phi"}


class InterleavingProblem:
    """Переменные и ограничения ε-чередования двух косвязок."""

    def __init__(self, first: ConstructibleCosheaf, second: ConstructibleCosheaf, epsilon: Fraction):
        self.eps = epsilon
        self.cosheaf = {"phi": first, "psi": second}  # источник стороны
        self.target = {"phi": second, "psi": first}
        offsets = (0, epsilon, -epsilon, 2 * epsilon, -2 * epsilon)
        self.points = sorted({s + d for cs in (first, second) for s in cs.critical for d in offsets})
        cells: list[Fraction] = []
        for i, t in enumerate(self.points):
            if i:
                cells.append((self.points[i - 1] + t) / 2)
            cells.append(t)
        self.cells = cells
        self.source_sections = {
            side: [cs.point(t) for t in cells] for side, cs in self.cosheaf.items()
        }
        self.target_sections = {
            side: [cs.section(t - epsilon, t + epsilon, closed=True) for t in cells]
            for side, cs in self.target.items()
        }

    def cell_of(self, u: Fraction) -> int:
        """Номер атомарной ячейки, содержащей значение u."""
        i = bisect_left(self.points, u)
        if i < len(self.points) and self.points[i] == u:
            return 2 * i
        if i == 0 or i == len(self.points):
            raise CosheafError(f"Значение {u} вне измельчения")
        return 2 * i - 1

    def representative(self, side: str, component: tuple[CosheafCell, ...], c: int) -> tuple[int, CosheafCell]:
        """Атомарная ячейка и клетка, через которые вычисляется обратное отображение на компоненте
        сечения G⟦t − ε, t + ε⟧: критическая клетка, если она есть, иначе середина пересечения страты
        с отрезком."""
        cs = self.target[side]
        t = self.cells[c]
        for cell in component:
            if cell[0] == "B":
                return self.cell_of(cs.critical[cell[1]]), cell
        cell = component[0]
        i = cell[1]
        low = cs.critical[i - 1] if i > 0 else t - self.eps
        high = cs.critical[i] if i < cs.n else t + self.eps
        lo, hi = max(low, t - self.eps), min(high, t + self.eps)
        return self.cell_of((lo + hi) / 2), cell

    def variables(self) -> dict[_Var, list[int]]:
        """Переменные с доменами."""
        result: dict[_Var, list[int]] = {}
        for side in ("phi", "psi"):
            for c in range(len(self.cells)):
                domain = list(range(len(self.target_sections[side][c])))
                for x in range(len(self.source_sections[side][c])):
                    result[(side, c, x)] = domain
        return result

    def constraints(self) -> list[tuple[_Var, _Var, set[tuple[int, int]]]]:
        """Бинарные ограничения естественности и композиций."""
        result: list[tuple[_Var, _Var, set[tuple[int, int]]]] = []
        for side in ("phi", "psi"):
            src, tgt = self.source_sections[side], self.target_sections[side]
            for c in range(1, len(self.cells), 2):
                for p in (c - 1, c + 1):
                    a = src[c].map_into(src[p])
                    b = tgt[c].map_into(tgt[p])
                    for x in range(len(src[c])):
                        pairs = {(y, b[y]) for y in range(len(tgt[c]))}
                        result.append(((side, c, x), (side, p, a[x]), pairs))
            result.extend(self._composite_constraints(side))
        return result

    def _composite_constraints(self, side: str) -> list[tuple[_Var, _Var, set[tuple[int, int]]]]:
        other = _OTHER[side]
        cs = self.cosheaf[side]
        src, tgt = self.source_sections[side], self.target_sections[side]
        result: list[tuple[_Var, _Var, set[tuple[int, int]]]] = []
        for c, t in enumerate(self.cells):
            if not len(src[c]):
                continue
            big: Section = cs.section(t - 2 * self.eps, t + 2 * self.eps, closed=True)
            x_big = src[c].map_into(big)
            domain = range(len(tgt[c]))
            for y, component in enumerate(tgt[c].components):
                u, cell = self.representative(side, component, c)
                z = self.source_sections[other][u].index[cell]
                back = self.target_sections[other][u]
                back_big = back.map_into(big)
                for x in range(len(src[c])):
                    good = {w for w in range(len(back)) if back_big[w] == x_big[x]}
                    pairs = {(y2, w) for y2 in domain for w in range(len(back)) if y2 != y or w in good}
                    result.append(((side, c, x), (other, u, z), pairs))
        return result

    def csp(self, budget: int) -> BinaryCSP[_Var]:
        """Задача удовлетворения ограничений."""
        problem: BinaryCSP[_Var] = BinaryCSP(budget)
        for var, domain in self.variables().items():
            problem.add_variable(var, domain)
        for a, b, pairs in self.constraints():
            problem.add_constraint(a, b, pairs)
        return problem

    def certificate(self, assignment: dict[_Var, int]) -> InterleavingCertificate:
        """Сертификат из полного присваивания."""
        tables = {
            side: tuple(
                tuple(assignment[(side, c, x)] for x in range(len(self.source_sections[side][c])))
                for c in range(len(self.cells))
            )
            for side in ("phi", "psi")
        }
        return InterleavingCertificate(self.eps, tuple(self.cells), tables["phi"], tables["psi"])


def decide_interleaving(
    first: ConstructibleCosheaf,
    second: ConstructibleCosheaf,
    epsilon: Any,
    budget: int = DEFAULT_BUDGET,
) -> InterleavingResult:
    """Точно решает, существует ли ε-чередование; при исчерпании бюджета возвращает UNDECIDED."""
    eps = to_value(epsilon)
    if eps < 0:
        raise CosheafError(f"ε должно быть неотрицательным: {epsilon}")
    problem = InterleavingProblem(first, second, eps)
    csp = problem.csp(budget)
    decision, assignment = csp.solve()
    logger.debug(
        "Чередование при ε=%s: %s (%d переменных, %d узлов)",
        exact_str(eps),
        decision,
        len(csp.domains),
        csp.nodes,
    )
    if decision is Decision.UNDECIDED:
        logger.warning("Бюджет перебора %d исчерпан при ε=%s", budget, exact_str(eps))
    certificate = problem.certificate(assignment) if assignment is not None else None
    return InterleavingResult(decision, certificate, csp.nodes)


def verify_certificate(
    first: ConstructibleCosheaf, second: ConstructibleCosheaf, certificate: InterleavingCertificate
) -> bool:
    """Повторная проверка сертификата: естественность и обе композиции."""
    problem = InterleavingProblem(first, second, certificate.epsilon)
    if tuple(problem.cells) != certificate.cells:
        logger.debug("Ячейки сертификата не совпадают с измельчением")
        return False
    assignment: dict[_Var, int] = {}
    for side, table in (("phi", certificate.phi), ("psi", certificate.psi)):
        for c, images in enumerate(table):
            if len(images) != len(problem.source_sections[side][c]):
                logger.debug("Размер таблицы %s в ячейке %d не совпадает", side, c)
                return False
            for x, y in enumerate(images):
                assignment[(side, c, x)] = y
    csp = problem.csp(DEFAULT_BUDGET)
    return csp.consistent(assignment)


def component_count(cs: ConstructibleCosheaf) -> int:
    """Число компонент связности: значение косвязки на всей прямой."""
    if cs.n == 0:
        return 0
    return len(cs.section(cs.critical[0] - 1, cs.critical[-1] + 1))


def interleaving_distance_is_infinite(first: ConstructibleCosheaf, second: ConstructibleCosheaf) -> bool:
    """d_I бесконечно ровно тогда, когда различается число компонент связности."""
    return component_count(first) != component_count(second)


def d_I_bounds(  # pylint: disable=invalid-name
    first: ConstructibleCosheaf,
    second: ConstructibleCosheaf,
    tolerance: Any = Fraction(1, 1000),
    budget: int = DEFAULT_BUDGET,
) -> BoundInterval:
    """Гарантированный интервал [lo, hi] для d_I шириной не больше `tolerance`.

    lo есть наибольшее проверенное ε с ответом NO, hi есть наименьшее с ответом YES. Поиск начинается
    с кандидатов {|a − b|, |a − b|/2} по критическим значениям обеих косвязок и продолжается делением
    пополам. Если решение не уложилось в бюджет, поиск останавливается, а интервал помечается.
    """
    tol = to_value(tolerance)
    if tol <= 0:
        raise CosheafError(f"Точность должна быть положительной: {tolerance}")
    if interleaving_distance_is_infinite(first, second):
        return BoundInterval(math.inf, math.inf, "components", "components")
    if first.n == 0:
        return BoundInterval(Fraction(0), Fraction(0), "empty", "empty")

    certificates: dict[str, Any] = {}

    def decide(eps: Fraction) -> Decision:
        result = decide_interleaving(first, second, eps, budget)
        if result.certificate is not None:
            certificates["hi"] = result.certificate.to_dict()
        return result.decision

    values = sorted(set(first.critical) | set(second.critical))
    span = values[-1] - values[0]
    at_zero = decide(Fraction(0))
    if at_zero is Decision.YES:
        return BoundInterval(Fraction(0), Fraction(0), "epsilon=0", "certificate", certificates=certificates)
    if at_zero is Decision.UNDECIDED:
        return BoundInterval(Fraction(0), span, "trivial", "range", undecided=True)

    # при ε = span каждое I^ε, пересекающее носитель, покрывает его целиком, и чередование
    # задаётся биекцией компонент
    lo: Fraction = Fraction(0)
    hi: Fraction = span
    lo_source, hi_source = "epsilon=0", "range"
    undecided = False
    candidates = sorted({d for a in values for b in values for d in (abs(a - b), abs(a - b) / 2)} - {0})
    candidates = [c for c in candidates if c < span]
    # наименьший кандидат с ответом YES ищется делением списка пополам
    left, right = 0, len(candidates)
    while left < right:
        mid = (left + right) // 2
        eps = candidates[mid]
        decision = decide(eps)
        if decision is Decision.UNDECIDED:
            undecided = True
            break
        if decision is Decision.YES:
            hi, hi_source = eps, "certificate"
            right = mid
        else:
            lo, lo_source = eps, "decision"
            left = mid + 1
    while not undecided and hi - lo > tol:
        eps = (lo + hi) / 2
        decision = decide(eps)
        logger.debug("Деление пополам: ε=%s -> %s", exact_str(eps), decision)
        if decision is Decision.UNDECIDED:
            undecided = True
        elif decision is Decision.YES:
            hi, hi_source = eps, "certificate"
        else:
            lo, lo_source = eps, "decision"
    if hi_source != "certificate":
        certificates.pop("hi", None)
    return BoundInterval(lo, hi, lo_source, hi_source, undecided, certificates)
