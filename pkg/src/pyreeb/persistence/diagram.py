"""Диаграммы устойчивости и их JSON-представление."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import json
import logging
from typing import Any, Iterable

import jsonschema

from pyreeb.util import format_value, to_value

logger = logging.getLogger(__name__)


class PairKind(Enum):
    """Вид пары расширенной устойчивости."""

    ORDINARY = "ord"
    EXTENDED = "ext"
    RELATIVE = "rel"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DiagramPoint:
    """Точка диаграммы. Для точек ExDg₁ рождение не меньше смерти (значение подъёма, значение спуска)."""

    birth: Fraction
    death: Fraction
    dim: int
    kind: PairKind

    @property
    def persistence(self) -> Fraction:
        """Расстояние до диагонали в норме ∞: |смерть − рождение| / 2."""
        return abs(self.death - self.birth) / 2

    def __str__(self) -> str:
        return f"({format_value(self.birth)}, {format_value(self.death)}) {self.kind}{self.dim}"


# Классы точек, сравниваемые расстоянием bottleneck
DIAGRAM_CLASSES = {
    "dim0": (0, (PairKind.ORDINARY, PairKind.EXTENDED)),
    "ext1": (1, (PairKind.EXTENDED,)),
}

DIAGRAM_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Диаграмма устойчивости",
    "type": "object",
    "required": ["points"],
    "properties": {
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["dim", "kind", "birth", "death"],
                "properties": {
                    "dim": {"type": "integer", "enum": [0, 1]},
                    "kind": {"type": "string", "enum": ["ord", "ext", "rel"]},
                    "birth": {"type": ["number", "string"]},
                    "death": {"type": ["number", "string"]},
                },
                "additionalProperties": False,
            },
        }
    },
    "additionalProperties": True,
}


@dataclass(frozen=True)
class PersistenceDiagram:
    """Мультимножество точек диаграммы (хранится отсортированным)."""

    points: tuple[DiagramPoint, ...] = ()

    @classmethod
    def of(cls, points: Iterable[DiagramPoint]) -> "PersistenceDiagram":
        """Диаграмма из произвольной последовательности точек."""
        return cls(tuple(sorted(points, key=lambda p: (p.birth, p.death, p.dim, p.kind.value))))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[Any, Any]], dim: int = 0, kind: PairKind = PairKind.EXTENDED
    ) -> "PersistenceDiagram":
        """Диаграмма из пар (рождение, смерть) одного класса."""
        return cls.of(DiagramPoint(to_value(b), to_value(d), dim, kind) for b, d in pairs)

    def __len__(self) -> int:
        return len(self.points)

    def __add__(self, other: "PersistenceDiagram") -> "PersistenceDiagram":
        return PersistenceDiagram.of(self.points + other.points)

    def restrict(self, diagram_class: str) -> "PersistenceDiagram":
        """Точки класса `dim0` (все пары размерности 0) или `ext1` (расширенные пары размерности 1)."""
        try:
            dim, kinds = DIAGRAM_CLASSES[diagram_class]
        except KeyError as e:
            raise ValueError(f"Неизвестный класс диаграммы: {diagram_class}") from e
        return PersistenceDiagram(tuple(p for p in self.points if p.dim == dim and p.kind in kinds))

    def shifted(self, c: Any) -> "PersistenceDiagram":
        """Сдвиг всех точек на (c, c)."""
        delta = to_value(c)
        return PersistenceDiagram.of(
            DiagramPoint(p.birth + delta, p.death + delta, p.dim, p.kind) for p in self.points
        )

    def to_dict(self) -> dict[str, Any]:
        """JSON-совместимый словарь; значения записываются числами."""
        return {
            "points": [
                {"dim": p.dim, "kind": p.kind.value, "birth": _number(p.birth), "death": _number(p.death)}
                for p in self.points
            ]
        }

    @staticmethod
    def from_dict(data: dict) -> "PersistenceDiagram":
        """Разбор словаря с проверкой схемой."""
        try:
            jsonschema.validate(instance=data, schema=DIAGRAM_SCHEMA)
        except jsonschema.ValidationError as e:
            raise ValueError(f"Диаграмма не соответствует схеме: {e.message}") from e
        return PersistenceDiagram.of(
            DiagramPoint(to_value(p["birth"]), to_value(p["death"]), p["dim"], PairKind(p["kind"]))
            for p in data["points"]
        )


def _number(x: Fraction) -> int | float:
    return x.numerator if x.denominator == 1 else float(x)


def write_diagram(diagram: PersistenceDiagram, path: str) -> None:
    """Записывает диаграмму в JSON-файл."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(diagram.to_dict(), f, indent=2, ensure_ascii=False)
        f.write("\n")
    logger.info("Диаграмма записана в %s", path)


def read_diagram(path: str) -> PersistenceDiagram:
    """Читает диаграмму из JSON-файла."""
    with open(path, "r", encoding="utf-8") as f:
        return PersistenceDiagram.from_dict(json.load(f))
