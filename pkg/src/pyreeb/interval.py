"""Гарантированные интервальные оценки расстояний."""

from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Any

from pyreeb.util import exact_str

type Bound = Fraction | float  # float используется только для бесконечности


def bound_str(x: Bound) -> str:
    """Запись границы для JSON и CSV: точная дробь или `inf`."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return exact_str(x)


@dataclass
class BoundInterval:
    """Оценка [lo, hi] неизвестного расстояния с указанием источника каждой границы.

    :param lo_provenance: что обеспечило нижнюю границу (например, `dI`, `dB0`, `dB1/3`)
    :param hi_provenance: что обеспечило верхнюю границу (например, `certificate`, `isomorphism`)
    :param undecided: часть проверок не уложилась в бюджет, оценка может быть грубее заявленной точности
    :param certificates: данные для повторной проверки границ
    """

    lo: Bound
    hi: Bound
    lo_provenance: str = ""
    hi_provenance: str = ""
    undecided: bool = False
    certificates: dict[str, Any] = field(default_factory=dict)

    def consistent(self, slack: Any = Fraction(1, 10**9)) -> bool:
        """lo ≤ hi с допуском. Нарушение означает, что одна из гарантий неверна,
        поэтому такой интервал не отвергается, а сообщается вызывающему."""
        if math.isinf(self.lo):
            return math.isinf(self.hi)
        return self.lo <= self.hi + slack

    @property
    def width(self) -> Bound:
        """Ширина интервала."""
        if math.isinf(self.hi):
            return math.inf
        return self.hi - self.lo

    def contains(self, x: Any) -> bool:
        """Проверяет, лежит ли значение в интервале."""
        return self.lo <= x <= self.hi

    def to_dict(self) -> dict[str, Any]:
        """Словарь для JSON-сертификата."""
        return {
            "lo": bound_str(self.lo),
            "hi": bound_str(self.hi),
            "lo_provenance": self.lo_provenance,
            "hi_provenance": self.hi_provenance,
            "undecided": self.undecided,
            "certificates": self.certificates,
        }
