"""Точные значения функции: разбор десятичной записи в рациональные числа."""

from decimal import Decimal
from fractions import Fraction
import math
import re
from typing import Any

type Value = Fraction

# Десятичная запись: знак, цифры, необязательная дробная часть и экспонента.
_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


class ValueParseError(ValueError):
    """Ошибка при разборе значения функции."""
    pass  # pylint: disable=unnecessary-pass


def parse_value(text: str) -> Fraction:
    """Разбирает десятичную запись (например, `0.25`, `-3`, `1e-3`) в точное рациональное число.

    Двоичная погрешность float не возникает: `parse_value("0.1") == Fraction(1, 10)`.
    """
    s = text.strip()
    if not _DECIMAL_RE.match(s):
        raise ValueParseError(f"Некорректное десятичное значение: {text!r}")
    return Fraction(s)


def to_value(x: Any) -> Fraction:
    """Приводит число к Fraction.

    float переводится через кратчайшую десятичную запись (`0.1` -> 1/10), строки разбираются
    как десятичные, int, Decimal и Fraction переводятся точно.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValueParseError(f"Логическое значение не является числом: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Decimal):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueParseError(f"Значение должно быть конечным: {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return parse_value(x)
    raise ValueParseError(f"Неподдерживаемый тип значения: {type(x)}")


def format_value(x: Fraction | float) -> str:
    """Форматирует значение для текстовых форматов: конечные десятичные дроби как `0.25`, остальные как `p/q`."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    if x.denominator == 1:
        return str(x.numerator)
    d, twos, fives = x.denominator, 0, 0
    # знаменатель вида 2^a 5^b даёт конечную десятичную дробь
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x.numerator) * (10**digits // x.denominator)
    int_part, frac_part = divmod(scaled, 10**digits)
    frac = str(frac_part).rjust(digits, "0").rstrip("0")
    sign = "-" if x < 0 else ""
    return f"{sign}{int_part}.{frac}" if frac else f"{sign}{int_part}"


def exact_str(x: Fraction) -> str:
    """Точная запись значения: конечная десятичная дробь или `p/q`."""
    return format_value(x)


def parse_exact(text: str) -> Fraction:
    """Разбирает запись `exact_str` (десятичную или `p/q`)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueParseError(f"Некорректное точное значение: {text!r}") from e
