"""Вспомогательные функции: точные значения, union-find, разбор словарей в dataclass."""
from .values import Value, ValueParseError, exact_str, format_value, parse_exact, parse_value, to_value
from .unionfind import UnionFind
from .from_dict import from_dict_dataclass

__all__ = [
    "Value",
    "ValueParseError",
    "parse_value",
    "to_value",
    "format_value",
    "exact_str",
    "parse_exact",
    "UnionFind",
    "from_dict_dataclass",
]
