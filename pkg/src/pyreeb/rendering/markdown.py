"""Markdown-отчёт по результатам проверки неравенств."""

from typing import Any

from pyreeb.interval import bound_str

from .table import Table


def _cell(value: Any) -> str:
    if value is None:
        return "—"
    if isinstance(value, bool):
        return "✓" if value else "✗"
    if isinstance(value, (int, str)):
        return str(value)
    return bound_str(value)


def render_table(table: Table) -> str:
    """Генерация markdown таблицы из объекта Table"""
    out: list[str] = []

    def writeln(s: str):
        out.append(s)

    # Заголовки
    writeln("| " + " | ".join(table.headers) + " |")
    writeln("|" + "|".join(["---"] * len(table.headers)) + "|")

    # Строки
    for row in table.rows:
        writeln("| " + " | ".join(_cell(cell) for cell in row) + " |")

    return "\n".join(out) + "\n"


def to_markdown(table: Table, summary: dict[str, Any]) -> str:
    """Отчёт: параметры и итоги прогона, затем таблица строк."""
    out: list[str] = []

    def para(*lines: str):
        out.extend(lines)
        out.append("")

    para("# Проверка неравенств d_I ≤ d_FD ≤ 7·d_I")
    para(*(f"- {key}: {_cell(value)}" for key, value in summary.items()))
    para("## Пары")
    out.append(render_table(table))
    return "\n".join(out)
