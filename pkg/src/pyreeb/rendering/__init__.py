"""Вывод отчётов: таблица, CSV, Markdown."""
from .table import Table
from .csv_table import render_csv
from .markdown import render_table, to_markdown

__all__ = ["Table", "render_csv", "render_table", "to_markdown"]
