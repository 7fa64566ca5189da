"""Запись таблицы в CSV."""

import csv
from datetime import datetime, timezone
import io
from typing import Any, Optional

from pyreeb.interval import bound_str

from .table import Table


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    return bound_str(value)


def render_csv(table: Table, timestamp: Optional[datetime] = None) -> str:
    """CSV с заголовком столбцов. Если задана метка времени, первой идёт строка `# generated <ISO>`."""
    out = io.StringIO()
    if timestamp is not None:
        out.write(f"# generated {timestamp.astimezone(timezone.utc).isoformat(timespec='seconds')}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.headers)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return out.getvalue()
