"""Проверка неравенств между d_I, d_FD и расстояниями bottleneck на наборе пар графов.

Для каждой пары вычисляются гарантированные интервалы d_I и d_FD и расстояния bottleneck диаграмм
Dg₀ и ExDg₁. Проверки сравнивают концы интервалов в направлении, в котором неравенство могло бы
нарушиться: нарушение любой проверки означает ошибку одной из гарантий.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime
from fractions import Fraction
import json
import logging
import math
import time
from typing import Any, Optional

import jsonschema
import numpy as np

from .cosheaf import DEFAULT_BUDGET, cosheaf_of, d_I_bounds
from .distortion import DEFAULT_MESH, DEFAULT_SEARCH_BUDGET, fdd_bounds
from .generate import generate_random_reeb
from .graph import ReebGraph, read_reeb
from .interval import Bound, bound_str
from .persistence import bottleneck, extended_diagrams
from .rendering import Table, render_csv, to_markdown
from .util import from_dict_dataclass, to_value

logger = logging.getLogger(__name__)

SLACK = Fraction(1, 10**9)

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Параметры проверки неравенств",
    "type": "object",
    "properties": {
        "trials": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0},
        "tolerance": {"type": ["number", "string"]},
        "mesh": {"type": ["number", "string"]},
        "budget": {"type": "integer", "minimum": 0},
        "node_budget": {"type": "integer", "minimum": 1},
        "max_vertices": {"type": "integer", "minimum": 2},
        "max_loops": {"type": "integer", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
        "pairs": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        },
    },
    "additionalProperties": False,
}


class SandwichConfigError(ValueError):
    """Недопустимые параметры проверки неравенств."""
    pass  # pylint: disable=unnecessary-pass


@dataclass
class SandwichConfig:  # pylint: disable=too-many-instance-attributes
    """Параметры прогона.

    :param trials: число случайных пар (если `pairs` пуст)
    :param tolerance: точность интервала d_I
    :param mesh: шаг подразбиения отображений для d_FD
    :param budget: шаги локального поиска пары отображений
    :param node_budget: узлы перебора на одно решение о чередовании
    :param pairs: явные пары файлов `.reeb` вместо случайных графов
    """

    trials: int = 10
    seed: int = 0
    tolerance: Fraction = Fraction(1, 1000)
    mesh: Fraction = DEFAULT_MESH
    budget: int = DEFAULT_SEARCH_BUDGET
    node_budget: int = DEFAULT_BUDGET
    max_vertices: int = 8
    max_loops: int = 2
    workers: int = 1
    pairs: list[list[str]] = field(default_factory=list)

    def __post_init__(self):
        try:
            self.tolerance = to_value(self.tolerance)
            self.mesh = to_value(self.mesh)
        except ValueError as e:
            raise SandwichConfigError(f"Некорректное число в параметрах: {e}") from e
        if self.trials < 0:
            raise SandwichConfigError(f"Число пар не может быть отрицательным: {self.trials}")
        if self.tolerance <= 0:
            raise SandwichConfigError(f"Точность должна быть положительной: {self.tolerance}")
        if self.mesh <= 0:
            raise SandwichConfigError(f"Шаг подразбиения должен быть положительным: {self.mesh}")
        if self.budget < 0 or self.node_budget < 1:
            raise SandwichConfigError("Бюджеты поиска должны быть положительными")
        if self.max_vertices < 2 or self.max_loops < 0:
            raise SandwichConfigError(
                f"Нужно max_vertices ≥ 2 и max_loops ≥ 0: {self.max_vertices}, {self.max_loops}"
            )
        if self.workers < 1:
            raise SandwichConfigError(f"Число процессов должно быть положительным: {self.workers}")

    @staticmethod
    def from_dict(data: dict) -> "SandwichConfig":
        """Разбор словаря (JSON или YAML) с проверкой схемой."""
        try:
            jsonschema.validate(instance=data, schema=CONFIG_SCHEMA)
        except jsonschema.ValidationError as e:
            raise SandwichConfigError(f"Параметры не соответствуют схеме: {e.message}") from e
        try:
            return from_dict_dataclass(
                SandwichConfig,
                data,
                special_fields={
                    "tolerance": lambda _, v: to_value(v),
                    "mesh": lambda _, v: to_value(v),
                },
            )
        except SandwichConfigError:
            raise
        except ValueError as e:
            raise SandwichConfigError(str(e)) from e

    def to_dict(self) -> dict[str, Any]:
        """Словарь для JSON-приложения к отчёту."""
        data = asdict(self)
        data["tolerance"] = bound_str(self.tolerance)
        data["mesh"] = bound_str(self.mesh)
        return data


@dataclass
class SandwichRow:  # pylint: disable=too-many-instance-attributes
    """Результаты для одной пары графов.

    c1: dI_lo ≤ dFD_hi; c2: dFD_lo ≤ 7·dI_hi; c3: dB0 ≤ dFD_hi; c4: dB1 ≤ 3·dFD_hi;
    c5: dB0 ≤ 7·dI_hi и dB1 ≤ 21·dI_hi. Все сравнения с допуском SLACK.
    """

    pair_id: str
    seed: int
    dI_lo: Bound  # pylint: disable=invalid-name
    dI_hi: Bound  # pylint: disable=invalid-name
    dFD_lo: Bound  # pylint: disable=invalid-name
    dFD_hi: Bound  # pylint: disable=invalid-name
    dB0: Fraction  # pylint: disable=invalid-name
    dB1: Fraction  # pylint: disable=invalid-name
    undecided: bool = False
    runtimes: dict[str, float] = field(default_factory=dict)
    certificates: dict[str, Any] = field(default_factory=dict)

    @property
    def checks(self) -> dict[str, bool]:
        """Значения проверок c1…c5, вычисленные по хранимым границам."""
        return {
            "c1": _leq(self.dI_lo, self.dFD_hi),
            "c2": _leq(self.dFD_lo, _times(7, self.dI_hi)),
            "c3": _leq(self.dB0, self.dFD_hi),
            "c4": _leq(self.dB1, _times(3, self.dFD_hi)),
            "c5": _leq(self.dB0, _times(7, self.dI_hi)) and _leq(self.dB1, _times(21, self.dI_hi)),
        }

    @property
    def falsified(self) -> bool:
        """Хотя бы одна проверка нарушена."""
        return not all(self.checks.values())

    @property
    def status(self) -> str:
        """`falsified`, `undecided` или `ok`."""
        if self.falsified:
            return "falsified"
        if self.undecided:
            return "undecided"
        return "ok"

    @property
    def ratio_fd_i(self) -> Optional[Bound]:
        """dFD_hi / dI_lo: наблюдаемая константа в d_FD ≤ c·d_I."""
        if self.dI_lo <= 0 or math.isinf(self.dI_lo):
            return None
        if math.isinf(self.dFD_hi):
            return math.inf
        return self.dFD_hi / self.dI_lo  # type: ignore[operator]

    def to_dict(self) -> dict[str, Any]:
        """Словарь для JSON-приложения: границы, проверки и сертификаты."""
        ratio = self.ratio_fd_i
        return {
            "pair_id": self.pair_id,
            "seed": self.seed,
            "dI": [bound_str(self.dI_lo), bound_str(self.dI_hi)],
            "dFD": [bound_str(self.dFD_lo), bound_str(self.dFD_hi)],
            "dB0": bound_str(self.dB0),
            "dB1": bound_str(self.dB1),
            "checks": self.checks,
            "ratio_fd_i": bound_str(ratio) if ratio is not None else None,
            "status": self.status,
            "runtimes": self.runtimes,
            "certificates": self.certificates,
        }


def _leq(a: Bound, b: Bound) -> bool:
    if math.isinf(b):
        return True
    if math.isinf(a):
        return False
    return a <= b + SLACK


def _times(k: int, x: Bound) -> Bound:
    return math.inf if math.isinf(x) else k * x


ROW_COLUMNS = [
    "pair_id", "seed", "dI_lo", "dI_hi", "dFD_lo", "dFD_hi", "dB0", "dB1",
    "c1", "c2", "c3", "c4", "c5", "ratio_fd_i", "status",
]
RUNTIME_COLUMNS = ["t_dI", "t_dFD", "t_dB"]


def rows_table(rows: list[SandwichRow], timings: bool = False) -> Table:
    """Таблица строк отчёта; время вычислений добавляется только по запросу."""
    table = Table(ROW_COLUMNS + (RUNTIME_COLUMNS if timings else []))
    for row in rows:
        checks = row.checks
        values: list[Any] = [
            row.pair_id, row.seed, row.dI_lo, row.dI_hi, row.dFD_lo, row.dFD_hi, row.dB0, row.dB1,
            checks["c1"], checks["c2"], checks["c3"], checks["c4"], checks["c5"],
            row.ratio_fd_i, row.status,
        ]
        if timings:
            values += [f"{row.runtimes.get(k[2:], 0.0):.3f}" for k in RUNTIME_COLUMNS]
        table.append(values)
    return table


def evaluate_row(
    pair_id: str,
    x: ReebGraph,
    y: ReebGraph,
    seed: int,
    config: SandwichConfig,
) -> SandwichRow:
    """Все оценки и проверки для одной пары."""
    started = time.perf_counter()
    d_i = d_I_bounds(cosheaf_of(x), cosheaf_of(y), config.tolerance, config.node_budget)
    t_di = time.perf_counter() - started

    started = time.perf_counter()
    dg0_x, ex1_x = extended_diagrams(x)
    dg0_y, ex1_y = extended_diagrams(y)
    db0 = bottleneck(dg0_x, dg0_y)
    db1 = bottleneck(ex1_x, ex1_y)
    t_db = time.perf_counter() - started

    started = time.perf_counter()
    d_fd = fdd_bounds(
        x, y, config.mesh, config.budget, seed, config.tolerance, config.node_budget, interleaving=d_i
    )
    t_dfd = time.perf_counter() - started

    row = SandwichRow(
        pair_id=pair_id,
        seed=seed,
        dI_lo=d_i.lo,
        dI_hi=d_i.hi,
        dFD_lo=d_fd.lo,
        dFD_hi=d_fd.hi,
        dB0=db0,
        dB1=db1,
        undecided=d_i.undecided or d_fd.undecided,
        runtimes={"dI": t_di, "dFD": t_dfd, "dB": t_db},
        certificates={"dI": d_i.to_dict(), "dFD": d_fd.to_dict()},
    )
    if row.falsified:
        failed = [name for name, ok in row.checks.items() if not ok]
        logger.warning("Пара %s: нарушены проверки %s", pair_id, ", ".join(failed))
    else:
        logger.info("Пара %s: %s", pair_id, row.status)
    return row


def _evaluate_packed(args: tuple[str, ReebGraph, ReebGraph, int, SandwichConfig]) -> SandwichRow:
    return evaluate_row(*args)


def random_pairs(config: SandwichConfig) -> list[tuple[str, ReebGraph, ReebGraph, int]]:
    """Случайные пары графов; параметры каждой пары определяются зерном прогона и номером пары."""
    result = []
    for i in range(config.trials):
        rng = np.random.default_rng([config.seed, i])
        graphs = []
        for _ in range(2):
            n = int(rng.integers(2, config.max_vertices + 1))
            loops = int(rng.integers(0, min(config.max_loops, n * (n - 1) // 2) + 1))
            graphs.append(generate_random_reeb(n, loops, int(rng.integers(2**31))))
        result.append((f"pair-{i:04d}", graphs[0], graphs[1], int(rng.integers(2**31))))
    return result


def file_pairs(config: SandwichConfig) -> list[tuple[str, ReebGraph, ReebGraph, int]]:
    """Пары из файлов `.reeb`, перечисленных в параметрах."""
    result = []
    for i, (a, b) in enumerate(config.pairs):
        result.append((f"{a}~{b}", read_reeb(a), read_reeb(b), config.seed + i))
    return result


def sandwich_report(
    pairs: list[tuple[str, ReebGraph, ReebGraph, int]],
    config: Optional[SandwichConfig] = None,
) -> list[SandwichRow]:
    """Оценки и проверки для всех пар. Строки упорядочены по идентификатору пары
    независимо от порядка завершения вычислений."""
    config = config if config is not None else SandwichConfig()
    jobs = [(pair_id, x, y, seed, config) for pair_id, x, y, seed in pairs]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_evaluate_packed, jobs))
    else:
        rows = [_evaluate_packed(job) for job in jobs]
    return sorted(rows, key=lambda r: r.pair_id)


def summary(rows: list[SandwichRow]) -> dict[str, Any]:
    """Итоги прогона."""
    ratios = [r.ratio_fd_i for r in rows if r.ratio_fd_i is not None]
    return {
        "Пар": len(rows),
        "Нарушений": sum(1 for r in rows if r.falsified),
        "Не решено": sum(1 for r in rows if r.undecided),
        "Наибольшее dFD_hi / dI_lo": max(ratios) if ratios else None,
    }


@dataclass
class OutputParams:
    """Параметры вывода отчёта."""

    csv_path: Optional[str] = None
    json_path: Optional[str] = None
    mdown_path: Optional[str] = None
    timestamp: bool = True
    timings: bool = False
    print_flag: bool = True


def process_data(
    rows: list[SandwichRow],
    config: SandwichConfig,
    output_params: OutputParams,
) -> None:
    """Запись отчёта в CSV, JSON-приложение с сертификатами и Markdown."""
    logger.debug("Output params: %s", output_params)
    table = rows_table(rows, output_params.timings)
    stamp = datetime.now().astimezone() if output_params.timestamp else None
    csv_text = render_csv(table, stamp)

    if output_params.print_flag:
        print(csv_text, end="")
    if output_params.csv_path:
        with open(output_params.csv_path, "w", encoding="utf-8", newline="") as f:
            f.write(csv_text)
        logger.info("CSV сохранён в %s", output_params.csv_path)
    if output_params.json_path:
        with open(output_params.json_path, "w", encoding="utf-8") as f:
            json.dump(
                {"config": config.to_dict(), "rows": [r.to_dict() for r in rows]},
                f,
                indent=2,
                ensure_ascii=False,
            )
            f.write("\n")
        logger.info("Сертификаты сохранены в %s", output_params.json_path)
    if output_params.mdown_path:
        with open(output_params.mdown_path, "w", encoding="utf-8") as f:
            f.write(to_markdown(table, summary(rows)))
        logger.info("Markdown сохранён в %s", output_params.mdown_path)
