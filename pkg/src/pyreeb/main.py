#! /usr/bin/env python3
"""Команда `reebctl`: графы Риба, сглаживание, расстояния и проверка неравенств.

`reebctl -h` показывает справку, `reebctl <команда> -h` показывает параметры команды.

Коды завершения: 0 успех, 1 ошибка входных данных, 2 исчерпан бюджет перебора (ответ не получен),
3 в отчёте есть нарушенные проверки.
"""
import argparse
import json
import logging
from pathlib import Path
import sys
from typing import Any, Optional

import yaml

from .cosheaf import (
    DEFAULT_BUDGET,
    Decision,
    cosheaf_of,
    d_I_bounds,
    decide_interleaving,
)
from .distortion import DEFAULT_SEARCH_BUDGET, fdd_bounds
from .generate import generate_random_reeb
from .graph import (
    betti_numbers,
    d_f,
    parse_point,
    read_complex,
    read_reeb,
    reeb_of_complex,
    smooth,
    write_reeb,
)
from .interval import BoundInterval, bound_str
from .persistence import bottleneck, extended_persistence, read_diagram, write_diagram
from .processor import (
    OutputParams,
    SandwichConfig,
    file_pairs,
    process_data,
    random_pairs,
    sandwich_report,
)
from .util import parse_value
from .validate import add_arguments as add_check_arguments
from .validate import load_data, validate_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDECIDED = 2
EXIT_FALSIFIED = 3


def _init_logging(level: int = logging.INFO) -> None:
    logging.basicConfig(
        level=level, format="%(levelname)s:%(name)s: %(message)s"
    )
    logger.setLevel(level)


def _print_json(data: Any, output: Optional[str] = None) -> None:
    text = json.dumps(data, indent=2, ensure_ascii=False)
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        logger.info("Результат сохранён в %s", output)
    else:
        print(text)


def _interval_exit(interval: BoundInterval) -> int:
    return EXIT_UNDECIDED if interval.undecided else EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    """Проверка файла `.reeb`."""
    graph = read_reeb(args.file)
    components, cycles = betti_numbers(graph)
    print(
        f"✓ {args.file}: {len(graph.vertices)} вершин, {len(graph.edges)} рёбер, "
        f"компонент {components}, циклов {cycles}"
    )
    return EXIT_OK


def cmd_reeb(args: argparse.Namespace) -> int:
    """Граф Риба кусочно-линейной функции на комплексе `.plc`."""
    plc = read_complex(args.input, lenient=args.lenient)
    write_reeb(reeb_of_complex(plc), args.output or sys.stdout)
    return EXIT_OK


def cmd_smooth(args: argparse.Namespace) -> int:
    """ε-сглаживание графа."""
    graph = read_reeb(args.input)
    write_reeb(smooth(graph, parse_value(args.epsilon)), args.output or sys.stdout)
    return EXIT_OK


def cmd_df(args: argparse.Namespace) -> int:
    """Расстояние d_f между двумя точками графа."""
    graph = read_reeb(args.input)
    print(bound_str(d_f(graph, parse_point(args.source), parse_point(args.target))))
    return EXIT_OK


def cmd_diagram(args: argparse.Namespace) -> int:
    """Диаграммы расширенной устойчивости."""
    diagram = extended_persistence(read_reeb(args.input)).all
    if args.output:
        write_diagram(diagram, args.output)
    else:
        _print_json(diagram.to_dict())
    return EXIT_OK


def cmd_bottleneck(args: argparse.Namespace) -> int:
    """Расстояние bottleneck между диаграммами одного класса."""
    first = read_diagram(args.first).restrict(args.diagram_class)
    second = read_diagram(args.second).restrict(args.diagram_class)
    print(bound_str(bottleneck(first, second)))
    return EXIT_OK


def cmd_interleave(args: argparse.Namespace) -> int:
    """Решение о ε-чередовании или интервал для d_I."""
    first = cosheaf_of(read_reeb(args.first))
    second = cosheaf_of(read_reeb(args.second))
    if args.epsilon is not None:
        result = decide_interleaving(first, second, parse_value(args.epsilon), args.node_budget)
        print(result.decision)
        if result.certificate is not None and args.output:
            _print_json(result.certificate.to_dict(), args.output)
        return EXIT_UNDECIDED if result.decision is Decision.UNDECIDED else EXIT_OK
    interval = d_I_bounds(first, second, parse_value(args.tol), args.node_budget)
    _print_json(interval.to_dict(), args.output)
    return _interval_exit(interval)


def cmd_fdd(args: argparse.Namespace) -> int:
    """Гарантированный интервал для d_FD."""
    interval = fdd_bounds(
        read_reeb(args.first),
        read_reeb(args.second),
        mesh=parse_value(args.mesh),
        budget=args.budget,
        seed=args.seed,
        tolerance=parse_value(args.tol),
        interleaving_budget=args.node_budget,
    )
    _print_json(interval.to_dict(), args.output)
    if not interval.consistent():
        return EXIT_FALSIFIED
    return _interval_exit(interval)


def cmd_gen(args: argparse.Namespace) -> int:
    """Случайный граф Риба."""
    graph = generate_random_reeb(args.vertices, args.loops, args.seed)
    write_reeb(graph, args.output or sys.stdout)
    return EXIT_OK


def load_config(args: argparse.Namespace) -> SandwichConfig:
    """Параметры прогона: файл `-c` и переопределения из командной строки."""
    data: dict[str, Any] = {}
    if args.config:
        loaded = load_data(Path(args.config))
        if not isinstance(loaded, dict):
            raise ValueError(f"Файл параметров {args.config} должен содержать объект")
        data.update(loaded)
    overrides = {
        "trials": args.trials,
        "seed": args.seed,
        "tolerance": args.tol,
        "mesh": args.mesh,
        "budget": args.budget,
        "node_budget": args.node_budget,
        "max_vertices": args.max_vertices,
        "max_loops": args.max_loops,
        "workers": args.workers,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return SandwichConfig.from_dict(data)


def cmd_sandwich(args: argparse.Namespace) -> int:
    """Проверка неравенств на наборе пар."""
    config = load_config(args)
    pairs = file_pairs(config) if config.pairs else random_pairs(config)
    rows = sandwich_report(pairs, config)
    json_path = args.certificates
    if json_path is None and args.output:
        json_path = args.output.rsplit(".", 1)[0] + ".json"
    process_data(
        rows,
        config,
        OutputParams(
            csv_path=args.output,
            json_path=json_path,
            mdown_path=args.markdown,
            timestamp=not args.no_timestamp,
            timings=args.timings,
            print_flag=args.output is None,
        ),
    )
    if any(r.falsified for r in rows):
        return EXIT_FALSIFIED
    if any(r.undecided for r in rows):
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    """Проверка JSON/YAML документа встроенной схемой."""
    return EXIT_OK if validate_file(args.data_file, args.kind, args.schema, args.verbose) else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    """Парсер командной строки со всеми подкомандами."""
    parser = argparse.ArgumentParser(
        prog="reebctl", description="Графы Риба: сглаживание, расстояния и проверка неравенств"
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Выводить отладочную информацию (по умолчанию False)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Проверить файл .reeb")
    p.add_argument("file", help="Файл .reeb")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reeb", help="Построить граф Риба по комплексу .plc")
    p.add_argument("input", help="Файл .plc")
    p.add_argument("-o", "--output", help="Файл .reeb (по умолчанию стандартный вывод)")
    p.add_argument("--lenient", action="store_true", help="Достраивать отсутствующие грани")
    p.set_defaults(func=cmd_reeb)

    p = sub.add_parser("smooth", help="ε-сглаживание графа")
    p.add_argument("input", help="Файл .reeb")
    p.add_argument("--epsilon", required=True, help="Параметр сглаживания ε ≥ 0")
    p.add_argument("-o", "--output", help="Файл .reeb (по умолчанию стандартный вывод)")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("df", help="Расстояние d_f между точками")
    p.add_argument("input", help="Файл .reeb")
    p.add_argument("--from", dest="source", required=True, help="Точка v<id> или e<id>:<s>")
    p.add_argument("--to", dest="target", required=True, help="Точка v<id> или e<id>:<s>")
    p.set_defaults(func=cmd_df)

    p = sub.add_parser("diagram", help="Диаграммы расширенной устойчивости")
    p.add_argument("input", help="Файл .reeb")
    p.add_argument("-o", "--output", help="Файл JSON (по умолчанию стандартный вывод)")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("bottleneck", help="Расстояние bottleneck между диаграммами")
    p.add_argument("first", help="Первая диаграмма JSON")
    p.add_argument("second", help="Вторая диаграмма JSON")
    p.add_argument(
        "--class", dest="diagram_class", choices=["dim0", "ext1"], default="dim0", help="Класс точек"
    )
    p.set_defaults(func=cmd_bottleneck)

    search = argparse.ArgumentParser(add_help=False)
    group = search.add_argument_group("Параметры перебора")
    group.add_argument(
        "--node-budget",
        type=int,
        default=DEFAULT_BUDGET,
        help=f"Узлы перебора на одно решение о чередовании (по умолчанию {DEFAULT_BUDGET})",
    )

    p = sub.add_parser("interleave", parents=[search], help="Расстояние чередования d_I")
    p.add_argument("first", help="Первый файл .reeb")
    p.add_argument("second", help="Второй файл .reeb")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--epsilon", help="Решить, существует ли ε-чередование")
    mode.add_argument("--tol", help="Найти интервал для d_I шириной не больше tol")
    p.add_argument("-o", "--output", help="Файл JSON для сертификата или интервала")
    p.set_defaults(func=cmd_interleave)

    p = sub.add_parser("fdd", parents=[search], help="Оценки функционального искажения d_FD")
    p.add_argument("first", help="Первый файл .reeb")
    p.add_argument("second", help="Второй файл .reeb")
    p.add_argument("--mesh", default="0.05", help="Шаг подразбиения (по умолчанию 0.05)")
    p.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_SEARCH_BUDGET,
        help=f"Шаги локального поиска (по умолчанию {DEFAULT_SEARCH_BUDGET})",
    )
    p.add_argument("--seed", type=int, default=0, help="Зерно случайного поиска")
    p.add_argument("--tol", default="0.001", help="Точность интервала d_I")
    p.add_argument("-o", "--output", help="Файл JSON для интервала и сертификатов")
    p.set_defaults(func=cmd_fdd)

    p = sub.add_parser("gen", help="Случайный граф Риба")
    p.add_argument("--vertices", type=int, required=True, help="Число вершин (не меньше 2)")
    p.add_argument("--loops", type=int, default=0, help="Число независимых циклов")
    p.add_argument("--seed", type=int, default=0, help="Зерно генератора")
    p.add_argument("-o", "--output", help="Файл .reeb (по умолчанию стандартный вывод)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sandwich", help="Проверка неравенств d_I ≤ d_FD ≤ 7·d_I и устойчивости диаграмм")
    p.add_argument("-c", "--config", help="Файл параметров (YAML или JSON)")
    params = p.add_argument_group("Параметры прогона", "Переопределяют значения из файла параметров")
    params.add_argument("--trials", type=int, help="Число случайных пар")
    params.add_argument("--seed", type=int, help="Зерно прогона")
    params.add_argument("--tol", help="Точность интервала d_I")
    params.add_argument("--mesh", help="Шаг подразбиения отображений")
    params.add_argument("--budget", type=int, help="Шаги локального поиска пары отображений")
    params.add_argument("--node-budget", type=int, help="Узлы перебора на одно решение о чередовании")
    params.add_argument("--max-vertices", type=int, help="Наибольшее число вершин случайного графа")
    params.add_argument("--max-loops", type=int, help="Наибольшее число циклов случайного графа")
    params.add_argument("--workers", type=int, help="Число процессов")
    outputs = p.add_argument_group("Параметры выходных файлов")
    outputs.add_argument("-o", "--output", help="Файл CSV (по умолчанию стандартный вывод)")
    outputs.add_argument("--certificates", help="Файл JSON с сертификатами (по умолчанию рядом с CSV)")
    outputs.add_argument("--markdown", help="Файл Markdown с итоговой таблицей")
    outputs.add_argument("--no-timestamp", action="store_true", help="Не писать строку с временем создания")
    outputs.add_argument("--timings", action="store_true", help="Добавить в CSV время вычислений")
    p.set_defaults(func=cmd_sandwich)

    p = sub.add_parser("check", help="Проверить JSON/YAML документ встроенной схемой")
    add_check_arguments(p)
    p.set_defaults(func=cmd_check)
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    """Выполняет команду и возвращает код завершения."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, force=True)
        logger.setLevel(logging.DEBUG)
        logger.debug("Включён подробный вывод")
    try:
        return args.func(args)
    except (ValueError, OSError, yaml.YAMLError) as e:
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    """Точка входа `reebctl`."""
    _init_logging()
    sys.exit(run())


if __name__ == "__main__":
    main()
