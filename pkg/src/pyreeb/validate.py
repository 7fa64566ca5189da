#!/usr/bin/env python3
"""
Валидатор JSON/YAML документов pyreeb по встроенным JSON Schema
"""

import argparse
import json
from pathlib import Path
import sys
from typing import Any, Optional

import jsonschema
from jsonschema import Draft7Validator, ValidationError, validate
import yaml

from .cosheaf import CERTIFICATE_SCHEMA
from .distortion import MAPPAIR_SCHEMA
from .persistence import DIAGRAM_SCHEMA
from .processor import CONFIG_SCHEMA

SCHEMAS: dict[str, dict[str, Any]] = {
    "diagram": DIAGRAM_SCHEMA,
    "certificate": CERTIFICATE_SCHEMA,
    "mappair": MAPPAIR_SCHEMA,
    "config": CONFIG_SCHEMA,
}


class NoDateLoader(yaml.SafeLoader):  # pylint: disable=too-many-ancestors
    """SafeLoader, оставляющий даты строками: `2024-01-01` в параметрах не превращается в `date`."""


NoDateLoader.yaml_implicit_resolvers = {
    first: [r for r in resolvers if r[0] != "tag:yaml.org,2002:timestamp"]
    for first, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}


def load_json(file_path: Path) -> Any:
    """Документ JSON."""
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"{file_path}: некорректный JSON: {e}") from e


def load_yaml(file_path: Path) -> Any:
    """Документ YAML, загруженный `NoDateLoader`."""
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return yaml.load(f, Loader=NoDateLoader)
    except yaml.YAMLError as e:
        raise ValueError(f"{file_path}: некорректный YAML: {e}") from e


def load_data(file_path: Path) -> Any:
    """Определяет тип файла по расширению и загружает данные"""
    suffix = file_path.suffix.lower()

    # pylint: disable=no-else-return
    if suffix == ".json":
        return load_json(file_path)
    elif suffix in [".yaml", ".yml"]:
        return load_yaml(file_path)
    else:
        raise ValueError(f"Неизвестное расширение файла {suffix}, поддерживаются только .json, .yaml, .yml")


def guess_kind(data: Any) -> str:
    """Вид документа по набору ключей верхнего уровня."""
    if isinstance(data, dict):
        if "points" in data:
            return "diagram"
        if "epsilon" in data:
            return "certificate"
        if "phi" in data and "mesh" in data:
            return "mappair"
    return "config"


def validate_file(
    data_file: Path,
    kind: Optional[str] = None,
    schema_path: Optional[str] = None,
    verbose: bool = False,
) -> bool:
    """
    Валидирует файл данных по встроенной схеме вида `kind` или по схеме из файла

    Returns:
        True если валидация прошла успешно, False если есть ошибки
    """
    try:
        data = load_data(data_file)
        if schema_path:
            schema = load_data(Path(schema_path))
            try:
                Draft7Validator.check_schema(schema)
            except jsonschema.SchemaError as e:
                print(f"Ошибка: некорректная схема: {e}")
                return False
        else:
            kind = kind or guess_kind(data)
            if kind not in SCHEMAS:
                print(f"Ошибка: неизвестный вид документа {kind}, допустимы: {', '.join(SCHEMAS)}")
                return False
            schema = SCHEMAS[kind]
        if verbose:
            print(f"Схема: {schema_path or kind}")

        try:
            validate(instance=data, schema=schema)
            print(f"✓ Файл {data_file} соответствует схеме")
            return True

        except ValidationError as e:
            print(f"✗ Ошибка валидации в файле {data_file}:")
            print(f"  Путь: {' -> '.join(str(p) for p in e.absolute_path)}")
            print(f"  Сообщение: {e.message}")
            if e.validator_value:
                print(f"  Ожидалось: {e.validator_value}")
            if e.instance is not None:
                print(f"  Получено: {e.instance}")
            return False

    except FileNotFoundError as e:
        print(f"Ошибка: файл не найден: {e}")
        return False
    except ValueError as e:
        print(f"Ошибка: {e}")
        return False


def add_arguments(parser: argparse.ArgumentParser) -> None:
    """Параметры валидатора (общие для `reebctl check` и `reebctl-validate`)."""
    parser.add_argument("data_file", type=Path, help="Путь к файлу данных (JSON или YAML)")
    parser.add_argument(
        "-k",
        "--kind",
        choices=sorted(SCHEMAS),
        help="Вид документа (по умолчанию определяется по содержимому)",
    )
    parser.add_argument("-s", "--schema", type=str, help="Путь к файлу схемы вместо встроенной")


def main():
    """Главная функция для запуска из командной строки валидатора документов."""
    parser = argparse.ArgumentParser(description="Валидатор JSON/YAML документов pyreeb по JSON Schema")
    add_arguments(parser)
    parser.add_argument("-v", "--verbose", action="store_true", help="Подробный вывод")

    args = parser.parse_args()

    if not args.data_file.exists():
        print(f"Ошибка: файл данных не существует: {args.data_file}")
        sys.exit(1)

    success = validate_file(args.data_file, args.kind, args.schema, args.verbose)

    if not success:
        sys.exit(1)


if __name__ == "__main__":
    main()
