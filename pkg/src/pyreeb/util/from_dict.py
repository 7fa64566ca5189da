import dataclasses
import logging
from typing import Any, Callable, Optional, get_args, get_origin

logger = logging.getLogger(__name__)


def from_dict_dataclass[T](
    clazz: type[T],
    data: dict,
    special_fields: Optional[dict[str, Callable[[str, Any], Any]]] = None,
) -> T:
    """Создаёт объект dataclass из словаря (JSON или YAML).

    Поля из `special_fields` преобразуются заданной функцией `(имя, значение) -> значение`,
    остальные приводятся к аннотированному типу. Неизвестные поля считаются ошибкой,
    отсутствующие поля получают значения по умолчанию. `__post_init__` вызывается как обычно.
    """
    if special_fields is None:
        special_fields = {}
    logger.debug("from_dict_dataclass: clazz=%s, data=%s", clazz, data)
    fields = {f.name: f for f in dataclasses.fields(clazz)}  # type: ignore[arg-type]
    unknown = sorted(set(data) - set(fields))
    if unknown:
        raise ValueError(f"Неизвестные поля для {clazz.__name__}: {', '.join(unknown)}")
    kwargs: dict[str, Any] = {}
    for name, spec in fields.items():
        if name not in data:
            if spec.default is dataclasses.MISSING and spec.default_factory is dataclasses.MISSING:
                raise ValueError(f"Отсутствует обязательное поле '{name}'")
            continue
        value = data[name]
        if name in special_fields:
            kwargs[name] = special_fields[name](name, value)
        elif value is None:
            kwargs[name] = None
        else:
            try:
                kwargs[name] = _coerce_type(spec.type, value, name)
            except (TypeError, ValueError) as e:
                raise ValueError(
                    f"Неверный тип поля '{name}': ожидается {spec.type}, получено {type(value)}({value}): {e}"
                ) from e
    return clazz(**kwargs)


def _coerce_type(t: Any, val: Any, field_name: str) -> Any:
    origin = get_origin(t)
    if origin is None:
        # Простой тип
        if isinstance(t, type):
            if isinstance(val, t):
                return val
            if t is bool:
                raise ValueError(f"Поле '{field_name}' должно быть логическим")
            try:
                return t(val)
            except Exception as e:  # noqa: BLE001
                raise ValueError(
                    f"Недопустимое значение '{field_name}': нельзя привести {val!r} к {t}"
                ) from e
        # Аннотация без origin (например, строковая): вернуть как есть
        return val
    if origin in (list, tuple):
        args = get_args(t)
        elem_type = args[0] if args else Any
        if not isinstance(val, (list, tuple)):
            raise ValueError(f"Поле '{field_name}' должно быть списком")
        items = [
            _coerce_type(elem_type, x, f"{field_name}[{i}]") if elem_type is not Any else x
            for i, x in enumerate(val)
        ]
        return tuple(items) if origin is tuple else items
    if origin is dict:
        key_t, val_t = get_args(t)
        if not isinstance(val, dict):
            raise ValueError(f"Поле '{field_name}' должно быть словарём")
        return {
            (_coerce_type(key_t, k, f"{field_name}.key") if key_t is not Any else k): (
                _coerce_type(val_t, v, f"{field_name}[{k}]") if val_t is not Any else v
            )
            for k, v in val.items()
        }
    # Иные generic (Optional, |): без строгой обработки
    return val
