import csv
import json
import os
from typing import Any, Iterable, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel


def _cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


def split_complex(name: str, values) -> dict[str, np.ndarray]:
    """name -> (name_re, name_im) columns."""
    values = np.asarray(values, dtype=complex)
    return {f"{name}_re": values.real, f"{name}_im": values.imag}


def write_csv(path: str, anchor: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    RFC 4180 table, UTF-8, '.' decimals. The first record names what the table supports,
    the second is the column header.
    """
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\r\n")
        writer.writerow(["anchor", anchor])
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    logger.debug(f"Wrote {path}")
    return path


def write_columns(path: str, anchor: str, columns: dict[str, Any]) -> str:
    """Table from equal-length columns, complex columns split into _re/_im pairs."""
    flat: dict[str, np.ndarray] = {}
    for name, values in columns.items():
        values = np.asarray(values)
        if np.iscomplexobj(values):
            flat.update(split_complex(name, values))
        else:
            flat[name] = values
    return write_csv(path, anchor, list(flat), zip(*flat.values()))


def write_models(path: str, anchor: str, models: Sequence[BaseModel]) -> str:
    """One row per model, columns in field order."""
    if not models:
        return write_csv(path, anchor, [], [])
    header = list(type(models[0]).model_fields)
    return write_csv(path, anchor, header, ([getattr(m, name) for name in header] for m in models))


def write_json(path: str, payload: BaseModel | dict) -> str:
    data = payload.model_dump(mode="json") if isinstance(payload, BaseModel) else payload
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2, sort_keys=True, allow_nan=True)
        handle.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_dat(path: str, x, y, comment: str | None = None) -> str:
    """Two whitespace-separated columns for external plotting."""
    with open(path, "w", encoding="utf-8") as handle:
        if comment:
            handle.write(f"# {comment}\n")
        for a, b in zip(np.asarray(x, dtype=float), np.asarray(y, dtype=float)):
            handle.write(f"{float(a)!r} {float(b)!r}\n")
    logger.debug(f"Wrote {path}")
    return path


def ensure_out_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
