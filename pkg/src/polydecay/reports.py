"""Deterministic CSV and JSON writers for command output.

Floats go through a fixed "%.17g" format and JSON keys are sorted, so identical
configs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from pydantic import BaseModel

logger = logging.getLogger(__name__)


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows under a header line; floats use "%.17g"."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.info("wrote %s", path)
    return path


def write_columns(path: Path, columns: dict[str, np.ndarray]) -> Path:
    """Write equally long 1-D arrays side by side."""
    arrays = [np.ravel(np.asarray(c, dtype=float)) for c in columns.values()]
    return write_csv(path, list(columns), zip(*arrays))


def jsonable(value: Any) -> Any:
    """Plain-JSON view of report values: complex as [re, im], non-finite floats as strings."""
    if isinstance(value, BaseModel):
        return jsonable(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: Path, payload: dict[str, Any], config: BaseModel | None = None) -> Path:
    """Sorted, indented JSON; the resolved config is embedded under "config"."""
    document = dict(payload)
    if config is not None:
        document["config"] = config
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(document), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path
