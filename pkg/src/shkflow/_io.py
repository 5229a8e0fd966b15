"""Small serialization helpers shared by the writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence


def fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain ``str`` for everything else."""
    if isinstance(x, (float, int)) and not isinstance(x, bool):
        x = float(x)
        if math.isnan(x):
            return "nan"
        return repr(x)
    if hasattr(x, "item"):
        return fmt(x.item())
    return str(x)


def write_columns(path, columns: Mapping[str, Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*(columns[k] for k in names)):
            w.writerow([fmt(v) for v in row])
    return path


def read_columns(path) -> dict[str, list[float]]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return {h: [float(r[i]) for r in body] for i, h in enumerate(header)}


def _clean(obj):
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n")
    return path


def iter_floats(values: Iterable) -> list[float]:
    return [float(v) for v in values]
