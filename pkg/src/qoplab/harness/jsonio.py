"""Deterministic JSON output with 17-significant-digit floats."""
from __future__ import annotations

import json
import math
from typing import Any

import numpy as np


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} cannot be written as JSON")
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj: Any, indent: int, level: int, out: list[str]) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," if indent else ", "
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _encode([obj.real, obj.imag], indent, level, out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(sep)
            out.append(pad + json.dumps(str(k)) + ": ")
            _encode(v, indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        if not items:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list, tuple)) for v in items)
        out.append("[")
        for i, v in enumerate(items):
            if i:
                out.append(", " if flat or not indent else sep)
            if not flat:
                out.append(pad)
            _encode(v, indent, level + 1, out)
        out.append((end if not flat else "") + "]")
    elif hasattr(obj, "to_json"):
        _encode(obj.to_json(), indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 1) -> str:
    out: list[str] = []
    _encode(obj, indent, 0, out)
    return "".join(out) + "\n"


def write(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
