"""Serialization helpers: 17-significant-digit floats and atomic file writes."""

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

__all__ = ["format_float", "dumps_json", "atomic_write_text"]


def format_float(value):
    """17 significant digits: enough to round-trip any double exactly."""
    return format(float(value), ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return "null"
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: {_encode(value, indent, level + 1)}"
            for key, value in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(value, indent, level + 1)}" for value in obj]
        return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent=2):
    """JSON text with every float written to 17 significant digits.

    Non-finite floats become ``null``. Key order is preserved.
    """
    return _encode(obj, indent, 0) + "\n"


def atomic_write_text(path, text):
    """Write ``text`` to a temporary sibling file, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
