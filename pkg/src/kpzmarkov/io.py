"""Serialisation: JSON with 17-digit floats, CSV tables, atomic writes."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

import numpy as np


def fmt_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


def _json_value(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return json.dumps(bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt_float(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_json_value(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in obj):
            return "[" + ", ".join(_json_value(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _json_value(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "to_dict"):
        return _json_value(obj.to_dict(), indent, level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    """JSON text with insertion-ordered keys and floats at 17 significant digits."""
    return _json_value(obj, indent, 0) + "\n"


def csv_text(header, rows, comment: dict | None = None) -> str:
    """CSV with one header row; ``comment`` becomes a leading ``# {json}`` line."""
    buf = io.StringIO()
    if comment is not None:
        buf.write("# " + json.dumps(_plain(comment), separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (fmt_float(v) if isinstance(v, (float, np.floating)) else v)
                    for v in row])
    return buf.getvalue()


def _plain(obj):
    # JSON-safe copy for the one-line config comment
    return json.loads(dumps_json(obj))


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path_or_text: str, is_text: bool = False):
    """Return (comment dict or None, header, rows of strings)."""
    text = path_or_text if is_text else open(path_or_text, encoding="utf-8").read()
    lines = text.splitlines()
    comment = None
    if lines and lines[0].startswith("# "):
        comment = json.loads(lines[0][2:])
        lines = lines[1:]
    reader = csv.reader(lines)
    header = next(reader)
    return comment, header, [r for r in reader]
