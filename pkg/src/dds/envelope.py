"""Result envelopes and their JSON / CSV / table renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, is_dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .precision.hiprec import HiPrecValue


def to_plain(obj):
    """Convert results into JSON-compatible builtins (floats keep 17 digits on output)."""
    if isinstance(obj, HiPrecValue):
        return float(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if is_dataclass(obj):
        return to_plain(asdict(obj))
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _num(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == int(x) and abs(x) < 1e16:
        return format(x, ".1f")
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    return json.dumps(obj)


@dataclass
class ResultEnvelope:
    command: str
    params: dict
    results: dict
    diagnostics: dict = field(default_factory=dict)
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": to_plain(self.params),
            "results": to_plain(self.results),
            "diagnostics": to_plain(self.diagnostics),
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ResultEnvelope:
        return cls(d["command"], d["params"], d["results"], d.get("diagnostics", {}), d["tool_version"])

    @classmethod
    def from_json(cls, text: str) -> ResultEnvelope:
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        res = to_plain(self.results)
        rows = res.get("rows") if isinstance(res, dict) else None
        if rows and isinstance(rows, list) and isinstance(rows[0], dict):
            keys = list(rows[0])
            w.writerow(keys)
            for r in rows:
                w.writerow([_cell(r.get(k)) for k in keys])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(res):
                w.writerow([k, _cell(v)])
        return buf.getvalue()

    def to_table(self) -> str:
        lines = [f"# {self.command}  (dds {self.tool_version})"]
        for k, v in _flatten(to_plain(self.params)):
            lines.append(f"  param  {k} = {_cell(v)}")
        for k, v in _flatten(to_plain(self.results)):
            lines.append(f"  {k:<40} {_cell(v)}")
        for k, v in _flatten(to_plain(self.diagnostics)):
            lines.append(f"  [diag] {k:<33} {_cell(v)}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        return self.to_table()


def _cell(v) -> str:
    if isinstance(v, float):
        return _num(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return "" if v is None else str(v)


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and all(isinstance(v, dict) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj
