"""Flat result tables with stable CSV and JSON renderings.

CSV: UTF-8, comma separated, header row, floats with 12 significant digits,
NaN written as an empty field.  JSON: a list of records with the same keys in
the same order, NaN as ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any, Sequence


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return "" if math.isnan(x) else f"{x:.12g}"
    if x is None:
        return ""
    if hasattr(x, "dtype"):
        return _fmt(x.item())
    return str(x)


def _jsonable(x: Any) -> Any:
    if hasattr(x, "dtype"):
        x = x.item()
    if isinstance(x, float):
        return None if math.isnan(x) else float(f"{x:.12g}")
    return x


@dataclass
class Table:
    columns: Sequence[str]
    rows: list[Sequence[Any]] = field(default_factory=list)

    def records(self) -> list[dict[str, Any]]:
        return [{c: _jsonable(v) for c, v in zip(self.columns, row)} for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.records(), indent=1) + "\n"

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    def write(self, path: str | os.PathLike, fmt: str = "csv") -> None:
        """Write atomically: the target only appears once fully written."""
        text = self.render(fmt)
        target = os.fspath(path)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(target)), suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
