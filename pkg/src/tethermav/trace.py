"""CSV trace files: a versioned ``#`` header followed by a plain CSV table."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

SCHEMA_VERSION = "1.0"
_MAGIC = "tethermav-trace"
_VERSION_RE = re.compile(rf"^#\s*{_MAGIC}\s+schema=(\d+)\.(\d+)\s*$")


class TraceError(ValueError):
    pass


class MissingColumn(TraceError):
    def __init__(self, column: str):
        super().__init__(f"missing column: {column}")
        self.column = column


@dataclass
class Trace:
    """A loaded table.  Cells stay as text so untouched columns round-trip verbatim."""

    columns: List[str]
    rows: List[List[str]]
    meta: Dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def require(self, names: Iterable[str]) -> None:
        for name in names:
            if name not in self.columns:
                raise MissingColumn(name)

    def floats(self, names: Sequence[str]) -> np.ndarray:
        self.require(names)
        idx = [self.columns.index(n) for n in names]
        try:
            return np.array([[float(r[i]) for i in idx] for r in self.rows], dtype=float).reshape(-1, len(idx))
        except ValueError as exc:
            raise TraceError(f"non-numeric value in columns {list(names)}: {exc}") from None

    def set_column(self, name: str, values: Sequence) -> None:
        """Overwrite ``name`` if present, else append it."""
        if len(values) != len(self.rows):
            raise ValueError("column length does not match the trace")
        cells = [format_cell(v) for v in values]
        if name in self.columns:
            i = self.columns.index(name)
            for row, c in zip(self.rows, cells):
                row[i] = c
        else:
            self.columns.append(name)
            for row, c in zip(self.rows, cells):
                row.append(c)


def format_cell(v) -> str:
    # repr round-trips doubles exactly; flags are written as 0/1
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_trace(out: TextIO, columns: Sequence[str], rows: Iterable[Sequence], meta: Optional[Dict[str, object]] = None) -> None:
    out.write(f"# {_MAGIC} schema={SCHEMA_VERSION}\n")
    if meta:
        out.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([c if isinstance(c, str) else format_cell(c) for c in row])


def dump_trace(trace: Trace) -> str:
    buf = io.StringIO()
    write_trace(buf, trace.columns, trace.rows, trace.meta)
    return buf.getvalue()


def read_trace(src: TextIO) -> Trace:
    """Parse a trace.  Files without a version header are accepted as plain CSV."""
    meta: Dict[str, str] = {}
    lines = src.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            m = _VERSION_RE.match(line)
            if m:
                major = int(m.group(1))
                if major != int(SCHEMA_VERSION.split(".")[0]):
                    raise TraceError(f"unsupported trace schema {m.group(1)}.{m.group(2)}")
                continue
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    meta[k] = v
            continue
        if line.strip():
            body.append(line)
    if not body:
        raise TraceError("empty trace: no header row")
    reader = csv.reader(body)
    columns = [c.strip() for c in next(reader)]
    rows = [list(r) for r in reader]
    for n, r in enumerate(rows, start=2):
        if len(r) != len(columns):
            raise TraceError(f"row {n} has {len(r)} cells, header has {len(columns)}")
    return Trace(columns, rows, meta)
