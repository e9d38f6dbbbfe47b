"""CSV input and output.

Files have a header row, comma separators and LF line endings. Floats are
written with repr, the shortest string that reads back to the same double.
"""

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from app.numerics.errors import InputFormatError


def _parse_float(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputFormatError(f"{column}={text!r} is not a number", line=line) from None
    if not math.isfinite(value):
        raise InputFormatError(f"{column}={text!r} is not finite", line=line)
    return value


def parse_columns(text: str, columns: Sequence[str]) -> tuple[np.ndarray, ...]:
    """Numeric columns of a CSV whose header is exactly ``columns``."""
    reader = csv.reader(io.StringIO(text))
    try:
        return _parse_records(reader, columns)
    except csv.Error as e:
        raise InputFormatError(str(e), line=max(reader.line_num, 1)) from None


def _parse_records(reader, columns: Sequence[str]) -> tuple[np.ndarray, ...]:
    header = next(reader, None)
    if header is None:
        raise InputFormatError("empty file", line=1)
    if [name.strip() for name in header] != list(columns):
        raise InputFormatError(f"expected header {','.join(columns)}, got {','.join(header)}", line=1)

    data: list[list[float]] = [[] for _ in columns]
    for line, record in enumerate(reader, start=2):
        if not record or all(not field.strip() for field in record):
            continue
        if len(record) != len(columns):
            raise InputFormatError(f"expected {len(columns)} fields, got {len(record)}", line=line)
        for values, name, field in zip(data, columns, record):
            values.append(_parse_float(field.strip(), line, name))
    return tuple(np.array(values, dtype=float) for values in data)


def parse_xy(text: str) -> tuple[np.ndarray, np.ndarray]:
    x, y = parse_columns(text, ("x", "y"))
    return x, y


def parse_x(text: str) -> np.ndarray:
    (x,) = parse_columns(text, ("x",))
    return x


def decode(raw: bytes) -> str:
    """UTF-8 text of an uploaded or read file."""
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw[: e.start].count(b"\n") + 1
        raise InputFormatError(f"byte {raw[e.start]:#04x} is not valid UTF-8", line=line) from None


def read_text(path: str | Path) -> str:
    return decode(Path(path).read_bytes())


def read_xy(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Samples from an ``x,y`` file."""
    return parse_xy(read_text(path))


def read_x(path: str | Path) -> np.ndarray:
    """Nodes from an ``x`` file."""
    return parse_x(read_text(path))


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_rows(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])


def write_csv(path: str | Path | None, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write to ``path``, or return the text when path is None."""
    buffer = io.StringIO()
    write_rows(buffer, header, rows)
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="")
    return text


def write_xy(path: str | Path | None, x, y, header: Sequence[str] = ("x", "y")) -> str:
    return write_csv(path, header, zip(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


def write_report(path: str | Path | None, report) -> str:
    """ConvergenceReport rows as n,mesh_kind,err_value,err_deriv_nodes,err_deriv_between,cond."""
    header = ("n", "mesh_kind", "err_value", "err_deriv_nodes", "err_deriv_between", "cond")
    rows = (
        (row.n, row.mesh_kind, row.err_value, row.err_deriv_nodes, row.err_deriv_between, row.cond)
        for row in report.rows
    )
    return write_csv(path, header, rows)


def write_histogram(path: str | Path | None, histogram) -> str:
    rows = zip(histogram.edges[:-1], histogram.edges[1:], histogram.counts)
    return write_csv(path, ("bin_lo", "bin_hi", "count"), rows)


def write_jumps(path: str | Path | None, profile) -> str:
    return write_xy(path, profile.x, profile.jumps, header=("x", "jump"))
