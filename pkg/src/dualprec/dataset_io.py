"""CSV persistence for point datasets.

Format: UTF-8, header ``x,y,r,g,b`` or ``x,y,z,r,g,b``, comma separator,
single linefeed terminator, no quoting.  Values are written as the shortest
decimal strings that round-trip binary64 exactly, so read(write(d)) is
bit-identical to d — the whole suite is about precision fidelity, and the
on-disk form must not be where bits die.
"""

from __future__ import annotations

import io
from array import array
from contextlib import contextmanager
from os import PathLike
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np

from .datasets import Dataset
from .errors import IoError, ParseError, SchemaError, ValidationError

__all__ = ["write_csv", "read_csv", "format_f64"]

_HEADERS = {2: "x,y,r,g,b", 3: "x,y,z,r,g,b"}
_CHUNK_ROWS = 65536


def format_f64(v: float) -> str:
    """Shortest decimal that round-trips binary64; integral values drop '.0'.

    repr() is already shortest-round-trip in Python 3; stripping a trailing
    '.0' keeps exactness (and renders -0.0 as '-0', which the reader
    preserves).
    """
    s = repr(v)
    return s[:-2] if s.endswith(".0") else s


@contextmanager
def _open_sink(destination):
    if isinstance(destination, (str, PathLike)):
        try:
            with open(destination, "wb") as fh:
                yield fh
        except OSError as exc:
            raise IoError(f"cannot write {destination}: {exc}") from exc
    else:
        yield destination


def write_csv(dataset: Dataset, destination: str | PathLike | BinaryIO) -> int:
    """Write one dataset; returns the number of point records written."""
    if len(dataset) == 0:
        raise ValidationError("refusing to persist an empty dataset")
    header = _HEADERS[dataset.dims]
    n = len(dataset)
    try:
        with _open_sink(destination) as fh:
            fh.write(header.encode("ascii") + b"\n")
            for start in range(0, n, _CHUNK_ROWS):
                rows = []
                coords = dataset.coords[start : start + _CHUNK_ROWS]
                colors = dataset.colors[start : start + _CHUNK_ROWS]
                for crow, krow in zip(coords.tolist(), colors.tolist()):
                    rows.append(
                        ",".join(format_f64(v) for v in crow)
                        + ","
                        + ",".join(format_f64(v) for v in krow)
                    )
                fh.write(("\n".join(rows) + "\n").encode("ascii"))
    except OSError as exc:
        raise IoError(f"write failed: {exc}") from exc
    return n


def _iter_lines(source) -> Iterable[bytes]:
    if isinstance(source, (str, PathLike)):
        with open(source, "rb") as fh:
            yield from fh
    else:
        yield from source


def read_csv(source: str | PathLike | BinaryIO, name: str | None = None) -> Dataset:
    """Parse a dataset CSV; dims inferred from the header, order preserved.

    Memory stays bounded per record: rows accumulate directly into packed
    float64 buffers, which are the output's own storage.
    """
    if name is None:
        name = Path(source).stem if isinstance(source, (str, PathLike)) else "stream"
    lines = iter(_iter_lines(source))
    try:
        header = next(lines)
    except StopIteration:
        raise ParseError("empty input: missing header") from None
    except OSError as exc:
        raise IoError(f"read failed: {exc}") from exc
    head = header.decode("utf-8", "replace").strip()
    dims = next((d for d, h in _HEADERS.items() if h == head), None)
    if dims is None:
        raise SchemaError(f"unrecognized header {head!r}; expected x,y[,z],r,g,b")
    ncols = dims + 3
    coords = array("d")
    colors = array("d")
    lineno = 1
    try:
        for raw in lines:
            lineno += 1
            line = raw.rstrip(b"\n").rstrip(b"\r")
            if not line:
                continue
            parts = line.split(b",")
            if len(parts) != ncols:
                raise SchemaError(
                    f"line {lineno}: expected {ncols} columns, found {len(parts)}"
                )
            try:
                values = [float(p) for p in parts]
            except ValueError:
                raise ParseError("not a number: " + line.decode("utf-8", "replace"),
                                 line=lineno) from None
            coords.extend(values[:dims])
            colors.extend(values[dims:])
    except OSError as exc:
        raise IoError(f"read failed at line {lineno}: {exc}") from exc
    n = len(coords) // dims
    coord_arr = np.frombuffer(coords, dtype=np.float64).reshape(n, dims).copy()
    color_arr = np.frombuffer(colors, dtype=np.float64).reshape(n, 3).copy()
    return Dataset(dims, coord_arr, color_arr, name=name, source="csv")
