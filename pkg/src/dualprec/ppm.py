"""Binary PPM (P6, 8-bit) read/write.

Chosen for image output because it is bit-exact and dependency-free, which
makes golden-file comparisons trivial.
"""

from __future__ import annotations

from os import PathLike
from typing import BinaryIO

import numpy as np

from .errors import IoError, ParseError

__all__ = ["write_ppm", "read_ppm"]


def write_ppm(destination: str | PathLike | BinaryIO, pixels: np.ndarray) -> int:
    """Write an (H, W, 3) uint8 array; returns bytes written."""
    if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.dtype != np.uint8:
        raise ValueError("pixels must be (H, W, 3) uint8")
    h, w = pixels.shape[:2]
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    body = pixels.tobytes()
    try:
        if isinstance(destination, (str, PathLike)):
            with open(destination, "wb") as fh:
                fh.write(header + body)
        else:
            destination.write(header + body)
    except OSError as exc:
        raise IoError(f"PPM write failed: {exc}") from exc
    return len(header) + len(body)


def read_ppm(source: str | PathLike | BinaryIO) -> np.ndarray:
    if isinstance(source, (str, PathLike)):
        with open(source, "rb") as fh:
            blob = fh.read()
    else:
        blob = source.read()
    parts = blob.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P6":
        raise ParseError("not a binary PPM (P6) file")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ParseError(f"unsupported maxval {maxval}")
    body = parts[4]
    need = w * h * 3
    if len(body) < need:
        raise ParseError("truncated PPM body")
    return np.frombuffer(body[:need], dtype=np.uint8).reshape(h, w, 3).copy()
