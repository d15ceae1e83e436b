"""Point extraction from glTF 2.0 binary containers (GLB).

Supports the subset the conversion pipeline needs: a JSON chunk plus a single
binary chunk, float32 VEC3 POSITION accessors, and optional COLOR_0 in
float32 or normalized uint8/uint16, VEC3 or VEC4.  POSITION data is stored as
binary32 by the glTF format and is widened (not reinterpreted) to binary64.
"""

from __future__ import annotations

import json
import struct
from os import PathLike
from typing import BinaryIO

import numpy as np

from .datasets import Dataset
from .errors import ParseError, SchemaError
from .palette import Palette, colorize

__all__ = ["extract_points_from_glb"]

_MAGIC = 0x46546C67  # 'glTF'
_CHUNK_JSON = 0x4E4F534A
_CHUNK_BIN = 0x004E4942

_COMPONENT_DTYPES = {
    5120: np.int8,
    5121: np.uint8,
    5122: np.int16,
    5123: np.uint16,
    5125: np.uint32,
    5126: np.float32,
}
_TYPE_WIDTH = {"SCALAR": 1, "VEC2": 2, "VEC3": 3, "VEC4": 4}


def _read_all(source: str | PathLike | BinaryIO) -> bytes:
    if isinstance(source, (str, PathLike)):
        with open(source, "rb") as fh:
            return fh.read()
    return source.read()


def _parse_container(blob: bytes) -> tuple[dict, bytes]:
    if len(blob) < 12:
        raise ParseError("truncated GLB: missing 12-byte header")
    magic, version, length = struct.unpack_from("<III", blob, 0)
    if magic != _MAGIC:
        raise ParseError("not a GLB container (bad magic)")
    if version != 2:
        raise ParseError(f"unsupported glTF container version {version}")
    if length > len(blob):
        raise ParseError("truncated GLB: declared length exceeds data")
    offset = 12
    doc = None
    binary = b""
    chunk_index = 0
    while offset < length:
        if offset + 8 > length:
            raise ParseError("truncated GLB chunk header")
        chunk_len, chunk_type = struct.unpack_from("<II", blob, offset)
        offset += 8
        if offset + chunk_len > length:
            raise ParseError("truncated GLB chunk payload")
        payload = blob[offset : offset + chunk_len]
        offset += chunk_len + (-chunk_len % 4)
        if chunk_index == 0:
            if chunk_type != _CHUNK_JSON:
                raise ParseError("first GLB chunk must be JSON")
            try:
                doc = json.loads(payload)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed JSON chunk: {exc}") from exc
        elif chunk_index == 1:
            if chunk_type != _CHUNK_BIN:
                raise SchemaError("second chunk is not BIN; unsupported layout")
            binary = payload
        else:
            raise SchemaError("only JSON + one binary chunk are supported")
        chunk_index += 1
    if doc is None:
        raise ParseError("GLB contains no JSON chunk")
    return doc, binary


def _accessor_array(doc: dict, binary: bytes, accessor_index: int) -> np.ndarray:
    try:
        accessor = doc["accessors"][accessor_index]
    except (KeyError, IndexError):
        raise SchemaError(f"accessor {accessor_index} missing") from None
    if "sparse" in accessor:
        raise SchemaError("sparse accessors are not supported")
    comp = accessor.get("componentType")
    if comp not in _COMPONENT_DTYPES:
        raise SchemaError(f"unsupported componentType {comp}")
    width = _TYPE_WIDTH.get(accessor.get("type"))
    if width is None:
        raise SchemaError(f"unsupported accessor type {accessor.get('type')}")
    count = accessor.get("count", 0)
    dtype = np.dtype(_COMPONENT_DTYPES[comp]).newbyteorder("<")
    view_index = accessor.get("bufferView")
    if view_index is None:
        raise SchemaError("accessor without bufferView is not supported")
    try:
        view = doc["bufferViews"][view_index]
    except (KeyError, IndexError):
        raise SchemaError(f"bufferView {view_index} missing") from None
    if view.get("buffer", 0) != 0:
        raise SchemaError("only the embedded GLB buffer (index 0) is supported")
    base = view.get("byteOffset", 0) + accessor.get("byteOffset", 0)
    elem_bytes = dtype.itemsize * width
    stride = view.get("byteStride") or elem_bytes
    need = base + (count - 1) * stride + elem_bytes if count else base
    if need > len(binary):
        raise ParseError("accessor range exceeds binary chunk")
    if stride == elem_bytes:
        flat = np.frombuffer(binary, dtype=dtype, count=count * width, offset=base)
        return flat.reshape(count, width)
    rows = np.empty((count, width), dtype=dtype)
    for i in range(count):
        rows[i] = np.frombuffer(binary, dtype=dtype, count=width,
                                offset=base + i * stride)
    return rows


def _normalize_colors(raw: np.ndarray, component: np.dtype) -> np.ndarray:
    rgb = raw[:, :3].astype(np.float64)
    if component == np.uint8:
        rgb /= 255.0
    elif component == np.uint16:
        rgb /= 65535.0
    return rgb


def extract_points_from_glb(
    source: str | PathLike | BinaryIO, name: str | None = None
) -> Dataset:
    """Concatenate every primitive's POSITION triples, widened to binary64.

    Colors come from COLOR_0 when a primitive carries it; primitives without
    it get the default position palette after extraction.
    """
    blob = _read_all(source)
    doc, binary = _parse_container(blob)
    meshes = doc.get("meshes") or []
    if not meshes:
        raise SchemaError("GLB has no meshes")
    coords: list[np.ndarray] = []
    colors: list[np.ndarray | None] = []
    for mesh in meshes:
        for prim in mesh.get("primitives", []):
            attrs = prim.get("attributes", {})
            if "POSITION" not in attrs:
                continue
            pos_accessor = doc["accessors"][attrs["POSITION"]]
            if pos_accessor.get("componentType") != 5126 or pos_accessor.get("type") != "VEC3":
                raise SchemaError("POSITION must be float32 VEC3")
            pos = _accessor_array(doc, binary, attrs["POSITION"])
            coords.append(pos.astype(np.float64))
            if "COLOR_0" in attrs:
                raw = _accessor_array(doc, binary, attrs["COLOR_0"])
                colors.append(_normalize_colors(raw, raw.dtype.base))
            else:
                colors.append(None)
    if not coords:
        raise SchemaError("no mesh primitive carries a POSITION accessor")
    all_coords = np.concatenate(coords, axis=0)
    out_colors = np.zeros((len(all_coords), 3))
    missing = np.zeros(len(all_coords), dtype=bool)
    offset = 0
    for pos, col in zip(coords, colors):
        n = len(pos)
        if col is not None:
            out_colors[offset : offset + n] = np.clip(col, 0.0, 1.0)
        else:
            missing[offset : offset + n] = True
        offset += n
    if name is None:
        if isinstance(source, (str, PathLike)):
            from pathlib import Path

            name = Path(source).stem
        else:
            name = "glb-stream"
    ds = Dataset(3, all_coords, out_colors, name=name, source="glb")
    if missing.any():
        # Default palette only where COLOR_0 was absent.
        ramped = colorize(ds, Palette())
        out_colors[missing] = ramped.colors[missing]
        ds = Dataset(3, all_coords, out_colors, name=name, source="glb")
    return ds
