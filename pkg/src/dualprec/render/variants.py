"""Pipeline variants: vertex layouts, push-constant budgets, packing.

Three variants exist:

* ``emulated64`` — every coordinate and color channel split into a
  (high, low) binary32 pair, four attributes per vertex, 64-byte binary32
  push-constant matrix.
* ``native64`` — binary64 attributes and a 128-byte binary64 matrix, which
  is exactly the guaranteed minimum push-constant budget.  A 64-bit
  three-component attribute consumes two locations, so color sits at
  location 2, not 1.
* ``plain32`` — single binary32 per channel; the lab baseline the emulated
  pipeline must match bit-for-bit when its low components are zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .. import df64
from ..datasets import Dataset
from ..errors import CapacityError, ValidationError

__all__ = ["VariantKind", "VertexAttribute", "PipelineVariant", "pack_vertices",
           "unpack_vertices"]


class VariantKind(str, Enum):
    NATIVE64 = "native64"
    EMULATED64 = "emulated64"
    PLAIN32 = "plain32"


_SCALAR_BYTES = {"f32": 4, "f64": 8}
_NUMPY_SCALARS = {"f32": "<f4", "f64": "<f8"}


@dataclass(frozen=True)
class VertexAttribute:
    name: str
    location: int
    components: int
    scalar: str  # 'f32' | 'f64'

    @property
    def nbytes(self) -> int:
        return _SCALAR_BYTES[self.scalar] * self.components

    @property
    def locations_used(self) -> int:
        # 64-bit attributes wider than two components spill into a second slot.
        if self.scalar == "f64" and self.components > 2:
            return 2
        return 1


def _layout(*specs: tuple[str, int, str]) -> tuple[VertexAttribute, ...]:
    attrs = []
    location = 0
    for name, components, scalar in specs:
        attr = VertexAttribute(name, location, components, scalar)
        attrs.append(attr)
        location += attr.locations_used
    return tuple(attrs)


@dataclass(frozen=True)
class PipelineVariant:
    kind: VariantKind
    dims: int
    vertex_layout: tuple[VertexAttribute, ...]
    stride: int
    push_constant_size: int
    required_device_features: tuple[str, ...]

    @classmethod
    def for_dataset(cls, kind: VariantKind | str, dims: int) -> "PipelineVariant":
        kind = VariantKind(kind)
        if dims not in (2, 3):
            raise ValidationError(f"dims must be 2 or 3, got {dims}")
        if kind is VariantKind.EMULATED64:
            layout = _layout(
                ("highPos", dims, "f32"),
                ("lowPos", dims, "f32"),
                ("highColor", 3, "f32"),
                ("lowColor", 3, "f32"),
            )
            push, features = 64, ()
        elif kind is VariantKind.NATIVE64:
            layout = _layout(("pos", dims, "f64"), ("color", 3, "f64"))
            push = 128
            features = ("shaderFloat64", "vertexAttributeFloat64")
        else:
            layout = _layout(("pos", dims, "f32"), ("color", 3, "f32"))
            push, features = 64, ()
        stride = sum(a.nbytes for a in layout)
        return cls(kind, dims, layout, stride, push, features)

    def numpy_dtype(self) -> np.dtype:
        return np.dtype(
            [(a.name, _NUMPY_SCALARS[a.scalar], (a.components,))
             for a in self.vertex_layout]
        )


def pack_vertices(dataset: Dataset, variant: PipelineVariant) -> bytes:
    """Interleave one dataset into the variant's vertex layout.

    The emulated packing runs each value through the pair split, so
    widen(high) + widen(low) reconstructs the source within 2^-44 relative.
    """
    if dataset.dims != variant.dims:
        raise ValidationError(
            f"dataset dims {dataset.dims} does not match variant dims {variant.dims}"
        )
    n = len(dataset)
    try:
        out = np.empty(n, dtype=variant.numpy_dtype())
        if variant.kind is VariantKind.EMULATED64:
            ph, pl = df64.split_arrays(dataset.coords)
            ch, cl = df64.split_arrays(dataset.colors)
            out["highPos"] = ph
            out["lowPos"] = pl
            out["highColor"] = ch
            out["lowColor"] = cl
        elif variant.kind is VariantKind.NATIVE64:
            out["pos"] = dataset.coords
            out["color"] = dataset.colors
        else:
            out["pos"] = dataset.coords.astype(np.float32)
            out["color"] = dataset.colors.astype(np.float32)
        return out.tobytes()
    except MemoryError as exc:
        raise CapacityError(
            f"vertex buffer of {n * variant.stride} bytes exceeds available memory"
        ) from exc


def unpack_vertices(data: bytes, variant: PipelineVariant, count: int) -> np.ndarray:
    """View packed vertex bytes as a structured record array (no copy)."""
    return np.frombuffer(data, dtype=variant.numpy_dtype(), count=count)
