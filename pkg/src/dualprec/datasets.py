"""Point dataset container and per-dataset statistics.

A Dataset is an ordered collection of 2D or 3D points with RGB colors.
Storage is columnar (numpy float64 arrays) so ten-million-point clouds stay
cheap; :class:`PointRecord` is the per-point view used at API boundaries.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import ValidationError

__all__ = ["PointRecord", "Dataset", "DatasetStats", "dataset_stats"]


class PointRecord(NamedTuple):
    coords: tuple[float, ...]
    color: tuple[float, float, float]


@dataclass
class Dataset:
    """Ordered point collection with dimensionality and provenance.

    coords is (N, dims) float64, colors is (N, 3) float64 in [0, 1].
    ``scalars`` optionally carries one auxiliary value per point (escape
    counts from the generators); it is used by colorize and never serialized.
    """

    dims: int
    coords: np.ndarray
    colors: np.ndarray
    name: str = "dataset"
    source: str = ""
    scalars: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.coords = np.ascontiguousarray(self.coords, dtype=np.float64)
        self.colors = np.ascontiguousarray(self.colors, dtype=np.float64)
        if self.dims not in (2, 3):
            raise ValidationError(f"dims must be 2 or 3, got {self.dims}")
        if self.coords.ndim != 2 or self.coords.shape[1] != self.dims:
            raise ValidationError(
                f"coords shape {self.coords.shape} does not match dims={self.dims}"
            )
        if self.colors.shape != (len(self.coords), 3):
            raise ValidationError("colors must be (N, 3)")
        if len(self.colors) and (
            self.colors.min() < 0.0 or self.colors.max() > 1.0
        ):
            raise ValidationError("color channels must lie in [0, 1]")
        if self.scalars is not None and len(self.scalars) != len(self.coords):
            raise ValidationError("scalars length must match point count")

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> PointRecord:
        return PointRecord(tuple(self.coords[i]), tuple(self.colors[i]))

    def __iter__(self) -> Iterator[PointRecord]:
        for i in range(len(self)):
            yield self[i]

    @property
    def points(self) -> "Dataset":
        return self

    def equals(self, other: "Dataset") -> bool:
        """Bit-exact comparison of dims, coordinates and colors."""
        return (
            self.dims == other.dims
            and self.coords.shape == other.coords.shape
            and (self.coords == other.coords).all()
            and (self.colors == other.colors).all()
        )


class DatasetStats(NamedTuple):
    count: int
    bbox: tuple[tuple[float, float], ...]
    checksum: int


def dataset_stats(dataset: Dataset) -> DatasetStats:
    """Exact count, per-axis bounding box, and an order-sensitive checksum.

    The checksum hashes the raw little-endian float64 content, so a permuted
    dataset hashes differently while count and bbox stay put.
    """
    if len(dataset) == 0:
        raise ValidationError("stats of an empty dataset")
    bbox = tuple(
        (float(dataset.coords[:, a].min()), float(dataset.coords[:, a].max()))
        for a in range(dataset.dims)
    )
    h = hashlib.blake2b(digest_size=8)
    h.update(bytes([dataset.dims]))
    coords = dataset.coords
    colors = dataset.colors
    if coords.dtype.byteorder == ">" :  # pragma: no cover - big-endian hosts
        coords = coords.astype("<f8")
        colors = colors.astype("<f8")
    h.update(coords.tobytes())
    h.update(colors.tobytes())
    return DatasetStats(len(dataset), bbox, int.from_bytes(h.digest(), "big"))
