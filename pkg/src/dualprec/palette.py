"""Deterministic coloring of point datasets.

Colors come from a fixed hue ramp over a normalized per-point value: the
escape count when the generator recorded one, otherwise the position along
the last coordinate axis.  Pure and idempotent for a fixed palette.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset
from .errors import ValidationError

__all__ = ["Palette", "colorize", "hue_ramp"]


@dataclass(frozen=True)
class Palette:
    """Hue sweep in degrees, HSV saturation/value fixed per palette."""

    start_hue: float = 240.0  # blue
    end_hue: float = 0.0      # red
    saturation: float = 0.85
    value: float = 0.95


def _hsv_to_rgb(h: np.ndarray, s: float, v: float) -> np.ndarray:
    h = (h % 360.0) / 60.0
    i = np.floor(h).astype(np.int64) % 6
    f = h - np.floor(h)
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    ones = np.full_like(f, v)
    pf = np.full_like(f, p)
    lut = np.stack(
        [
            np.stack([ones, t, pf], axis=-1),
            np.stack([q, ones, pf], axis=-1),
            np.stack([pf, ones, t], axis=-1),
            np.stack([pf, q, ones], axis=-1),
            np.stack([t, pf, ones], axis=-1),
            np.stack([ones, pf, q], axis=-1),
        ],
        axis=0,
    )
    return lut[i, np.arange(len(f))]


def hue_ramp(t: np.ndarray, palette: Palette) -> np.ndarray:
    """Map t in [0,1] to RGB rows along the palette's hue sweep."""
    t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
    hues = palette.start_hue + (palette.end_hue - palette.start_hue) * t
    return _hsv_to_rgb(hues, palette.saturation, palette.value)


def colorize(dataset: Dataset, palette: Palette = Palette()) -> Dataset:
    """Assign RGB from escape counts when present, else from position.

    Normalization degenerates (single point, or a flat value range) pin
    t = 0, i.e. exactly the ramp's start color.
    """
    if len(dataset) == 0:
        raise ValidationError("cannot colorize an empty dataset")
    if dataset.scalars is not None:
        values = np.asarray(dataset.scalars, dtype=np.float64)
    else:
        values = dataset.coords[:, -1]
    lo = values.min()
    hi = values.max()
    if hi > lo:
        t = (values - lo) / (hi - lo)
    else:
        t = np.zeros(len(values))
    colors = hue_ramp(t, palette)
    return Dataset(
        dataset.dims,
        dataset.coords,
        colors,
        name=dataset.name,
        source=dataset.source,
        scalars=dataset.scalars,
    )
