"""CPU-side quantification of the precision gap between the three paths.

The same model-view-projection product is evaluated three ways — binary32,
emulated pairs, and a binary64 reference — and compared after the
perspective divide, in normalized device coordinates and in pixels, because
that is where the rendering artifact lives.  Also hosts the Mandelbrot zoom
degradation study: collapse ratios and escape-grid images.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from os import PathLike
from typing import BinaryIO

import numpy as np

from . import df64
from .datasets import Dataset
from .errors import DomainError, ValidationError
from .fractals import MandelbrotView, mandelbrot_grid, sample_coords
from .ppm import write_ppm

__all__ = [
    "TransformStack",
    "ErrorReport",
    "ulp_distance",
    "transform_point",
    "transform_points",
    "error_report",
    "collapse_ratio",
    "render_mandelbrot_image",
    "iteration_ramp",
]

_W_CUTOFF = 1e-300  # far below any realistic projection


class TransformStack:
    """A 4x4 binary64 model-view-projection matrix plus a pixel viewport.

    The pair-split matrix is computed once and cached, mirroring how the GPU
    path uploads push constants once per frame rather than per vertex.
    """

    def __init__(self, mvp: np.ndarray, viewport: tuple[int, int]):
        mvp = np.asarray(mvp, dtype=np.float64)
        if mvp.shape != (4, 4) or not np.isfinite(mvp).all():
            raise ValidationError("mvp must be a finite 4x4 matrix")
        w, h = viewport
        if w <= 0 or h <= 0:
            raise ValidationError("viewport must be positive")
        self.mvp = mvp
        self.viewport = (int(w), int(h))

    @cached_property
    def mvp_f32(self) -> np.ndarray:
        return self.mvp.astype(np.float32)

    @cached_property
    def mvp_df64(self) -> tuple[np.ndarray, np.ndarray]:
        return df64.split_arrays(self.mvp)

    @classmethod
    def translation(
        cls, offset: tuple[float, float, float], viewport: tuple[int, int]
    ) -> "TransformStack":
        m = np.eye(4)
        m[:3, 3] = offset
        return cls(m, viewport)


@dataclass(frozen=True)
class ErrorReport:
    """Screen-space error aggregates of one precision path vs binary64."""

    max_abs_ndc_error: float
    rms_ndc_error: float
    max_pixel_error: float
    max_ulp_distance: int
    sample_count: int
    skipped_count: int = 0

    CSV_HEADER = (
        "max_abs_ndc_error,rms_ndc_error,max_pixel_error,"
        "max_ulp_distance,sample_count,skipped_count"
    )

    def __post_init__(self):
        values = (
            self.max_abs_ndc_error,
            self.rms_ndc_error,
            self.max_pixel_error,
            float(self.max_ulp_distance),
        )
        if any(not np.isfinite(v) or v < 0 for v in values):
            raise ValidationError("error metrics must be finite and nonnegative")
        if self.rms_ndc_error > self.max_abs_ndc_error * (1 + 1e-12):
            raise ValidationError("rms exceeds max")

    def to_csv_row(self) -> str:
        return (
            f"{self.max_abs_ndc_error!r},{self.rms_ndc_error!r},"
            f"{self.max_pixel_error!r},{self.max_ulp_distance},"
            f"{self.sample_count},{self.skipped_count}"
        )


def ulp_distance(a: float, b: float) -> int:
    """Representable binary32 values strictly between a and b, plus one if
    they differ: the distance under the monotone bits-to-integer mapping.

    Either zero maps to 0, so mixed-sign distances are the sum of each
    magnitude's distance to zero, with no step between -0 and +0.
    """

    def key(x: float) -> int:
        x32 = np.float32(x)
        if np.isnan(x32):
            raise DomainError("ulp distance is undefined for NaN")
        if np.isinf(x32):
            raise DomainError("ulp distance requires finite binary32 values")
        bits = int(x32.view(np.uint32))
        mag = bits & 0x7FFFFFFF
        return -mag if bits >> 31 else mag

    return abs(key(a) - key(b))


def _ulp_distance_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    def keys(x: np.ndarray) -> np.ndarray:
        bits = x.astype(np.float32).view(np.uint32).astype(np.int64)
        mag = bits & 0x7FFFFFFF
        return np.where(bits >> 31, -mag, mag)

    return np.abs(keys(a) - keys(b))


def _homogeneous(coords: np.ndarray) -> tuple[np.ndarray, ...]:
    n, dims = coords.shape
    x = coords[:, 0]
    y = coords[:, 1]
    z = coords[:, 2] if dims == 3 else np.zeros(n)
    return x, y, z, np.ones(n)


def _matvec_rows_f64(m: np.ndarray, x, y, z, w) -> np.ndarray:
    # Left-to-right summation, pinned so an independent naive per-point
    # implementation reproduces it bit-exactly.
    rows = [m[i, 0] * x + m[i, 1] * y + m[i, 2] * z + m[i, 3] * w for i in range(4)]
    return np.stack(rows, axis=-1)


def _matvec_rows_f32(m32: np.ndarray, x, y, z, w) -> np.ndarray:
    x32 = x.astype(np.float32)
    y32 = y.astype(np.float32)
    z32 = z.astype(np.float32)
    w32 = w.astype(np.float32)
    rows = [
        m32[i, 0] * x32 + m32[i, 1] * y32 + m32[i, 2] * z32 + m32[i, 3] * w32
        for i in range(4)
    ]
    return np.stack(rows, axis=-1).astype(np.float64)


def _matvec_rows_df64(mvp_pair, x, y, z, w) -> np.ndarray:
    mh, ml = mvp_pair
    xs = df64.split_arrays(x)
    ys = df64.split_arrays(y)
    zs = df64.split_arrays(z)
    ws = df64.split_arrays(w)
    out = np.empty((len(x), 4))
    for i in range(4):
        acc = None
        for j, comp in enumerate((xs, ys, zs, ws)):
            entry_h = np.broadcast_to(mh[i, j], len(x))
            entry_l = np.broadcast_to(ml[i, j], len(x))
            if float(mh[i, j]) == 0.0 and float(ml[i, j]) == 0.0:
                continue
            term = df64.mul_arrays((entry_h, entry_l), comp)
            acc = term if acc is None else df64.add_arrays(acc, term)
        if acc is None:
            out[:, i] = 0.0
        else:
            out[:, i] = df64.to_f64_arrays(*acc)
    return out


def transform_points(
    coords: np.ndarray, stack: TransformStack, precision: str
) -> np.ndarray:
    """Clip-space results (N, 4) in binary64 for a whole coordinate array."""
    coords = np.asarray(coords, dtype=np.float64)
    x, y, z, w = _homogeneous(coords)
    if precision == "binary64":
        return _matvec_rows_f64(stack.mvp, x, y, z, w)
    if precision == "binary32":
        return _matvec_rows_f32(stack.mvp_f32, x, y, z, w)
    if precision == "df64":
        return _matvec_rows_df64(stack.mvp_df64, x, y, z, w)
    raise ValidationError(f"unknown precision {precision!r}")


def transform_point(point, stack: TransformStack, precision: str) -> np.ndarray:
    """Single-point convenience wrapper; returns a (4,) binary64 vector."""
    coords = np.asarray(getattr(point, "coords", point), dtype=np.float64)
    return transform_points(coords[None, :], stack, precision)[0]


def error_report(dataset: Dataset, stack: TransformStack, precision: str) -> ErrorReport:
    """Compare one precision path against the binary64 reference.

    Per point the paths are reduced after the perspective divide: the NDC
    error is the larger of the |dx|, |dy| deviations, the pixel error scales
    it by viewport/2, and the ulp distance is measured between the narrowed
    NDC values.  Points with |w| below 1e-300 are skipped and counted.
    """
    if precision not in ("binary32", "df64"):
        raise ValidationError("error_report compares binary32 or df64 to binary64")
    if len(dataset) == 0:
        raise ValidationError("empty dataset")
    ref = transform_points(dataset.coords, stack, "binary64")
    path = transform_points(dataset.coords, stack, precision)
    ok = (np.abs(ref[:, 3]) >= _W_CUTOFF) & (np.abs(path[:, 3]) >= _W_CUTOFF)
    skipped = int((~ok).sum())
    ref = ref[ok]
    pth = path[ok]
    ndc_ref = ref[:, :2] / ref[:, 3:4]
    ndc_path = pth[:, :2] / pth[:, 3:4]
    delta = np.abs(ndc_path - ndc_ref)
    per_point = delta.max(axis=1)
    vw, vh = stack.viewport
    pixel = np.maximum(delta[:, 0] * (vw / 2.0), delta[:, 1] * (vh / 2.0))
    ulps = _ulp_distance_arrays(ndc_path.ravel(), ndc_ref.ravel())
    if len(per_point) == 0:
        return ErrorReport(0.0, 0.0, 0.0, 0, 0, skipped)
    return ErrorReport(
        max_abs_ndc_error=float(per_point.max()),
        rms_ndc_error=float(np.sqrt(np.mean(per_point**2))),
        max_pixel_error=float(pixel.max()),
        max_ulp_distance=int(ulps.max()),
        sample_count=int(len(per_point)),
        skipped_count=skipped,
    )


def collapse_ratio(view: MandelbrotView, precision: str) -> float:
    """Fraction of horizontally adjacent samples that are bit-identical.

    Nonzero means the grid step fell below one ulp of the coordinate in the
    given precision — the quantitative signature of deep-zoom pixelization.
    """
    if precision not in ("binary32", "binary64"):
        raise ValidationError("collapse ratio is defined for binary32/binary64")
    xs = sample_coords(view.center_re, view.zoom, view.width, precision)
    if precision == "binary32":
        bits = np.asarray(xs, dtype=np.float32).view(np.uint32)
    else:
        bits = np.asarray(xs, dtype=np.float64).view(np.uint64)
    return float((bits[1:] == bits[:-1]).mean())


def iteration_ramp(counts: np.ndarray, max_iterations: int) -> np.ndarray:
    """Fixed monotone grayscale-to-color ramp over escape counts.

    Each channel is nondecreasing in the count, so distinct grids stay
    distinguishable and repeated renders are byte-identical.
    """
    t = counts.astype(np.float64) / float(max_iterations)
    r = np.sqrt(t)
    g = t
    b = t * t
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)


def render_mandelbrot_image(
    view: MandelbrotView,
    precision: str,
    destination: str | PathLike | BinaryIO,
) -> int:
    """Render the escape grid to a binary PPM; returns bytes written."""
    grid = mandelbrot_grid(view, precision)
    pixels = iteration_ramp(grid, view.max_iterations)
    return write_ppm(destination, pixels)
