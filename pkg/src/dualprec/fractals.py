"""Dataset generators: unique random 2D clouds, the Mandelbrot escape grid,
and four 3D fractal point clouds (Mandelbulb, quaternion Julia, Menger
sponge, Sierpinski tetrahedron).

Every generator is a pure function of its parameter record plus seed:
repeated invocation is bit-identical, and lattice generators emit points in
lattice order so chunked and whole-lattice evaluation agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import df64
from .datasets import Dataset
from .errors import CapacityError, ValidationError

__all__ = [
    "MandelbrotView",
    "MandelbulbParams",
    "JuliaParams",
    "MengerParams",
    "SierpinskiParams",
    "gen_random_2d",
    "sample_coords",
    "mandelbrot_grid",
    "mandelbulb_points",
    "julia_quat_points",
    "menger_points",
    "sierpinski_points",
]

Precision = str  # 'binary32' | 'binary64' | 'df64'


# ---------------------------------------------------------------------------
# Parameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MandelbrotView:
    """A square window of the complex plane: zoom is its half-width."""

    center_re: float = -0.7436450
    center_im: float = 0.13182590
    zoom: float = 1e-1
    width: int = 512
    max_iterations: int = 256

    def __post_init__(self):
        if not self.zoom > 0:
            raise ValidationError("zoom must be positive")
        if self.width < 2:
            raise ValidationError("width must be at least 2")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")


@dataclass(frozen=True)
class MandelbulbParams:
    max_iterations: int = 10
    bailout: float = 4.0  # threshold on the squared radius, per the loop guard
    power: float = 8.0
    resolution: int = 64  # samples per axis, inclusive lattice
    bounds: tuple[float, float, float, float, float, float] = (
        -1.2, 1.2, -1.2, 1.2, -1.2, 1.2,
    )

    def __post_init__(self):
        if not self.bailout > 0:
            raise ValidationError("bailout must be positive")
        if self.resolution < 2:
            raise ValidationError("resolution must be at least 2")
        x0, x1, y0, y1, z0, z1 = self.bounds
        if not (x0 < x1 and y0 < y1 and z0 < z1):
            raise ValidationError("each bounds axis needs min < max")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")


@dataclass(frozen=True)
class JuliaParams:
    """Quaternion Julia parameters; c is (x, y, z, w) with the scalar last.

    The c default is a configuration default only, not ground truth.
    The lattice runs over integer triples -resolution..resolution scaled by
    1.5/resolution, i.e. (2*resolution+1) samples per axis spanning
    [-1.5, 1.5]^3.
    """

    c: tuple[float, float, float, float] = (-0.2, 0.6, 0.2, 0.2)
    max_iter: int = 32
    threshold: float = 4.0  # bound on the quaternion norm
    resolution: int = 32

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValidationError("threshold must be positive")
        if self.resolution < 1:
            raise ValidationError("resolution must be at least 1")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be at least 1")


@dataclass(frozen=True)
class MengerParams:
    max_iterations: int = 3
    cube_size: float = 1.0
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)
    deduplicate: bool = False

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValidationError("max_iterations must be nonnegative")
        if not self.cube_size > 0:
            raise ValidationError("cube_size must be positive")


_REGULAR_TET = (
    (1.0, 1.0, 1.0),
    (1.0, -1.0, -1.0),
    (-1.0, 1.0, -1.0),
    (-1.0, -1.0, 1.0),
)


@dataclass(frozen=True)
class SierpinskiParams:
    n: int = 5
    vertices: tuple[tuple[float, float, float], ...] = _REGULAR_TET

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("iteration count must be nonnegative")
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.shape != (4, 3):
            raise ValidationError("exactly four 3D vertices required")
        volume = abs(np.linalg.det(v[1:] - v[0]))
        if volume == 0.0:
            raise ValidationError("vertices are affinely dependent")


# ---------------------------------------------------------------------------
# Random 2D points
# ---------------------------------------------------------------------------


def gen_random_2d(count: int, seed: int) -> Dataset:
    """Uniform points strictly inside (-1,1)^2, pairwise distinct bitwise.

    Duplicate pairs (and boundary hits, which uniform() can produce at -1.0)
    are rejection-resampled from the same generator stream, so a fixed seed
    is bit-reproducible including any resampling.
    """
    if count < 1:
        raise ValidationError("count must be at least 1")
    rng = np.random.default_rng(seed)
    xy = rng.uniform(-1.0, 1.0, size=(count, 2))
    while True:
        bad = (xy <= -1.0).any(axis=1) | (xy >= 1.0).any(axis=1)
        view = xy.view([("x", np.float64), ("y", np.float64)]).ravel()
        _, first_index = np.unique(view, return_index=True)
        dup = np.ones(count, dtype=bool)
        dup[first_index] = False
        bad |= dup
        n_bad = int(bad.sum())
        if n_bad == 0:
            break
        xy[bad] = rng.uniform(-1.0, 1.0, size=(n_bad, 2))
    colors = np.tile([0.8, 0.8, 0.8], (count, 1))
    return Dataset(2, xy, colors, name=f"random2d-{count}", source=f"seed={seed}")


# ---------------------------------------------------------------------------
# Mandelbrot escape grid
# ---------------------------------------------------------------------------


def sample_coords(center: float, zoom: float, width: int, precision: Precision) -> np.ndarray:
    """Per-axis sample coordinates: center + (i - width/2) * (2*zoom/width).

    Evaluated in the requested precision; this is where binary32 collapse
    appears at deep zoom.  binary32 results are returned as a float32 array
    (bit patterns intact), the other precisions as float64.
    """
    idx = np.arange(width, dtype=np.float64)
    offs = idx - width / 2.0
    if precision == "binary64":
        step = 2.0 * zoom / width
        return center + offs * step
    if precision == "binary32":
        f = np.float32
        step = f(2.0) * f(zoom) / f(width)
        return (f(center) + offs.astype(np.float32) * step).astype(np.float32)
    if precision == "df64":
        two = df64.split_arrays(np.full(1, 2.0))
        z = df64.split_arrays(np.full(1, zoom))
        w = df64.split_arrays(np.full(1, float(width)))
        step = df64.div_arrays(df64.mul_arrays(two, z), w)
        step = (np.broadcast_to(step[0], width).copy(),
                np.broadcast_to(step[1], width).copy())
        c = df64.split_arrays(np.full(width, center))
        o = df64.split_arrays(offs)
        h, l = df64.add_arrays(c, df64.mul_arrays(o, step))
        return df64.to_f64_arrays(h, l)
    raise ValidationError(f"unknown precision {precision!r}")


def mandelbrot_grid(view: MandelbrotView, precision: Precision) -> np.ndarray:
    """Escape-iteration grid: z starts at 0, z <- z^2 + c, escape at |z|^2 > 4.

    Sample coordinates are computed in the requested precision; the iteration
    itself runs in binary64 (cells that never escape read max_iterations).
    Row index is the imaginary axis, column index the real axis.
    """
    w = view.width
    xs = np.asarray(
        sample_coords(view.center_re, view.zoom, w, precision), dtype=np.float64
    )
    ys = np.asarray(
        sample_coords(view.center_im, view.zoom, w, precision), dtype=np.float64
    )
    cre = np.broadcast_to(xs[None, :], (w, w)).ravel()
    cim = np.broadcast_to(ys[:, None], (w, w)).ravel()
    counts = np.full(w * w, view.max_iterations, dtype=np.int32)
    live = np.arange(w * w)
    zr = np.zeros(w * w)
    zi = np.zeros(w * w)
    cre_l = cre.copy()
    cim_l = cim.copy()
    for k in range(1, view.max_iterations + 1):
        zr2 = zr * zr - zi * zi + cre_l
        zi = 2.0 * zr * zi + cim_l
        zr = zr2
        escaped = zr * zr + zi * zi > 4.0
        if escaped.any():
            counts[live[escaped]] = k
            keep = ~escaped
            live = live[keep]
            zr = zr[keep]
            zi = zi[keep]
            cre_l = cre_l[keep]
            cim_l = cim_l[keep]
            if live.size == 0:
                break
    return counts.reshape(w, w)


# ---------------------------------------------------------------------------
# Mandelbulb
# ---------------------------------------------------------------------------

_CHUNK = 1 << 18


def _lattice_axis(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def mandelbulb_points(p: MandelbulbParams) -> Dataset:
    """Spherical-coordinate power map over an inclusive lattice.

    A lattice point belongs to the set when the iterate's squared radius
    stays below the bailout for max_iterations steps; qualifying points are
    emitted in lattice order with their (x, y, z) coordinates.
    """
    x0, x1, y0, y1, z0, z1 = p.bounds
    ax = _lattice_axis(x0, x1, p.resolution)
    ay = _lattice_axis(y0, y1, p.resolution)
    az = _lattice_axis(z0, z1, p.resolution)
    kept: list[np.ndarray] = []
    # Slab the x-axis so the working set stays bounded at high resolution.
    rows_per_slab = max(1, _CHUNK // (p.resolution * p.resolution))
    for start in range(0, p.resolution, rows_per_slab):
        xs = ax[start : start + rows_per_slab]
        X, Y, Z = np.meshgrid(xs, ay, az, indexing="ij")
        x = X.ravel()
        y = Y.ravel()
        z = Z.ravel()
        in_set = _mandelbulb_member_mask(x, y, z, p)
        if in_set.any():
            kept.append(np.column_stack([x[in_set], y[in_set], z[in_set]]))
    coords = (
        np.concatenate(kept, axis=0) if kept else np.empty((0, 3), dtype=np.float64)
    )
    colors = np.tile([0.9, 0.9, 0.9], (len(coords), 1))
    return Dataset(3, coords, colors, name="mandelbulb", source=f"power={p.power}")


def _mandelbulb_member_mask(
    x: np.ndarray, y: np.ndarray, z: np.ndarray, p: MandelbulbParams
) -> np.ndarray:
    zx = x.copy()
    zy = y.copy()
    zz = z.copy()
    alive = np.ones(len(x), dtype=bool)
    idx = np.arange(len(x))
    for _ in range(p.max_iterations):
        r2 = zx * zx + zy * zy + zz * zz
        guard = r2 < p.bailout
        if not guard.all():
            alive[idx[~guard]] = False
            idx = idx[guard]
            zx, zy, zz = zx[guard], zy[guard], zz[guard]
            r2 = r2[guard]
            if idx.size == 0:
                break
        r = np.sqrt(r2)
        theta = np.arctan2(np.sqrt(zx * zx + zy * zy), zz)
        phi = np.arctan2(zy, zx)
        nr = r**p.power
        nt = theta * p.power
        np_ = phi * p.power
        zx = nr * np.sin(nt) * np.cos(np_) + x[idx]
        zy = nr * np.sin(nt) * np.sin(np_) + y[idx]
        zz = nr * np.cos(nt) + z[idx]
    return alive


# ---------------------------------------------------------------------------
# Quaternion Julia
# ---------------------------------------------------------------------------

_JULIA_EXTENT = 1.5


def julia_quat_points(p: JuliaParams) -> Dataset:
    """Escape cloud of q <- q^2 + c from q = (x, y, z, 0).

    Emits, as the pseudocode prescribes, the points whose quaternion norm
    reached the threshold within max_iter — the complement of the usual
    interior — carrying the escape count as a per-point scalar.
    """
    r = p.resolution
    ticks = np.arange(-r, r + 1, dtype=np.float64) * (_JULIA_EXTENT / r)
    X, Y, Z = np.meshgrid(ticks, ticks, ticks, indexing="ij")
    x = X.ravel()
    y = Y.ravel()
    z = Z.ravel()
    escaped, n_escape = _julia_escape(x, y, z, p)
    coords = np.column_stack([x[escaped], y[escaped], z[escaped]])
    counts = n_escape[escaped].astype(np.float64)
    colors = np.tile([0.9, 0.9, 0.9], (len(coords), 1))
    return Dataset(
        3, coords, colors, name="julia", source=f"c={p.c}", scalars=counts
    )


def _hamilton_square(qx, qy, qz, qw):
    # (v, w)^2 = (2wv, w^2 - |v|^2) for v = (x, y, z) and scalar w.
    return (
        2.0 * qw * qx,
        2.0 * qw * qy,
        2.0 * qw * qz,
        qw * qw - (qx * qx + qy * qy + qz * qz),
    )


def _julia_escape(x, y, z, p: JuliaParams):
    cx, cy, cz, cw = p.c
    qx = x.copy()
    qy = y.copy()
    qz = z.copy()
    qw = np.zeros_like(x)
    n_escape = np.zeros(len(x), dtype=np.int32)
    escaped = np.zeros(len(x), dtype=bool)
    idx = np.arange(len(x))
    n = 0
    while n < p.max_iter and idx.size:
        norm = np.sqrt(qx * qx + qy * qy + qz * qz + qw * qw)
        out = norm >= p.threshold
        if out.any():
            n_escape[idx[out]] = n
            escaped[idx[out]] = True
            keep = ~out
            idx = idx[keep]
            qx, qy, qz, qw = qx[keep], qy[keep], qz[keep], qw[keep]
            if idx.size == 0:
                break
        qx, qy, qz, qw = _hamilton_square(qx, qy, qz, qw)
        qx += cx
        qy += cy
        qz += cz
        qw += cw
        n += 1
    if idx.size:
        norm = np.sqrt(qx * qx + qy * qy + qz * qz + qw * qw)
        out = norm >= p.threshold
        n_escape[idx[out]] = n
        escaped[idx[out]] = True
    return escaped, n_escape


# ---------------------------------------------------------------------------
# Menger sponge
# ---------------------------------------------------------------------------

_MENGER_MAX_DEPTH = 6

# The 20 surviving (i, j, k) offsets: drop cells where two or more indices == 1.
_MENGER_KEEP = np.array(
    [
        (i, j, k)
        for i in range(3)
        for j in range(3)
        for k in range(3)
        if not ((i == 1 and j == 1) or (i == 1 and k == 1) or (j == 1 and k == 1))
    ],
    dtype=np.float64,
)

_CUBE_CORNERS = np.array(
    [(dx, dy, dz) for dx in (0.0, 1.0) for dy in (0.0, 1.0) for dz in (0.0, 1.0)]
)


def menger_points(p: MengerParams) -> Dataset:
    """Corner vertices of the surviving subcubes after recursive subdivision.

    Leaf-cube count is exactly 20^max_iterations; each leaf contributes its
    8 corners in a fixed order.  Cross-cube duplicates are kept unless
    deduplicate is set, so the 8 * 20^n law holds by construction.
    """
    if p.max_iterations > _MENGER_MAX_DEPTH:
        raise CapacityError(
            f"depth {p.max_iterations} exceeds the supported maximum "
            f"{_MENGER_MAX_DEPTH} (point count would exhaust memory)"
        )
    origins = np.asarray([p.origin], dtype=np.float64)
    size = float(p.cube_size)
    for _ in range(p.max_iterations):
        size /= 3.0
        origins = (origins[:, None, :] + size * _MENGER_KEEP[None, :, :]).reshape(-1, 3)
    corners = (origins[:, None, :] + size * _CUBE_CORNERS[None, :, :]).reshape(-1, 3)
    if p.deduplicate:
        view = corners.view([("x", np.float64), ("y", np.float64), ("z", np.float64)])
        _, first = np.unique(view.ravel(), return_index=True)
        corners = corners[np.sort(first)]
    colors = np.tile([0.9, 0.9, 0.9], (len(corners), 1))
    return Dataset(
        3,
        corners,
        colors,
        name="menger",
        source=f"depth={p.max_iterations}",
    )


# ---------------------------------------------------------------------------
# Sierpinski tetrahedron
# ---------------------------------------------------------------------------

_SIERPINSKI_MAX_DEPTH = 10


def sierpinski_points(p: SierpinskiParams) -> Dataset:
    """Corner-subdivision gasket: 4^n leaf tetrahedra, 4 vertices each."""
    if p.n > _SIERPINSKI_MAX_DEPTH:
        raise CapacityError(
            f"{p.n} iterations exceed the supported maximum {_SIERPINSKI_MAX_DEPTH}"
        )
    tets = np.asarray(p.vertices, dtype=np.float64)[None, :, :]  # (T, 4, 3)
    for _ in range(p.n):
        children = []
        for i in range(4):
            child = np.empty_like(tets)
            child[:, 0] = tets[:, i]
            slot = 1
            for j in range(4):
                if j == i:
                    continue
                child[:, slot] = 0.5 * (tets[:, i] + tets[:, j])
                slot += 1
            children.append(child)
        # Children of one parent stay adjacent: order (parent, child i).
        tets = np.stack(children, axis=1).reshape(-1, 4, 3)
    coords = tets.reshape(-1, 3)
    colors = np.tile([0.9, 0.9, 0.9], (len(coords), 1))
    return Dataset(3, coords, colors, name="sierpinski", source=f"n={p.n}")
