"""Deterministic CPU rasterizer implementing both pipeline variants.

This device reproduces the numeric semantics of the GPU paths exactly:

* emulated64 — attributes are (high, low) binary32 pairs; the vertex stage
  recombines ``high + low`` in binary32 *before* the matrix multiply and runs
  the multiply against the 64-byte binary32 push-constant matrix, which is
  precisely what the emulated vertex shader does.
* native64 — the multiply runs entirely in binary64 against the 128-byte
  binary64 matrix and the clip position is narrowed to binary32 only at the
  end, matching the native shader's final vec4 assignment.
* plain32 — everything binary32; the baseline the emulated path collapses to
  when its low components are zero.

Rasterization is Vulkan-flavored: clip volume -w <= x,y <= w, 0 <= z <= w,
framebuffer y pointing down, one pixel per point, strict-less depth test with
first-drawn-wins ties (2D datasets draw painter-style, last wins).  Every
draw with identical inputs produces identical bytes.
"""

from __future__ import annotations

import time

import numpy as np

from ..errors import DeviceError
from .variants import PipelineVariant, VariantKind, unpack_vertices

__all__ = ["SoftwareDevice"]

_DEFAULT_FEATURES = {
    "shaderFloat64": True,
    "vertexAttributeFloat64": True,
    "timestampQueries": False,
}

# Attribute slot maps of the built-in shader programs, one per variant kind
# and dimensionality; build_pipeline validates these against the variant's
# vertex layout the same way SPIR-V reflection would.
SHADER_INTERFACES = {
    (VariantKind.EMULATED64, dims): {
        "highPos": 0, "lowPos": 1, "highColor": 2, "lowColor": 3,
    }
    for dims in (2, 3)
} | {
    (VariantKind.NATIVE64, 3): {"pos": 0, "color": 2},
    (VariantKind.NATIVE64, 2): {"pos": 0, "color": 1},
    (VariantKind.PLAIN32, 3): {"pos": 0, "color": 1},
    (VariantKind.PLAIN32, 2): {"pos": 0, "color": 1},
}


class SoftwareDevice:
    """Headless software rasterizer with a fixed feature set."""

    backend = "software"
    name = "dualprec-cpu-rasterizer"
    push_constant_limit = 128
    headless_only = True

    def __init__(self, features: dict | None = None):
        self.features = dict(_DEFAULT_FEATURES)
        if features:
            self.features.update(features)

    def supports(self, feature: str) -> bool:
        return bool(self.features.get(feature, False))

    def describe(self) -> str:
        on = ",".join(k for k, v in sorted(self.features.items()) if v)
        return f"{self.name} (backend={self.backend}, features={on})"

    # -- drawing ------------------------------------------------------------

    def draw(
        self,
        variant: PipelineVariant,
        vertex_data: bytes,
        count: int,
        mvp64: np.ndarray,
        resolution: tuple[int, int],
        background: tuple[int, int, int, int] = (0, 0, 0, 255),
        zero_lows: bool = False,
    ) -> np.ndarray:
        """One full draw; returns the (H, W, 4) uint8 color attachment.

        zero_lows forces the low attributes to zero at the vertex stage, the
        degenerate-packing experiment the shader semantics invariant needs.
        """
        clip32, color32 = self._vertex_stage(variant, vertex_data, count, mvp64,
                                             zero_lows)
        depth_test = variant.dims == 3
        return _rasterize(clip32, color32, resolution, depth_test, background)

    def _vertex_stage(self, variant, vertex_data, count, mvp64, zero_lows):
        attrs = unpack_vertices(vertex_data, variant, count)
        if variant.kind is VariantKind.EMULATED64:
            mvp32 = mvp64.astype(np.float32)
            low_pos = attrs["lowPos"]
            low_col = attrs["lowColor"]
            if zero_lows:
                low_pos = np.zeros_like(low_pos)
                low_col = np.zeros_like(low_col)
            pos32 = attrs["highPos"] + low_pos  # binary32 sum, as in the shader
            clip32 = _matvec_f32(mvp32, pos32, variant.dims)
            color32 = attrs["highColor"] + low_col
        elif variant.kind is VariantKind.NATIVE64:
            if not self.supports("shaderFloat64"):
                raise DeviceError("device lost shaderFloat64 mid-flight")
            clip64 = _matvec_f64(mvp64, attrs["pos"], variant.dims)
            clip32 = clip64.astype(np.float32)  # the final vec4() narrowing
            color32 = attrs["color"].astype(np.float32)
        else:
            mvp32 = mvp64.astype(np.float32)
            clip32 = _matvec_f32(mvp32, attrs["pos"], variant.dims)
            color32 = attrs["color"]
        return clip32, color32

    # -- timing -------------------------------------------------------------

    def timed_draw(self, *args, **kwargs) -> tuple[np.ndarray, float]:
        t0 = time.perf_counter()
        image = self.draw(*args, **kwargs)
        return image, time.perf_counter() - t0


def _matvec_f32(m32: np.ndarray, pos: np.ndarray, dims: int) -> np.ndarray:
    x = pos[:, 0]
    y = pos[:, 1]
    z = pos[:, 2] if dims == 3 else np.zeros_like(x)
    one = np.float32(1.0)
    cols = [
        m32[i, 0] * x + m32[i, 1] * y + m32[i, 2] * z + m32[i, 3] * one
        for i in range(4)
    ]
    return np.stack(cols, axis=-1)


def _matvec_f64(m64: np.ndarray, pos: np.ndarray, dims: int) -> np.ndarray:
    x = pos[:, 0]
    y = pos[:, 1]
    z = pos[:, 2] if dims == 3 else np.zeros_like(x)
    cols = [
        m64[i, 0] * x + m64[i, 1] * y + m64[i, 2] * z + m64[i, 3]
        for i in range(4)
    ]
    return np.stack(cols, axis=-1)


def _rasterize(clip32, color32, resolution, depth_test, background):
    width, height = resolution
    image = np.empty((height, width, 4), dtype=np.uint8)
    image[:] = np.asarray(background, dtype=np.uint8)
    x = clip32[:, 0]
    y = clip32[:, 1]
    z = clip32[:, 2]
    w = clip32[:, 3]
    inside = (w > 0) & (np.abs(x) <= w) & (np.abs(y) <= w) & (z >= 0) & (z <= w)
    if not inside.any():
        return image
    x = x[inside]
    y = y[inside]
    z = z[inside]
    w = w[inside]
    colors = color32[inside]
    ndc_x = x / w
    ndc_y = y / w
    depth = (z / w).astype(np.float32)
    half_w = np.float32(0.5)
    px = np.floor((ndc_x * half_w + half_w) * np.float32(width)).astype(np.int64)
    py = np.floor((ndc_y * half_w + half_w) * np.float32(height)).astype(np.int64)
    ok = (px >= 0) & (px < width) & (py >= 0) & (py < height)
    px, py, depth, colors = px[ok], py[ok], depth[ok], colors[ok]
    if len(px) == 0:
        return image
    pix = py * width + px
    if depth_test:
        # Pack (pixel, depth) into one key; stable sort leaves the earliest
        # vertex first among equal keys, i.e. strict-less depth semantics.
        key = (pix.astype(np.uint64) << np.uint64(32)) | depth.view(np.uint32).astype(np.uint64)
        order = np.argsort(key, kind="stable")
        sorted_pix = pix[order]
        first = np.ones(len(sorted_pix), dtype=bool)
        first[1:] = sorted_pix[1:] != sorted_pix[:-1]
        winners = order[first]
    else:
        order = np.argsort(pix, kind="stable")
        sorted_pix = pix[order]
        last = np.ones(len(sorted_pix), dtype=bool)
        last[:-1] = sorted_pix[1:] != sorted_pix[:-1]
        winners = order[last]
    rgb = np.clip(colors[winners].astype(np.float64), 0.0, 1.0)
    quantized = np.rint(rgb * 255.0).astype(np.uint8)
    flat = image.reshape(-1, 4)
    flat[pix[winners], :3] = quantized
    flat[pix[winners], 3] = 255
    return image
