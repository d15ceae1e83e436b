"""Render-engine public surface: contexts, pipelines, buffers, measurement.

One render thread owns a context and its command recording; camera updates
arrive through a latest-value mailbox and metrics leave through a snapshot
board (see mailbox.py).  Devices without timestamp queries fall back to
wall-clock timing, flagged on the returned metrics.
"""

from __future__ import annotations

import os
import platform
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..datasets import Dataset
from ..errors import CapacityError, DeviceError, FeatureError, ShaderError, ValidationError
from .camera import CameraState, mvp_for
from .software import SHADER_INTERFACES, SoftwareDevice
from .variants import PipelineVariant, VariantKind, pack_vertices
from .vulkan_backend import VulkanDevice, probe_vulkan

__all__ = [
    "FrameMetrics",
    "RenderContext",
    "Pipeline",
    "VertexBuffer",
    "init_context",
    "build_pipeline",
    "upload_dataset",
    "render_and_measure",
    "offscreen_capture",
    "DEVICE_INDEX_ENV",
]

DEVICE_INDEX_ENV = "DUALPREC_DEVICE_INDEX"


@dataclass(frozen=True)
class FrameMetrics:
    gpu_render_ms: float
    fps: float
    frame_index: int
    wall_clock_fallback: bool = False

    def __post_init__(self):
        if self.gpu_render_ms <= 0 or self.fps <= 0:
            raise ValidationError("render time and framerate must be positive")


@dataclass
class RenderContext:
    device: SoftwareDevice
    headless: bool
    shader_dir: Path | None = None

    def describe(self) -> str:
        return f"{self.device.describe()} on {platform.platform()}"


@dataclass(frozen=True)
class Pipeline:
    variant: PipelineVariant
    interface: dict


@dataclass(frozen=True)
class VertexBuffer:
    data: bytes
    count: int
    variant: PipelineVariant

    @property
    def nbytes(self) -> int:
        return len(self.data)


def _resolve_device_index(device_index: int | None) -> int:
    if device_index is None:
        raw = os.environ.get(DEVICE_INDEX_ENV)
        if raw is not None:
            try:
                device_index = int(raw)
            except ValueError:
                raise DeviceError(
                    f"{DEVICE_INDEX_ENV}={raw!r} is not an integer device index"
                ) from None
    return device_index if device_index is not None else 0


def init_context(
    headless: bool = True,
    backend: str = "auto",
    device_index: int | None = None,
    features: dict | None = None,
    shader_dir: str | Path | None = None,
) -> RenderContext:
    """Create a rendering context.

    backend 'auto' prefers a native Vulkan device and falls back to the
    software rasterizer; 'vulkan' and 'software' force one.  Windowed
    contexts need a native device plus a window system, so on headless-only
    hosts they raise DeviceError with remediation guidance.
    """
    index = _resolve_device_index(device_index)
    if backend not in ("auto", "vulkan", "software"):
        raise ValidationError(f"unknown backend {backend!r}")
    if backend == "vulkan":
        device = VulkanDevice(device_index=index, headless=headless)  # raises today
    elif backend == "software":
        device = _software_device(index, features)
    else:
        available, _reason = probe_vulkan()
        if available:
            try:
                device = VulkanDevice(device_index=index, headless=headless)
            except DeviceError:
                device = _software_device(index, features)
        else:
            device = _software_device(index, features)
    if not headless and device.headless_only:
        raise DeviceError(
            "no windowed rendering on this host (software rasterizer is "
            "headless-only); use 'dualprec bench --headless' instead of view"
        )
    return RenderContext(
        device=device,
        headless=headless,
        shader_dir=Path(shader_dir) if shader_dir else None,
    )


def _software_device(index: int, features: dict | None) -> SoftwareDevice:
    if index != 0:
        raise DeviceError(
            f"device index {index} requested but the software backend exposes "
            "exactly one device (index 0)"
        )
    return SoftwareDevice(features=features)


_SHADER_MODULES = {
    VariantKind.EMULATED64: ("emulated.vert.spv", "emulated.frag.spv"),
    VariantKind.NATIVE64: ("native.vert.spv", "native.frag.spv"),
    VariantKind.PLAIN32: ("plain.vert.spv", "plain.frag.spv"),
}


def build_pipeline(ctx: RenderContext, variant: PipelineVariant) -> Pipeline:
    """Validate features, budgets, and shader interface for one variant."""
    for feature in variant.required_device_features:
        if not ctx.device.supports(feature):
            raise FeatureError(
                f"variant {variant.kind.value} needs device feature "
                f"'{feature}', which {ctx.device.name} does not expose; "
                "use the emulated64 variant on this device"
            )
    if variant.push_constant_size > ctx.device.push_constant_limit:
        raise FeatureError(
            f"push-constant block of {variant.push_constant_size} bytes "
            f"exceeds the device limit {ctx.device.push_constant_limit}"
        )
    if ctx.shader_dir is not None:
        for module in _SHADER_MODULES[variant.kind]:
            if not (ctx.shader_dir / module).exists():
                raise ShaderError(
                    f"shader module {module} missing from {ctx.shader_dir}"
                )
    interface = SHADER_INTERFACES[(variant.kind, variant.dims)]
    layout_map = {a.name: a.location for a in variant.vertex_layout}
    if layout_map != interface:
        raise ShaderError(
            f"vertex layout {layout_map} does not match the "
            f"{variant.kind.value} shader interface {interface}"
        )
    return Pipeline(variant=variant, interface=dict(interface))


def upload_dataset(
    ctx: RenderContext, dataset: Dataset, variant: PipelineVariant
) -> VertexBuffer:
    """Pack and 'upload' one dataset; buffer size is count * stride."""
    if len(dataset) == 0:
        raise ValidationError("refusing to upload an empty dataset")
    try:
        data = pack_vertices(dataset, variant)
    except MemoryError as exc:
        raise CapacityError(
            f"allocation of {len(dataset) * variant.stride} bytes failed"
        ) from exc
    return VertexBuffer(data=data, count=len(dataset), variant=variant)


def render_and_measure(
    ctx: RenderContext,
    pipeline: Pipeline,
    buffer: VertexBuffer,
    camera: CameraState,
    frames: int,
    resolution: tuple[int, int] = (1024, 1024),
) -> FrameMetrics:
    """Draw the full dataset once per frame; report median ms and fps.

    The median is robust to first-frame warmup and scheduler jitter.  The
    MVP matrix is rebuilt in binary64 every frame and narrowed per variant
    inside the draw, exactly like per-frame push constants.
    """
    if frames < 1:
        raise ValidationError("frames must be at least 1")
    durations = []
    t_start = time.perf_counter()
    for _ in range(frames):
        mvp = mvp_for(camera, pipeline.variant.dims, resolution[0] / resolution[1])
        _, seconds = ctx.device.timed_draw(
            pipeline.variant, buffer.data, buffer.count, mvp, resolution
        )
        durations.append(seconds)
    elapsed = time.perf_counter() - t_start
    return FrameMetrics(
        gpu_render_ms=statistics.median(durations) * 1e3,
        fps=frames / elapsed,
        frame_index=frames,
        wall_clock_fallback=not ctx.device.supports("timestampQueries"),
    )


def offscreen_capture(
    ctx: RenderContext,
    pipeline: Pipeline,
    buffer: VertexBuffer,
    camera: CameraState,
    resolution: tuple[int, int] = (512, 512),
    zero_lows: bool = False,
) -> np.ndarray:
    """Render one frame offscreen and return the (H, W, 4) uint8 image."""
    mvp = mvp_for(camera, pipeline.variant.dims, resolution[0] / resolution[1])
    return ctx.device.draw(
        pipeline.variant, buffer.data, buffer.count, mvp, resolution,
        zero_lows=zero_lows,
    )


def save_capture(image: np.ndarray, path: str | Path) -> None:
    """Persist a captured RGBA image; format follows the extension.

    .png keeps the alpha channel (via Pillow); .ppm drops it (P6 is RGB).
    """
    from ..ppm import write_ppm

    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        from PIL import Image

        Image.fromarray(image, mode="RGBA").save(path)
    elif suffix == ".ppm":
        write_ppm(path, np.ascontiguousarray(image[:, :, :3]))
    else:
        raise ValidationError(f"unsupported capture format {suffix!r}; use .png or .ppm")
