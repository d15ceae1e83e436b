"""GPU rendering of point datasets through two interchangeable pipeline
variants (native binary64 vs emulated pair-of-binary32), with render-time
measurement, offscreen capture, and an orbit camera.

The public surface lives in :mod:`dualprec.render.context`; devices are
pluggable, and on hosts without a Vulkan runtime the deterministic software
rasterizer provides the same variant semantics.
"""

from .camera import CameraState, DragEvent, ScrollEvent, camera_update
from .context import (
    FrameMetrics,
    Pipeline,
    RenderContext,
    VertexBuffer,
    build_pipeline,
    init_context,
    offscreen_capture,
    render_and_measure,
    upload_dataset,
)
from .variants import PipelineVariant, VariantKind, VertexAttribute

__all__ = [
    "CameraState",
    "DragEvent",
    "ScrollEvent",
    "camera_update",
    "FrameMetrics",
    "Pipeline",
    "RenderContext",
    "VertexBuffer",
    "build_pipeline",
    "init_context",
    "offscreen_capture",
    "render_and_measure",
    "upload_dataset",
    "PipelineVariant",
    "VariantKind",
    "VertexAttribute",
]
