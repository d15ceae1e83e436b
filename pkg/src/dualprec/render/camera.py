"""Orbit camera: state, input events, and matrix construction.

camera_update is a pure function of (state, event); the render loop owns no
camera state of its own.  All matrices are built in binary64 and narrowed
per pipeline variant at draw time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import ValidationError

__all__ = [
    "CameraState",
    "DragEvent",
    "ScrollEvent",
    "camera_update",
    "mvp_for",
    "look_at",
    "perspective",
]

_ELEV_LIMIT = math.nextafter(math.pi / 2, 0.0)
DRAG_RADIANS_PER_UNIT = 0.01
SCROLL_FACTOR_PER_TICK = 0.9


@dataclass(frozen=True)
class CameraState:
    azimuth: float = 0.6
    elevation: float = 0.35
    distance: float = 3.0
    target: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.distance > 0:
            raise ValidationError("camera distance must be positive")
        if not -math.pi / 2 < self.elevation < math.pi / 2:
            raise ValidationError("elevation must lie strictly inside (-pi/2, pi/2)")


@dataclass(frozen=True)
class DragEvent:
    dx: float
    dy: float


@dataclass(frozen=True)
class ScrollEvent:
    ticks: int  # positive zooms in


def camera_update(state: CameraState, event) -> CameraState:
    if isinstance(event, DragEvent):
        azimuth = state.azimuth + event.dx * DRAG_RADIANS_PER_UNIT
        elevation = state.elevation + event.dy * DRAG_RADIANS_PER_UNIT
        elevation = min(max(elevation, -_ELEV_LIMIT), _ELEV_LIMIT)
        return replace(state, azimuth=azimuth, elevation=elevation)
    if isinstance(event, ScrollEvent):
        if event.ticks == 0:
            return state
        factor = SCROLL_FACTOR_PER_TICK ** abs(event.ticks)
        # in-then-out restores distance to within one ulp: (d*g)/g
        if event.ticks > 0:
            return replace(state, distance=state.distance * factor)
        return replace(state, distance=state.distance / factor)
    raise ValidationError(f"unknown camera event {event!r}")


def eye_position(state: CameraState) -> np.ndarray:
    ce = math.cos(state.elevation)
    direction = np.array(
        [ce * math.sin(state.azimuth), math.sin(state.elevation),
         ce * math.cos(state.azimuth)]
    )
    return np.asarray(state.target, dtype=np.float64) + state.distance * direction


def look_at(eye, target, up=(0.0, 1.0, 0.0)) -> np.ndarray:
    eye = np.asarray(eye, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    f = target - eye
    f = f / np.linalg.norm(f)
    s = np.cross(f, np.asarray(up, dtype=np.float64))
    s = s / np.linalg.norm(s)
    u = np.cross(s, f)
    view = np.eye(4)
    view[0, :3] = s
    view[1, :3] = u
    view[2, :3] = -f
    view[0, 3] = -s.dot(eye)
    view[1, 3] = -u.dot(eye)
    view[2, 3] = f.dot(eye)
    return view


def perspective(fovy: float, aspect: float, near: float, far: float) -> np.ndarray:
    t = 1.0 / math.tan(fovy / 2.0)
    proj = np.zeros((4, 4))
    proj[0, 0] = t / aspect
    proj[1, 1] = t
    proj[2, 2] = far / (near - far)
    proj[2, 3] = near * far / (near - far)
    proj[3, 2] = -1.0
    return proj


def _ortho_2d(state: CameraState) -> np.ndarray:
    # distance acts as the half-extent of the viewed square
    m = np.eye(4)
    m[0, 0] = 1.0 / state.distance
    m[1, 1] = 1.0 / state.distance
    m[0, 3] = -state.target[0] / state.distance
    m[1, 3] = -state.target[1] / state.distance
    m[2, 2] = 0.0
    m[2, 3] = 0.5  # constant mid-range depth keeps z inside the clip volume
    return m


def mvp_for(state: CameraState, dims: int, aspect: float = 1.0) -> np.ndarray:
    """Model-view-projection for a dataset: perspective orbit in 3D,
    target-centered orthographic in 2D."""
    if dims == 2:
        return _ortho_2d(state)
    proj = perspective(math.radians(60.0), aspect, 0.05, 100.0)
    return proj @ look_at(eye_position(state), state.target)
