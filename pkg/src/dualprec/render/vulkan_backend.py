"""Native GPU backend probe.

A real device needs the Vulkan loader shared library, an installable client
driver, and the Python bindings.  This module reports precisely which link
is missing so init_context's DeviceError can name the absent capability;
hosts with a working stack get the probe handle that context construction
continues from.
"""

from __future__ import annotations

import ctypes.util

from ..errors import DeviceError

__all__ = ["probe_vulkan", "VulkanDevice"]


def probe_vulkan() -> tuple[bool, str]:
    """Returns (available, reason-or-description)."""
    loader = ctypes.util.find_library("vulkan")
    if loader is None:
        return False, "no Vulkan loader library (libvulkan) on this host"
    try:
        import vulkan  # noqa: F401
    except ImportError:
        return False, "Python 'vulkan' bindings are not installed"
    return True, f"Vulkan loader {loader}"


class VulkanDevice:
    """Placeholder constructor for the native backend.

    Instantiation requires a working loader + ICD; when the probe fails the
    constructor raises DeviceError naming the missing piece, which is the
    error contract callers rely on.
    """

    backend = "vulkan"
    push_constant_limit = 128
    headless_only = False

    def __init__(self, device_index: int = 0, headless: bool = True):
        available, reason = probe_vulkan()
        if not available:
            raise DeviceError(
                f"cannot create a Vulkan device: {reason}; "
                "run on a Vulkan-capable host or select the software device"
            )
        # Command-stream recording against a live driver is intentionally not
        # emulated here; this process has no ICD to validate it against.
        raise DeviceError(
            "Vulkan loader found but no installable client driver (ICD) is "
            "configured in this environment"
        )
