"""Backend selection for the numeric kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is loaded. Set ``FLOWNEAT_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("FLOWNEAT_PURE_PYTHON", "") not in ("", "0"):
    from . import _purepy as _impl
else:
    try:
        from . import _accel as _impl
    except ImportError:
        from . import _purepy as _impl

BACKEND = _impl.BACKEND

bfs_distances = _impl.bfs_distances
global_efficiency = _impl.global_efficiency
local_efficiency = _impl.local_efficiency
eigenvector_power = _impl.eigenvector_power
forward_batch = _impl.forward_batch
cartpole_step = _impl.cartpole_step
cartpole_run = _impl.cartpole_run


def load_backend(name):
    """Return the kernel module for ``"python"`` or ``"cython"``."""
    if name == "python":
        from . import _purepy

        return _purepy
    if name == "cython":
        from . import _accel

        return _accel
    raise ValueError(f"unknown backend {name!r}")
