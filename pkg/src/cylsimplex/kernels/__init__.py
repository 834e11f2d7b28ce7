"""Hot loops with a compiled implementation and a numpy fallback.

The compiled extension is used when it imports; set ``CYLSIMPLEX_BACKEND=python``
to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

_BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels

_requested = os.environ.get("CYLSIMPLEX_BACKEND", "").strip().lower()
if _requested and _requested not in ("python", "cython"):
    raise ImportError(f"unknown CYLSIMPLEX_BACKEND {_requested!r}")
if _requested == "python" or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str | None = None):
    """Module implementing the kernels for ``name`` (default: the selected backend)."""
    name = name or BACKEND
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} is not available; have {available_backends()}")
    return _BACKENDS[name]


def batch_projection_radii(points, directions, backend: str | None = None):
    return get_backend(backend).batch_projection_radii(points, directions)


support_subsets = _pykernels.support_subsets
