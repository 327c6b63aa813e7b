"""Chain kernel backend selection.

Prefers the compiled extension and falls back to the pure-Python mirror when
the extension was not built. ``BACKEND`` names the active implementation;
``get_backend`` gives explicit access to either one (used by the tests and
the benchmark to compare them).
"""

from . import _kernels_py

try:
    from . import _kernels

    _impl = _kernels
    HAVE_COMPILED = True
except ImportError:
    _impl = _kernels_py
    HAVE_COMPILED = False

BACKEND = _impl.BACKEND
heat_chain = _impl.heat_chain
svd_chain = _impl.svd_chain


def get_backend(name: str):
    """Return the kernel module for 'compiled' or 'python'."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if not HAVE_COMPILED:
            raise ImportError("compiled kernels are not available")
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
