"""Propagation kernels: compiled extension when available, Python otherwise.

Set CHIRPTLS_PURE_PYTHON=1 before import to force the fallback even when
the extension is built (useful for benchmarking and debugging).
"""

import os

__all__ = ["BACKEND", "propagate_segments"]


def _pure_python_forced() -> bool:
    value = os.environ.get("CHIRPTLS_PURE_PYTHON", "")
    return value.strip().lower() not in ("", "0", "false", "no")


if _pure_python_forced():
    from ._python import propagate_segments

    BACKEND = "python"
else:
    try:
        from ._native import propagate_segments

        BACKEND = "native"
    except ImportError:
        from ._python import propagate_segments

        BACKEND = "python"
