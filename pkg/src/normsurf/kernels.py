"""Backend selection for the hot loops.

The compiled extension is used when it was built; setting the environment
variable ``NORMSURF_PURE_PYTHON=1`` forces the pure-Python versions.
"""

from __future__ import annotations

import os

if os.environ.get("NORMSURF_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import BACKEND, dd_pairs, minimal_elements
else:
    try:
        from ._ckernels import BACKEND, dd_pairs, minimal_elements  # type: ignore[no-redef]
    except ImportError:  # extension not built
        from ._pykernels import BACKEND, dd_pairs, minimal_elements  # type: ignore[no-redef]

__all__ = ["BACKEND", "dd_pairs", "minimal_elements"]
