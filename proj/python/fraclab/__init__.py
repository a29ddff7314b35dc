"""Numerical laboratory for SDEs and stochastic heat equations with
distributional drifts driven by fractional noise.

The compiled extension carries the full API; this package re-exports it and
adds a small loader fallback so in-tree builds (CMake without an install step)
can point at the build directory via FRACLAB_EXT_DIR.
"""

import os
import sys

try:
    from fraclab._core import *  # noqa: F401,F403
    from fraclab._core import __version__  # noqa: F401
except ImportError:  # in-tree build: extension lives in the CMake build dir
    _ext_dir = os.environ.get("FRACLAB_EXT_DIR")
    if not _ext_dir:
        raise
    sys.path.insert(0, _ext_dir)
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
