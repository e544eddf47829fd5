"""Hot-kernel backend selection.

The compiled extension ``minlab._ckern`` provides the inner loops
(triangle flood fill, preconditioned conjugate gradients, level-segment
linking).  When it is missing -- pure-source checkout, or the build was
skipped with ``MINLAB_PURE=1`` -- the numpy/scipy fallback is used.

``MINLAB_KERNELS`` overrides the choice: ``c`` forces the extension
(ImportError if absent), ``py`` forces the fallback, anything else or
unset means auto.
"""

import os

from . import numpy_backend

_choice = os.environ.get("MINLAB_KERNELS", "auto").lower()

if _choice == "py":
    backend = numpy_backend
else:
    try:
        from . import c_backend as backend  # noqa: F401
    except ImportError:
        if _choice == "c":
            raise
        backend = numpy_backend

BACKEND_NAME = backend.NAME


def available_backends():
    names = ["numpy"]
    try:
        from . import c_backend  # noqa: F401

        names.insert(0, "c")
    except ImportError:
        pass
    return names


def get_backend(name):
    if name in ("c", "compiled"):
        from . import c_backend

        return c_backend
    if name in ("py", "numpy", "python"):
        return numpy_backend
    raise ValueError(f"unknown backend {name!r}")
