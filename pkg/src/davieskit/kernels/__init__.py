"""Hot-kernel backend selection.

The compiled extension (``_native``, Cython) is preferred when present;
otherwise the vectorized numpy fallback (``reference``) is used.  Both
expose the same two functions with identical semantics.  Set
``DAVIESKIT_KERNELS=reference`` or ``=compiled`` to force a backend
(forcing ``compiled`` raises if the extension is missing).
"""
import os

from . import reference

_requested = os.environ.get("DAVIESKIT_KERNELS", "").strip().lower()

if _requested in ("reference", "python", "numpy"):
    _impl = reference
    BACKEND = "reference"
elif _requested in ("", "compiled", "native"):
    try:
        from . import _native as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested:
            raise ImportError(
                "DAVIESKIT_KERNELS requested the compiled backend but the "
                "extension is not built; run `pip install -e . --no-build-isolation`"
            )
        _impl = reference
        BACKEND = "reference"
else:
    raise ValueError(f"unknown DAVIESKIT_KERNELS value: {_requested!r}")

qubit_min_entropy = _impl.qubit_min_entropy
qutrit_min_entropy = _impl.qutrit_min_entropy

__all__ = ["BACKEND", "qubit_min_entropy", "qutrit_min_entropy", "reference"]
