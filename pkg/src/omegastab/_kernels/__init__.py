"""Backend selection for the hot projection kernels.

OMEGA_STAB_BACKEND picks the implementation:
  "numba" - require the jitted kernels (ImportError if numba is missing),
  "numpy" - force the pure-numpy fallback,
  "auto"  - numba when importable, numpy otherwise (the default).
"""

from __future__ import annotations

import os

from . import numpy_backend

_choice = os.environ.get("OMEGA_STAB_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"OMEGA_STAB_BACKEND must be auto, numba or numpy, got {_choice!r}"
    )

if _choice == "numpy":
    _impl = numpy_backend
    BACKEND_NAME = "numpy"
else:
    try:
        from . import numba_backend as _impl

        BACKEND_NAME = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        _impl = numpy_backend
        BACKEND_NAME = "numpy"

HURWITZ = numpy_backend.HURWITZ
SCHUR = numpy_backend.SCHUR
STABLE = numpy_backend.STABLE
UNSTABLE = numpy_backend.UNSTABLE
MEDIAL = numpy_backend.MEDIAL
MEDIAL_ALPHA_TOL = numpy_backend.MEDIAL_ALPHA_TOL

diag_project = _impl.diag_project
diag_dproject = _impl.diag_dproject
target_residual = _impl.target_residual
objective_value = _impl.objective_value
hessian_terms = _impl.hessian_terms
