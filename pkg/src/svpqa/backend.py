"""Propagation backend selection.

The compiled extension is picked at import time when it built successfully;
``SVPQA_PURE=1`` forces the numpy fallback.  The compiled kernel covers real
symmetric Hamiltonian pairs (the only kind this package constructs); complex
Hermitian inputs always take the fallback.
"""

import os

import numpy as np

from . import _kernel_py

try:
    from . import _kernel
except ImportError:
    _kernel = None

_FORCE_PURE = os.environ.get("SVPQA_PURE", "") not in ("", "0")

HAVE_COMPILED = _kernel is not None


def backend_name() -> str:
    return "pure" if (_kernel is None or _FORCE_PURE) else "compiled"


def _as_real(m: np.ndarray):
    if np.isrealobj(m):
        return np.ascontiguousarray(m, dtype=np.float64)
    if np.max(np.abs(m.imag)) == 0.0:
        return np.ascontiguousarray(m.real, dtype=np.float64)
    return None


def propagate(h_d, h_p, psi0, dt, s_mids):
    """Apply the midpoint slice unitaries of H(s) = (1-s)H_D + sH_P to psi0."""
    s_mids = np.ascontiguousarray(s_mids, dtype=np.float64)
    psi0 = np.ascontiguousarray(psi0, dtype=np.complex128)
    if _kernel is not None and not _FORCE_PURE:
        hd_r = _as_real(np.asarray(h_d))
        hp_r = _as_real(np.asarray(h_p))
        if hd_r is not None and hp_r is not None:
            return _kernel.propagate(hd_r, hp_r, psi0, float(dt), s_mids)
    return _kernel_py.propagate(np.asarray(h_d), np.asarray(h_p), psi0, float(dt), s_mids)
