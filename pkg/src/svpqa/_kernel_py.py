"""Pure-numpy midpoint slice propagator (fallback backend).

Each slice applies the exact unitary ``exp(-i H(s) dt)`` of the frozen
midpoint Hamiltonian via numpy's Hermitian eigendecomposition.  Accepts real
or complex Hermitian inputs.
"""

import numpy as np


def propagate(h_d, h_p, psi0, dt, s_mids):
    psi = np.array(psi0, dtype=complex)
    for s in s_mids:
        h = (1.0 - s) * h_d + s * h_p
        w, v = np.linalg.eigh(h)
        psi = v @ (np.exp(-1j * dt * w) * (v.conj().T @ psi))
    return psi
