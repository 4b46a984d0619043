"""Initial states for the three search modes, overlaps, and populations.

All states are expanded in the z-product basis.  The single-site building
blocks come from the 2k-qubit picture of a spin-k site and are evaluated in
closed form:

* ``|Sx = -k>``   — every qubit in ``|->``; z-amplitudes
  ``(-1)^(k-m) sqrt(C(2k, k-m)) / 2^k``.
* ``|Sx = -k+1>`` — the symmetric single-flip (W-type) state; z-amplitudes
  ``(-1)^(k-m) m sqrt(2 C(2k, k-m)) / (sqrt(k) 2^k)``.
* spin-coherent   — every qubit in ``sqrt(eps)|+> + sqrt(1-eps)|->`` with
  ``eps = 1/(2k-2)``; writing ``alpha = (sqrt(eps)+sqrt(1-eps))/sqrt(2)`` and
  ``beta = (sqrt(eps)-sqrt(1-eps))/sqrt(2)`` for the z-basis qubit
  amplitudes gives ``sqrt(C(2k, k-m)) alpha^(k+m) beta^(k-m)``.

The global phase is fixed so the first nonzero amplitude is real positive,
which makes CSV dumps and the test goldens reproducible.
"""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .register import FieldProfile, RegisterShape, driver_hamiltonian

NORM_TOL = 1e-12
# Residual allowed when validating the analytic first excited state against H_D.
EIGENSTATE_RESIDUAL_TOL = 1e-9
POPULATION_SUM_TOL = 1e-10


class StateVector:
    """Unit-norm complex amplitudes over the register's z-product basis."""

    __slots__ = ("amplitudes", "shape")

    def __init__(self, amplitudes, shape: RegisterShape, *, norm_tol: float = NORM_TOL):
        amps = np.array(amplitudes, dtype=complex)
        if amps.shape != (shape.dim,):
            raise DimensionMismatchError(
                f"amplitude vector has shape {amps.shape}, register dimension is {shape.dim}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > norm_tol:
            raise ValidationError(f"state norm {nrm!r} deviates from 1 beyond {norm_tol:g}")
        amps.setflags(write=False)
        self.amplitudes = amps
        self.shape = shape

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __repr__(self):
        return f"StateVector(dim={self.dim}, N={self.shape.n_sites}, k={self.shape.k})"


def _phase_fixed(amps: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real positive."""
    for a in amps:
        if abs(a) > 1e-14:
            return amps * (abs(a) / a)
    return amps


def _site_ground(k: int) -> np.ndarray:
    amps = np.zeros(2 * k + 1)
    for i, m in enumerate(range(k, -k - 1, -1)):
        amps[i] = (-1.0) ** (k - m) * math.sqrt(math.comb(2 * k, k - m)) / 2.0**k
    return amps


def _site_first_excited(k: int) -> np.ndarray:
    amps = np.zeros(2 * k + 1)
    for i, m in enumerate(range(k, -k - 1, -1)):
        amps[i] = (
            (-1.0) ** (k - m)
            * m
            * math.sqrt(2.0 * math.comb(2 * k, k - m))
            / (math.sqrt(k) * 2.0**k)
        )
    return amps


def _site_spin_coherent(k: int, eps: float) -> np.ndarray:
    alpha = (math.sqrt(eps) + math.sqrt(1.0 - eps)) / math.sqrt(2.0)
    beta = (math.sqrt(eps) - math.sqrt(1.0 - eps)) / math.sqrt(2.0)
    amps = np.zeros(2 * k + 1)
    for i, m in enumerate(range(k, -k - 1, -1)):
        amps[i] = math.sqrt(math.comb(2 * k, k - m)) * alpha ** (k + m) * beta ** (k - m)
    return amps


def _product_state(site_vectors, shape: RegisterShape) -> StateVector:
    amps = reduce(np.kron, site_vectors).astype(complex)
    amps = _phase_fixed(amps / np.linalg.norm(amps))
    return StateVector(amps, shape)


def driver_ground(profile: FieldProfile, shape: RegisterShape) -> StateVector:
    """Product of lowest-Sx site states; ground state of any positive profile."""
    if profile.n_sites != shape.n_sites:
        raise DimensionMismatchError(
            f"profile has {profile.n_sites} fields for {shape.n_sites} sites"
        )
    g = _site_ground(shape.k)
    return _product_state([g] * shape.n_sites, shape)


def driver_first_excited(profile: FieldProfile, shape: RegisterShape) -> StateVector:
    """The W-type state ``|Sx_1 = -k+1> x  prod_{j>=2} |Sx_j = -k>``.

    This is the unique first excited state of the driver once ``bx_1`` is
    strictly the weakest field (gap ``2 bx_1``); the construction is verified
    against the built driver Hamiltonian and rejected if the residual or the
    expected gap is off.
    """
    if profile.n_sites != shape.n_sites:
        raise DimensionMismatchError(
            f"profile has {profile.n_sites} fields for {shape.n_sites} sites"
        )
    profile.require_excited_mode()
    vecs = [_site_first_excited(shape.k)] + [_site_ground(shape.k)] * (shape.n_sites - 1)
    psi = _product_state(vecs, shape)
    h_d = driver_hamiltonian(profile, shape).matrix
    e1 = -2.0 * shape.k * sum(profile.bx) + 2.0 * profile.bx[0]
    residual = np.linalg.norm(h_d @ psi.amplitudes - e1 * psi.amplitudes)
    if residual >= EIGENSTATE_RESIDUAL_TOL:
        raise ValidationError(
            f"first-excited construction has eigen-residual {residual:.3e} "
            f"against the driver (expected level {e1:g})"
        )
    return psi


def spin_coherent(shape: RegisterShape, profile: FieldProfile) -> StateVector:
    """Separable approximation of the first excited state on site 1.

    Site 1 carries the symmetric-subspace image of 2k identically rotated
    qubits with mixing weight ``eps = 1/(2k-2)``; the other sites stay in
    ``|Sx = -k>``.  Undefined at k = 1 where eps diverges.
    """
    if shape.k < 2:
        raise ValidationError(f"spin-coherent state needs k >= 2, got k={shape.k}")
    if profile.n_sites != shape.n_sites:
        raise DimensionMismatchError(
            f"profile has {profile.n_sites} fields for {shape.n_sites} sites"
        )
    eps = 1.0 / (2.0 * shape.k - 2.0)
    vecs = [_site_spin_coherent(shape.k, eps)] + [_site_ground(shape.k)] * (
        shape.n_sites - 1
    )
    return _product_state(vecs, shape)


def overlap(a: StateVector, b: StateVector) -> complex:
    """Inner product <a|b> with the left argument conjugated."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"state dimensions differ: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def z_populations(psi: StateVector) -> dict[tuple[int, ...], float]:
    """Measurement distribution over z-product basis states (m_1, ..., m_N)."""
    probs = np.abs(psi.amplitudes) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > POPULATION_SUM_TOL:
        raise ValidationError(f"populations sum to {total!r}, expected 1")
    return dict(zip(psi.shape.basis_tuples(), probs.tolist()))
