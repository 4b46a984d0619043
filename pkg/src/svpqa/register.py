"""Collective spin-k operator algebra and annealing Hamiltonians.

Each lattice coordinate is one spin-k site of dimension ``2k+1`` (the
permutation-symmetric subspace of 2k qubits), so an N-coordinate register has
dimension ``(2k+1)^N``.  Basis convention, fixed for reproducible output:
site 1 is the leftmost Kronecker factor and within a site the magnetization
runs from ``m = k`` (index 0) down to ``m = -k`` (index 2k).  The eigenvalue
of ``Sz`` at site i is the integer lattice coefficient ``x_i``.

Hamiltonians (energy units J = 1, hbar = 1):

* problem:  ``H_P = sum_{i,j} G[i][j] Sz_i Sz_j`` — diagonal, with entry
  ``x^T G x`` on the basis state of magnetizations x; the SVP solutions span
  its first excited level.
* driver:   ``H_D = sum_i bx_i * 2 Sx_i`` — transverse fields, ground state
  is the product of lowest-``Sx`` states with energy ``-2k * sum_i bx_i``.
* total:    ``H(s) = (1-s) H_D + s H_P`` along the anneal parameter s.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .lattice import GramMatrix

# Builders must produce matrices passing this Hermiticity check.
HERMITICITY_TOL = 1e-12
# Strict margin separating bx_1 from the other fields in excited-search mode.
EXCITED_GAP_TOL = 1e-9


@dataclass(frozen=True)
class RegisterShape:
    """(N, k): N spin-k sites, Hilbert dimension ``(2k+1)^N`` (exact int)."""

    n_sites: int
    k: int

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValidationError(f"need at least one site, got N={self.n_sites}")
        if self.k < 1:
            raise ValidationError(f"coefficient bound k must be >= 1, got {self.k}")

    @property
    def site_dim(self) -> int:
        return 2 * self.k + 1

    @property
    def dim(self) -> int:
        return self.site_dim**self.n_sites

    def m_values(self) -> tuple[int, ...]:
        """Site magnetizations in basis order: k, k-1, ..., -k."""
        return tuple(range(self.k, -self.k - 1, -1))

    def basis_tuples(self) -> list[tuple[int, ...]]:
        """Magnetization tuples (m_1, ..., m_N) in register basis order."""
        return list(itertools.product(self.m_values(), repeat=self.n_sites))

    def index_of(self, m_tuple) -> int:
        idx = 0
        for m in m_tuple:
            if abs(m) > self.k:
                raise ValidationError(f"magnetization {m} outside [-k, k]")
            idx = idx * self.site_dim + (self.k - int(m))
        return idx


@dataclass(frozen=True)
class Operator:
    """Dense operator on the register with an asserted-Hermitian flag."""

    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"operator must be square, got shape {m.shape}")
        if self.hermitian:
            dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
            if dev >= HERMITICITY_TOL:
                raise ValidationError(
                    f"matrix flagged Hermitian deviates from H^dagger by {dev:.3e}"
                )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class FieldProfile:
    """Per-site transverse field strengths ``bx_i > 0``."""

    bx: tuple[float, ...]

    def __post_init__(self):
        bx = tuple(float(b) for b in self.bx)
        if not bx or any(b <= 0 for b in bx):
            raise ValidationError(f"field strengths must all be positive, got {bx}")
        object.__setattr__(self, "bx", bx)

    @classmethod
    def uniform(cls, bx: float, n_sites: int) -> "FieldProfile":
        return cls((bx,) * n_sites)

    @classmethod
    def with_ratio(cls, bx1: float, ratio: float, n_sites: int) -> "FieldProfile":
        """Fields (bx1, bx1/ratio, ..., bx1/ratio) with ratio = bx_1 / bx_j."""
        if ratio <= 0:
            raise ValidationError(f"field ratio must be positive, got {ratio}")
        return cls((bx1,) + (bx1 / ratio,) * (n_sites - 1))

    @property
    def n_sites(self) -> int:
        return len(self.bx)

    def require_excited_mode(self) -> None:
        """Excited-state search needs bx_1 strictly below every other field."""
        rest = min(self.bx[1:], default=math.inf)
        if not self.bx[0] < rest - EXCITED_GAP_TOL:
            raise ValidationError(
                "excited-search profile needs bx_1 < min(bx_2..bx_N) - "
                f"{EXCITED_GAP_TOL:g}, got {self.bx}"
            )


def spin_matrices(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-site spin-k matrices (Sx, Sz) in the descending-m basis.

    Sz = diag(k, k-1, ..., -k); Sx couples neighbouring m with ladder
    elements ``<m+-1|Sx|m> = sqrt(k(k+1) - m(m+-1)) / 2``.
    """
    if k < 1:
        raise ValidationError(f"spin quantum number must be >= 1, got {k}")
    m = np.arange(k, -k - 1, -1, dtype=float)
    sz = np.diag(m)
    sx = np.zeros((2 * k + 1, 2 * k + 1))
    for i in range(2 * k):
        # element between m[i] and m[i+1] = m[i] - 1
        elem = 0.5 * math.sqrt(k * (k + 1) - m[i] * m[i + 1])
        sx[i, i + 1] = sx[i + 1, i] = elem
    return sx, sz


def spin_y(k: int) -> np.ndarray:
    """Single-site Sy built from the ladder operators (used by parity checks)."""
    sx, _ = spin_matrices(k)
    m = np.arange(k, -k - 1, -1, dtype=float)
    sp = np.zeros((2 * k + 1, 2 * k + 1))
    for i in range(2 * k):
        sp[i, i + 1] = math.sqrt(k * (k + 1) - m[i] * m[i + 1])
    sm = sp.T
    return (sp - sm) / 2j


def embed(site_op: np.ndarray, site_index: int, shape: RegisterShape) -> Operator:
    """Kronecker-embed a single-site operator at 1-based ``site_index``."""
    if not 1 <= site_index <= shape.n_sites:
        raise ValidationError(
            f"site index {site_index} out of range 1..{shape.n_sites}"
        )
    op = np.asarray(site_op)
    if op.shape != (shape.site_dim, shape.site_dim):
        raise DimensionMismatchError(
            f"site operator shape {op.shape} does not match site_dim {shape.site_dim}"
        )
    eye = np.eye(shape.site_dim)
    factors = [op if i == site_index else eye for i in range(1, shape.n_sites + 1)]
    full = reduce(np.kron, factors)
    herm = bool(np.max(np.abs(op - np.asarray(op).conj().T)) < HERMITICITY_TOL)
    return Operator(full, hermitian=herm)


def problem_hamiltonian(gram: GramMatrix, shape: RegisterShape) -> Operator:
    """Diagonal cost operator ``sum_{i,j} G[i][j] Sz_i Sz_j``."""
    if gram.n != shape.n_sites:
        raise DimensionMismatchError(
            f"Gram matrix is {gram.n} x {gram.n} but register has {shape.n_sites} sites"
        )
    _, sz = spin_matrices(shape.k)
    z_diags = [np.diag(embed(sz, i, shape).matrix).real for i in range(1, shape.n_sites + 1)]
    diag = np.zeros(shape.dim)
    for i in range(shape.n_sites):
        for j in range(shape.n_sites):
            diag += gram.matrix[i, j] * z_diags[i] * z_diags[j]
    return Operator(np.diag(diag), hermitian=True)


def driver_hamiltonian(profile: FieldProfile, shape: RegisterShape) -> Operator:
    """Transverse-field operator ``sum_i bx_i * 2 Sx_i``.

    The factor 2 realizes the sum of 2k single-qubit flips on the symmetric
    subspace; the ground state is the product of ``|Sx = -k>`` states with
    energy ``-2k * sum_i bx_i``.
    """
    if profile.n_sites != shape.n_sites:
        raise DimensionMismatchError(
            f"profile has {profile.n_sites} fields for {shape.n_sites} sites"
        )
    sx, _ = spin_matrices(shape.k)
    h = np.zeros((shape.dim, shape.dim))
    for i in range(1, shape.n_sites + 1):
        h += profile.bx[i - 1] * 2.0 * embed(sx, i, shape).matrix.real
    return Operator(h, hermitian=True)


def total_hamiltonian(s: float, h_d: Operator, h_p: Operator) -> Operator:
    """Linear interpolation ``(1-s) H_D + s H_P`` at anneal parameter s."""
    if not 0.0 <= s <= 1.0:
        raise ValidationError(f"anneal parameter s must lie in [0, 1], got {s}")
    if h_d.dim != h_p.dim:
        raise DimensionMismatchError(
            f"operator dimensions differ: {h_d.dim} vs {h_p.dim}"
        )
    return Operator(
        (1.0 - s) * h_d.matrix + s * h_p.matrix,
        hermitian=h_d.hermitian and h_p.hermitian,
    )
