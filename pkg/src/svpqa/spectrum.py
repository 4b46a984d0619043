"""Instantaneous eigen-analysis of the interpolated Hamiltonian.

Levels are reported sorted ascending at each grid point; no eigenvector
continuity is attempted, so a symmetry-protected level crossing shows up as
an order swap, which sector analysis (symmetry module) disentangles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .register import Operator, total_hamiltonian

RECONSTRUCTION_REL_TOL = 1e-9
ORTHONORMALITY_TOL = 1e-10

DEFAULT_GRID_POINTS = 201
DEFAULT_LEVELS = 8


@dataclass(frozen=True)
class SpectrumTrace:
    """Ascending eigenvalues of H(s) for each s on a grid spanning [0, 1]."""

    s_grid: np.ndarray
    levels: np.ndarray  # shape (len(s_grid), L)
    L: int

    def __post_init__(self):
        s = np.asarray(self.s_grid, dtype=float)
        lv = np.asarray(self.levels, dtype=float)
        if s.ndim != 1 or np.any(np.diff(s) <= 0) or s[0] != 0.0 or s[-1] != 1.0:
            raise ValidationError("s grid must strictly increase from 0 to 1")
        if lv.shape != (s.size, self.L):
            raise ValidationError(f"levels shape {lv.shape} != ({s.size}, {self.L})")
        if np.any(np.diff(lv, axis=1) < 0):
            raise ValidationError("levels must be ascending at every grid point")


def eigh(op: Operator):
    """Eigendecomposition of a Hermitian-flagged operator, contract-checked.

    Returns ascending eigenvalues and the matching orthonormal eigenvector
    columns; reconstruction and orthonormality are verified before returning.
    """
    if not op.hermitian:
        raise ValidationError("eigh requires a Hermitian-flagged operator")
    w, v = np.linalg.eigh(op.matrix)
    scale = np.max(np.abs(op.matrix)) if op.matrix.size else 0.0
    resid = np.max(np.abs(op.matrix - (v * w) @ v.conj().T))
    if resid > RECONSTRUCTION_REL_TOL * scale:
        raise ValidationError(f"eigendecomposition residual {resid:.3e} too large")
    ortho = np.max(np.abs(v.conj().T @ v - np.eye(op.dim)))
    if ortho > ORTHONORMALITY_TOL:
        raise ValidationError(f"eigenvectors deviate from orthonormality by {ortho:.3e}")
    return w, v


def trace_spectrum(
    h_d: Operator,
    h_p: Operator,
    n_points: int = DEFAULT_GRID_POINTS,
    L: int = DEFAULT_LEVELS,
) -> SpectrumTrace:
    """Lowest L instantaneous levels on a uniform s grid including endpoints."""
    if n_points < 2:
        raise ValidationError(f"need at least 2 grid points, got {n_points}")
    if not 1 <= L <= h_d.dim:
        raise ValidationError(f"L={L} outside 1..{h_d.dim}")
    s_grid = np.linspace(0.0, 1.0, n_points)
    levels = np.empty((n_points, L))
    for i, s in enumerate(s_grid):
        w, _ = eigh(total_hamiltonian(float(s), h_d, h_p))
        levels[i] = w[:L]
    return SpectrumTrace(s_grid=s_grid, levels=levels, L=L)


def min_gap(trace: SpectrumTrace, i: int, j: int):
    """Minimum of level_j - level_i over the grid and the s where it occurs."""
    if not 0 <= i < j < trace.L:
        raise ValidationError(f"need 0 <= i < j < L={trace.L}, got i={i}, j={j}")
    gaps = trace.levels[:, j] - trace.levels[:, i]
    idx = int(np.argmin(gaps))
    return float(gaps[idx]), float(trace.s_grid[idx])
