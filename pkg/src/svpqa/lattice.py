"""Lattice bases, Gram matrices, and an exact boxed-coefficient SVP oracle.

A lattice is given either by an explicit basis matrix (columns = basis
vectors) or, for the two-dimensional instances used throughout the
experiments, in polar form: the two norms ``b1``, ``b2`` and the angle
``theta`` between the vectors.  The squared norm of the lattice vector with
integer coefficients ``x`` is the quadratic form ``x^T G x`` of the Gram
matrix ``G``, and the boxed SVP asks for the nonzero minimizer with every
coefficient in ``[-k, k]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasisError, DimensionMismatchError, ValidationError

# Normalized Gram determinant below this is treated as rank-deficient.
DEGENERACY_TOL = 1e-12
# Relative tolerance grouping equal-norm coefficient vectors into one solution set.
TIE_REL_TOL = 1e-10


@dataclass(frozen=True)
class LatticeBasis:
    """A set of N linearly independent lattice basis vectors.

    ``matrix`` holds the explicit d x N basis (one vector per column) and is
    None for polar-form bases; ``polar`` holds ``(b1, b2, theta)`` and is
    None for matrix-form bases.  Use the ``from_matrix`` / ``from_polar``
    constructors; they validate the invariants.
    """

    matrix: np.ndarray | None
    polar: tuple[float, float, float] | None

    @classmethod
    def from_matrix(cls, b) -> "LatticeBasis":
        b = np.array(b, dtype=float)
        if b.ndim != 2 or b.shape[0] < b.shape[1] or b.shape[1] < 1:
            raise ValidationError(
                f"basis matrix must be d x N with d >= N >= 1, got shape {b.shape}"
            )
        b.setflags(write=False)
        basis = cls(matrix=b, polar=None)
        _require_independent(_gram_array(basis))
        return basis

    @classmethod
    def from_polar(cls, b1: float, b2: float, theta: float) -> "LatticeBasis":
        if b1 <= 0 or b2 <= 0:
            raise ValidationError(f"norms must be positive, got b1={b1}, b2={b2}")
        if not 0 < theta < math.pi:
            raise ValidationError(f"theta must lie in (0, pi), got {theta}")
        basis = cls(matrix=None, polar=(float(b1), float(b2), float(theta)))
        _require_independent(_gram_array(basis))
        return basis

    @property
    def n(self) -> int:
        """Number of basis vectors."""
        return 2 if self.matrix is None else self.matrix.shape[1]


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric positive-definite matrix of pairwise basis inner products."""

    matrix: np.ndarray

    def __post_init__(self):
        g = np.array(self.matrix, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValidationError(f"Gram matrix must be square, got shape {g.shape}")
        if not np.array_equal(g, g.T):
            raise ValidationError("Gram matrix must be exactly symmetric")
        if np.min(np.linalg.eigvalsh(g)) <= 0:
            raise ValidationError("Gram matrix must be positive definite")
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SvpResult:
    """Minimal squared norm over the coefficient box and its full argmin set."""

    min_norm_sq: float
    solutions: frozenset[tuple[int, ...]]
    degeneracy: int

    def __post_init__(self):
        if not self.solutions:
            raise ValidationError("solution set cannot be empty")
        if self.degeneracy != len(self.solutions):
            raise ValidationError("degeneracy must equal |solutions|")
        for x in self.solutions:
            if not any(x):
                raise ValidationError("zero vector cannot be a solution")
            if tuple(-c for c in x) not in self.solutions:
                raise ValidationError("solution set must be closed under negation")


def _gram_array(basis: LatticeBasis) -> np.ndarray:
    if basis.polar is not None:
        b1, b2, theta = basis.polar
        c = b1 * b2 * math.cos(theta)
        return np.array([[b1 * b1, c], [c, b2 * b2]])
    m = basis.matrix.T @ basis.matrix
    return (m + m.T) / 2.0  # force exact symmetry


def _require_independent(g: np.ndarray) -> None:
    # det(G) normalized by the product of squared norms; sin^2(theta) for N=2.
    scale = float(np.prod(np.diag(g)))
    if scale <= 0 or np.linalg.det(g) / scale <= DEGENERACY_TOL:
        raise DegenerateBasisError(
            "basis vectors are linearly dependent (normalized Gram determinant "
            f"<= {DEGENERACY_TOL:g})"
        )


def gram_from_basis(basis: LatticeBasis) -> GramMatrix:
    """Gram matrix G[i][j] = <b_i, b_j> of the basis vectors.

    Polar form evaluates the closed form
    ``[[b1^2, b1*b2*cos(theta)], [b1*b2*cos(theta), b2^2]]`` so the diagonal
    is exact in floating point.
    """
    g = _gram_array(basis)
    _require_independent(g)
    return GramMatrix(g)


def norm_sq(gram: GramMatrix, x) -> float:
    """Squared lattice-vector norm ``x^T G x`` of integer coefficients x."""
    xv = np.asarray(x, dtype=float)
    if xv.shape != (gram.n,):
        raise DimensionMismatchError(
            f"coefficient vector has length {xv.shape}, Gram matrix is {gram.n} x {gram.n}"
        )
    return float(xv @ gram.matrix @ xv)


def coefficient_box(n: int, k: int):
    """All integer coefficient vectors with components in [-k, k], zero included."""
    return itertools.product(range(k, -k - 1, -1), repeat=n)


def brute_force_svp(gram: GramMatrix, k: int) -> SvpResult:
    """Exhaustive minimum of ``x^T G x`` over the nonzero coefficient box.

    Enumerates all ``(2k+1)^N - 1`` nonzero vectors; all minimizers within
    ``TIE_REL_TOL`` relative tolerance of the minimum are returned, so a
    degenerate shortest vector yields the whole tied set.
    """
    if k < 1:
        raise ValidationError(f"coefficient bound k must be >= 1, got {k}")
    values = []
    for x in coefficient_box(gram.n, k):
        if any(x):
            values.append((norm_sq(gram, x), x))
    best = min(v for v, _ in values)
    cutoff = best * (1.0 + TIE_REL_TOL)
    solutions = frozenset(x for v, x in values if v <= cutoff)
    return SvpResult(min_norm_sq=best, solutions=solutions, degeneracy=len(solutions))
