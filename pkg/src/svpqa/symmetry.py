"""Per-site parity algebra and the symmetry-obstruction predicate.

The parity of site i is the pi rotation about its x axis: eigenvalue
``(-1)^m`` on ``|Sx_i = m>``.  It always commutes with the driver; it
commutes with the problem Hamiltonian exactly when row i of the Gram matrix
has no off-diagonal weight (orthogonal basis vector).  When a parity is
conserved for the whole schedule, the anneal cannot move weight between its
sectors: if the solution subspace has no component inside the sectors the
initial state populates, the run is blocked and fails at every anneal time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .lattice import GramMatrix, brute_force_svp
from .register import FieldProfile, Operator, RegisterShape, embed, problem_hamiltonian, spin_matrices
from .states import StateVector

CONSERVATION_TOL = 1e-10
SECTOR_DEFINITE_TOL = 1e-10
BLOCKED_PROJECTION_TOL = 1e-10


@dataclass(frozen=True)
class ParityOperator:
    """Parity of one site, embedded into the register."""

    site: int
    operator: Operator

    def __post_init__(self):
        p = self.operator.matrix
        if np.max(np.abs(p @ p - np.eye(p.shape[0]))) >= 1e-12:
            raise ValidationError("parity must square to the identity")


@dataclass(frozen=True)
class SectorWeights:
    """Weights of a state in the +1 / -1 sectors of one parity."""

    plus: float
    minus: float

    @property
    def label(self):
        if self.minus < SECTOR_DEFINITE_TOL:
            return +1
        if self.plus < SECTOR_DEFINITE_TOL:
            return -1
        return "mixed"


@dataclass(frozen=True)
class BlockReport:
    """Outcome of the reachability analysis for one (instance, initial state)."""

    blocked: bool
    conserved_sites: tuple[int, ...]
    initial_sectors: dict
    populated_patterns: tuple
    solution_projections: dict
    projection_norm: float

    def lines(self) -> list[str]:
        out = [f"conserved parities: sites {list(self.conserved_sites) or 'none'}"]
        for site, sw in sorted(self.initial_sectors.items()):
            out.append(
                f"  initial state @ site {site}: sector {sw.label} "
                f"(w+ = {sw.plus:.6f}, w- = {sw.minus:.6f})"
            )
        if self.conserved_sites:
            pats = [
                "".join("+" if s > 0 else "-" for s in pat) for pat in self.populated_patterns
            ]
            out.append(f"  populated sector patterns: {pats}")
        for x, p in sorted(self.solution_projections.items()):
            out.append(f"  solution {x}: reachable-component norm {p:.3e}")
        out.append(f"solution-subspace projection norm: {self.projection_norm:.3e}")
        out.append(f"blocked: {'yes' if self.blocked else 'no'}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines())


def parity_operator(site: int, shape: RegisterShape) -> ParityOperator:
    """Build exp(-i pi Sx) for one site: (-1)^m in the site's Sx eigenbasis."""
    sx, _ = spin_matrices(shape.k)
    vals, vecs = np.linalg.eigh(sx)
    signs = np.array([(-1.0) ** int(round(m)) for m in vals])
    p_site = (vecs * signs) @ vecs.T
    return ParityOperator(site=site, operator=embed(p_site, site, shape))


def commutator_norm(a: Operator, b: Operator) -> float:
    """Max-entry magnitude of [A, B]."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"operator dimensions differ: {a.dim} vs {b.dim}")
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    return float(np.max(np.abs(comm)))


def sector_of(psi: StateVector, parity: ParityOperator) -> SectorWeights:
    """Weights ``w_+- = ||(I +- P) psi / 2||^2``; they always sum to 1."""
    p = parity.operator.matrix
    plus = 0.5 * (psi.amplitudes + p @ psi.amplitudes)
    minus = 0.5 * (psi.amplitudes - p @ psi.amplitudes)
    return SectorWeights(
        plus=float(np.linalg.norm(plus) ** 2), minus=float(np.linalg.norm(minus) ** 2)
    )


def conserved_parities(gram: GramMatrix, shape: RegisterShape) -> list[ParityOperator]:
    """Site parities commuting with H(s) for every s.

    The driver commutes with each site parity by construction, so the test
    reduces to the problem Hamiltonian.
    """
    h_p = problem_hamiltonian(gram, shape)
    out = []
    for site in range(1, shape.n_sites + 1):
        par = parity_operator(site, shape)
        if commutator_norm(par.operator, h_p) < CONSERVATION_TOL:
            out.append(par)
    return out


def blocked(
    gram: GramMatrix,
    shape: RegisterShape,
    profile: FieldProfile,
    psi0: StateVector,
) -> BlockReport:
    """Decide whether conserved parities wall the initial state off from every
    shortest-vector basis state.

    Projects each solution state onto the joint parity sectors the initial
    state populates; a vanishing total projection means no anneal time can
    produce a correct answer.
    """
    conserved = conserved_parities(gram, shape)
    sites = tuple(p.site for p in conserved)
    initial_sectors = {p.site: sector_of(psi0, p) for p in conserved}

    amps = psi0.amplitudes
    dim = shape.dim
    # joint projectors over sign patterns of the conserved parities
    populated = []
    projectors = {}
    for pattern in itertools.product((+1, -1), repeat=len(conserved)):
        proj = np.eye(dim, dtype=complex)
        for sign, par in zip(pattern, conserved):
            proj = proj @ (np.eye(dim) + sign * par.operator.matrix) / 2.0
        projectors[pattern] = proj
        if np.linalg.norm(proj @ amps) ** 2 > SECTOR_DEFINITE_TOL:
            populated.append(pattern)

    reachable = sum(projectors[pat] for pat in populated)
    svp = brute_force_svp(gram, shape.k)
    sol_proj = {}
    total_sq = 0.0
    for x in sorted(svp.solutions):
        e = np.zeros(dim, dtype=complex)
        e[shape.index_of(x)] = 1.0
        nrm = float(np.linalg.norm(reachable @ e))
        sol_proj[x] = nrm
        total_sq += nrm * nrm
    projection_norm = float(np.sqrt(total_sq))

    return BlockReport(
        blocked=projection_norm < BLOCKED_PROJECTION_TOL,
        conserved_sites=sites,
        initial_sectors=initial_sectors,
        populated_patterns=tuple(populated),
        solution_projections=sol_proj,
        projection_norm=projection_norm,
    )
