"""Quantum-annealing search for boxed shortest-vector problems.

The register maps each lattice coordinate to one spin-k site; the problem
Hamiltonian's diagonal is the lattice quadratic form, its first excited level
is the shortest nonzero vector, and three anneal protocols (ground-state,
excited-state, spin-coherent) chase it.
"""

__version__ = "0.1.0"

from .backend import HAVE_COMPILED, backend_name
from .dynamics import AnnealOutcome, Schedule, anneal, converge_steps, evolve
from .lattice import GramMatrix, LatticeBasis, SvpResult, brute_force_svp, gram_from_basis, norm_sq
from .register import (
    FieldProfile,
    Operator,
    RegisterShape,
    driver_hamiltonian,
    embed,
    problem_hamiltonian,
    spin_matrices,
    total_hamiltonian,
)
from .spectrum import SpectrumTrace, min_gap, trace_spectrum
from .states import StateVector, driver_first_excited, driver_ground, overlap, spin_coherent, z_populations
from .symmetry import ParityOperator, blocked, commutator_norm, parity_operator, sector_of

__all__ = [
    "AnnealOutcome",
    "FieldProfile",
    "GramMatrix",
    "HAVE_COMPILED",
    "LatticeBasis",
    "Operator",
    "ParityOperator",
    "RegisterShape",
    "Schedule",
    "SpectrumTrace",
    "StateVector",
    "SvpResult",
    "anneal",
    "backend_name",
    "blocked",
    "brute_force_svp",
    "commutator_norm",
    "converge_steps",
    "driver_first_excited",
    "driver_ground",
    "driver_hamiltonian",
    "embed",
    "evolve",
    "gram_from_basis",
    "min_gap",
    "norm_sq",
    "overlap",
    "parity_operator",
    "problem_hamiltonian",
    "sector_of",
    "spin_coherent",
    "spin_matrices",
    "total_hamiltonian",
    "trace_spectrum",
    "z_populations",
]
