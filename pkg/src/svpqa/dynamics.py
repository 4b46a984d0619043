"""Schedule integration and annealing outcomes.

The anneal interpolates ``H(s) = (1-s) H_D + s H_P`` over s = t/T and
propagates with a midpoint piecewise-constant exponential: each of the
``steps`` uniform slices applies ``exp(-i H(s_mid) dt)`` computed by
Hermitian eigendecomposition, so every slice is exactly unitary and accuracy
is controlled by the single ``steps`` parameter.  Time and energy are in
units of the coupling constant (J = 1, hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import states
from .backend import propagate
from .errors import ConvergenceError, DimensionMismatchError, IntegrationError, ValidationError
from .lattice import GramMatrix, brute_force_svp
from .register import FieldProfile, Operator, RegisterShape, driver_hamiltonian, problem_hamiltonian
from .states import StateVector, z_populations

# Norm drift beyond this aborts a run; drift above NORM_TOL already violates the
# output guarantee, but the spectral propagator keeps it near machine epsilon.
DRIFT_ERROR_TOL = 1e-6
FINAL_NORM_TOL = 1e-9

MODES = ("gs", "ex", "sc")


@dataclass(frozen=True)
class Schedule:
    """Total anneal time T (units 1/J) cut into ``steps`` uniform slices."""

    T: float
    steps: int

    def __post_init__(self):
        if not self.T > 0:
            raise ValidationError(f"anneal time must be positive, got {self.T}")
        if self.steps < 1:
            raise ValidationError(f"steps must be >= 1, got {self.steps}")

    @property
    def dt(self) -> float:
        return self.T / self.steps


@dataclass(frozen=True)
class AnnealOutcome:
    """Final state plus the success/failure bookkeeping of one run."""

    final_state: StateVector
    success_prob: float
    failure_prob: float
    populations: dict
    metadata: dict


def default_steps(T: float) -> int:
    """Baseline slice count: at least 1000 and at least 20 per unit time."""
    return max(1000, math.ceil(20.0 * T))


def _midpoints(steps: int) -> np.ndarray:
    return (np.arange(steps) + 0.5) / steps


def evolve(h_d: Operator, h_p: Operator, psi0: StateVector, sched: Schedule) -> StateVector:
    """Propagate psi0 along the full schedule; returns the final state.

    The final norm is checked, not repaired: drift is the integration-quality
    signal, and exceeding DRIFT_ERROR_TOL raises with advice to raise steps.
    """
    if h_d.dim != h_p.dim or h_d.dim != psi0.dim:
        raise DimensionMismatchError(
            f"dimension mismatch: H_D {h_d.dim}, H_P {h_p.dim}, state {psi0.dim}"
        )
    if not (h_d.hermitian and h_p.hermitian):
        raise ValidationError("evolve requires Hermitian-flagged operators")
    amps = propagate(h_d.matrix, h_p.matrix, psi0.amplitudes, sched.dt, _midpoints(sched.steps))
    drift = abs(np.linalg.norm(amps) - 1.0)
    if drift > DRIFT_ERROR_TOL:
        raise IntegrationError(
            f"norm drift {drift:.3e} exceeds {DRIFT_ERROR_TOL:g}; "
            f"rerun with more than {sched.steps} steps"
        )
    return StateVector(amps, psi0.shape, norm_tol=FINAL_NORM_TOL)


def evolve_trajectory(
    h_d: Operator, h_p: Operator, psi0: StateVector, sched: Schedule, n_snapshots: int
):
    """Like evolve, returning (s, state) snapshots on slice boundaries.

    Segments tile the slice grid exactly, so the trajectory matches a single
    evolve call slice for slice.
    """
    if n_snapshots < 1 or sched.steps % n_snapshots != 0:
        raise ValidationError("n_snapshots must divide steps")
    seg = sched.steps // n_snapshots
    mids = _midpoints(sched.steps)
    amps = np.array(psi0.amplitudes)
    out = []
    for i in range(n_snapshots):
        amps = propagate(h_d.matrix, h_p.matrix, amps, sched.dt, mids[i * seg : (i + 1) * seg])
        s_here = (i + 1) * seg / sched.steps
        out.append((s_here, StateVector(amps, psi0.shape, norm_tol=FINAL_NORM_TOL)))
    return out


def initial_state(mode: str, shape: RegisterShape, profile: FieldProfile) -> StateVector:
    """Initial state by search mode: driver ground (gs), driver first excited
    (ex), or the separable spin-coherent stand-in (sc)."""
    if mode == "gs":
        return states.driver_ground(profile, shape)
    if mode == "ex":
        return states.driver_first_excited(profile, shape)
    if mode == "sc":
        profile.require_excited_mode()
        return states.spin_coherent(shape, profile)
    raise ValidationError(f"unknown mode {mode!r}, expected one of {MODES}")


def anneal(
    mode: str,
    gram: GramMatrix,
    shape: RegisterShape,
    profile: FieldProfile,
    sched: Schedule,
) -> AnnealOutcome:
    """Run one anneal and score it against the brute-force solution set.

    Success probability is the total final population on every tied shortest
    vector; any member of the argmin set counts as a correct answer.
    """
    h_d = driver_hamiltonian(profile, shape)
    h_p = problem_hamiltonian(gram, shape)
    psi0 = initial_state(mode, shape, profile)
    final = evolve(h_d, h_p, psi0, sched)
    pops = z_populations(final)
    svp = brute_force_svp(gram, shape.k)
    success = float(sum(pops[x] for x in svp.solutions))
    if not -1e-10 <= success <= 1.0 + 1e-10:
        raise ValidationError(f"success probability {success!r} outside [0, 1]")
    success = min(max(success, 0.0), 1.0)
    return AnnealOutcome(
        final_state=final,
        success_prob=success,
        failure_prob=1.0 - success,
        populations=pops,
        metadata={
            "mode": mode,
            "gram": tuple(map(tuple, gram.matrix.tolist())),
            "k": shape.k,
            "profile": profile.bx,
            "T": sched.T,
            "steps": sched.steps,
        },
    )


def converge_steps(
    mode: str,
    gram: GramMatrix,
    shape: RegisterShape,
    profile: FieldProfile,
    T: float,
    rel_tol: float = 1e-8,
    max_doublings: int = 8,
):
    """Double the slice count until the failure probability stabilizes.

    Starts from ``default_steps(T)`` and stops once successive refinements
    move the failure probability by less than ``rel_tol``; returns the
    converged outcome and the steps it used.
    """
    if rel_tol <= 0:
        raise ValidationError(f"rel_tol must be positive, got {rel_tol}")
    steps = default_steps(T)
    prev = anneal(mode, gram, shape, profile, Schedule(T, steps))
    for _ in range(max_doublings):
        steps *= 2
        cur = anneal(mode, gram, shape, profile, Schedule(T, steps))
        if abs(cur.failure_prob - prev.failure_prob) < rel_tol:
            return cur, steps
        prev = cur
    raise ConvergenceError(
        f"failure probability did not stabilize to {rel_tol:g} within "
        f"{max_doublings} doublings (last steps={steps})"
    )
