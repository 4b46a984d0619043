import math

import numpy as np
import pytest
import scipy.linalg

from svpqa.dynamics import (
    AnnealOutcome,
    Schedule,
    anneal,
    converge_steps,
    default_steps,
    evolve,
    evolve_trajectory,
    initial_state,
)
from svpqa.errors import ValidationError
from svpqa.lattice import GramMatrix, LatticeBasis, brute_force_svp, gram_from_basis
from svpqa.register import FieldProfile, Operator, RegisterShape, driver_hamiltonian, problem_hamiltonian
from svpqa.states import StateVector, driver_ground, z_populations

from conftest import rk4_reference


def _instance(theta=math.pi / 6, b1=1.0, b2=1.0, k=2, bx1=1.0, ratio=0.5):
    g = gram_from_basis(LatticeBasis.from_polar(b1, b2, theta))
    shape = RegisterShape(2, k)
    profile = FieldProfile.with_ratio(bx1, ratio, 2)
    return g, shape, profile


class TestSchedule:
    def test_validation(self):
        with pytest.raises(ValidationError):
            Schedule(0.0, 10)
        with pytest.raises(ValidationError):
            Schedule(1.0, 0)

    def test_dt(self):
        assert Schedule(10.0, 400).dt == pytest.approx(0.025)

    def test_default_steps(self):
        assert default_steps(1.0) == 1000
        assert default_steps(100.0) == 2000
        assert default_steps(200.0) == 4000


class TestEvolve:
    def test_constant_hamiltonian_any_steps(self, rng):
        # H(s) = H for all s: result is exp(-iHT) psi0 regardless of slicing
        shape = RegisterShape(1, 2)
        h = driver_hamiltonian(FieldProfile.uniform(0.8, 1), shape)
        amps = rng.normal(size=5) + 1j * rng.normal(size=5)
        psi0 = StateVector(amps / np.linalg.norm(amps), shape)
        expected = scipy.linalg.expm(-1j * h.matrix * 3.0) @ psi0.amplitudes
        for steps in (1, 7):
            final = evolve(h, h, psi0, Schedule(3.0, steps))
            assert np.max(np.abs(final.amplitudes - expected)) < 1e-12

    def test_zero_time_limit(self):
        g, shape, profile = _instance()
        h_d = driver_hamiltonian(profile, shape)
        h_p = problem_hamiltonian(g, shape)
        psi0 = driver_ground(profile, shape)
        final = evolve(h_d, h_p, psi0, Schedule(1e-13, 10))
        assert np.max(np.abs(final.amplitudes - psi0.amplitudes)) < 1e-12

    def test_stationary_state(self):
        # both operators diagonal: a z-basis state only picks up phase
        shape = RegisterShape(2, 1)
        h_a = problem_hamiltonian(GramMatrix(np.eye(2)), shape)
        h_b = problem_hamiltonian(GramMatrix(np.diag([2.0, 3.0])), shape)
        amps = np.zeros(9)
        amps[shape.index_of((1, -1))] = 1.0
        psi0 = StateVector(amps, shape)
        final = evolve(h_a, h_b, psi0, Schedule(5.0, 50))
        pops = z_populations(final)
        assert pops[(1, -1)] == pytest.approx(1.0, abs=1e-12)

    def test_unitarity(self):
        g, shape, profile = _instance()
        h_d = driver_hamiltonian(profile, shape)
        h_p = problem_hamiltonian(g, shape)
        psi0 = driver_ground(profile, shape)
        final = evolve(h_d, h_p, psi0, Schedule(50.0, 1000))
        assert abs(np.linalg.norm(final.amplitudes) - 1.0) < 1e-9

    def test_matches_rk4_reference_dim3(self):
        # independent high-order integrator, N=1 spin-1 instance
        shape = RegisterShape(1, 1)
        h_d = driver_hamiltonian(FieldProfile.uniform(1.0, 1), shape)
        h_p = Operator(np.diag([1.0, 0.0, 1.0]), hermitian=True)
        psi0 = driver_ground(FieldProfile.uniform(1.0, 1), shape)
        ref = rk4_reference(h_d.matrix, h_p.matrix, psi0.amplitudes, T=10.0, n0=2000)
        final = evolve(h_d, h_p, psi0, Schedule(10.0, 20000))
        assert np.max(np.abs(final.amplitudes - ref)) < 1e-6

    def test_requires_hermitian_flags(self):
        shape = RegisterShape(1, 1)
        h = Operator(np.eye(3))
        psi0 = driver_ground(FieldProfile.uniform(1.0, 1), shape)
        with pytest.raises(ValidationError):
            evolve(h, h, psi0, Schedule(1.0, 10))

    def test_trajectory_matches_single_run(self):
        g, shape, profile = _instance()
        h_d = driver_hamiltonian(profile, shape)
        h_p = problem_hamiltonian(g, shape)
        psi0 = driver_ground(profile, shape)
        sched = Schedule(20.0, 1000)
        final = evolve(h_d, h_p, psi0, sched)
        traj = evolve_trajectory(h_d, h_p, psi0, sched, n_snapshots=4)
        assert traj[-1][0] == 1.0
        assert np.max(np.abs(traj[-1][1].amplitudes - final.amplitudes)) < 1e-12


class TestAnneal:
    def test_gs_zero_time_closed_form(self):
        # T -> 0: success is the initial population on the solution set
        g, shape, profile = _instance(bx1=1.0, ratio=1.0)
        psi0 = driver_ground(profile, shape)
        pops = z_populations(psi0)
        svp = brute_force_svp(g, 2)
        expected = sum(pops[x] for x in svp.solutions)
        out = anneal("gs", g, shape, profile, Schedule(1e-10, 5))
        assert out.success_prob == pytest.approx(expected, abs=1e-10)

    def test_success_plus_failure(self):
        g, shape, profile = _instance()
        out = anneal("ex", g, shape, profile, Schedule(10.0, 200))
        assert out.success_prob + out.failure_prob == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= out.success_prob <= 1.0

    def test_mode_preconditions(self):
        g, shape, _ = _instance()
        uniform = FieldProfile.uniform(1.0, 2)
        with pytest.raises(ValidationError):
            anneal("ex", g, shape, uniform, Schedule(1.0, 10))
        with pytest.raises(ValidationError):
            anneal("sc", g, shape, uniform, Schedule(1.0, 10))
        with pytest.raises(ValidationError):
            anneal("bogus", g, shape, FieldProfile((0.5, 1.0)), Schedule(1.0, 10))

    def test_sc_needs_k2(self):
        g = GramMatrix(np.eye(2))
        shape = RegisterShape(2, 1)
        with pytest.raises(ValidationError):
            initial_state("sc", shape, FieldProfile((0.5, 1.0)))

    def test_metadata(self):
        g, shape, profile = _instance()
        out = anneal("ex", g, shape, profile, Schedule(5.0, 100))
        assert out.metadata["mode"] == "ex"
        assert out.metadata["T"] == 5.0
        assert out.metadata["steps"] == 100
        assert isinstance(out, AnnealOutcome)

    def test_excited_search_beats_ground_search(self):
        # theta=pi/6 instance at T=100: ordering of the three protocols
        g, shape, profile = _instance()
        sched = Schedule(100.0, 2000)
        f_ex = anneal("ex", g, shape, profile, sched).failure_prob
        f_sc = anneal("sc", g, shape, profile, sched).failure_prob
        f_gs = anneal("gs", g, shape, FieldProfile.uniform(1.0, 2), sched).failure_prob
        assert f_ex < f_sc < f_gs


class TestConvergeSteps:
    def test_slice_exact_case_converges_at_first_doubling(self):
        # vanishing T: every slicing gives the identity map, so the first
        # refinement already moves failure_prob by ~0
        g = GramMatrix(np.eye(2))
        shape = RegisterShape(2, 1)
        profile = FieldProfile((0.5, 1.0))
        outcome, steps = converge_steps("ex", g, shape, profile, T=1e-6, rel_tol=1e-8)
        assert steps == 2 * default_steps(1e-6)
        assert abs(np.linalg.norm(outcome.final_state.amplitudes) - 1.0) < 1e-9

    def test_monotone_stopping_rule(self):
        g, shape, profile = _instance(theta=math.pi / 9)
        _, steps_loose = converge_steps("ex", g, shape, profile, T=2.0, rel_tol=1e-2)
        _, steps_tight = converge_steps("ex", g, shape, profile, T=2.0, rel_tol=1e-8)
        assert steps_loose <= steps_tight

    def test_rel_tol_validation(self):
        g, shape, profile = _instance()
        with pytest.raises(ValidationError):
            converge_steps("ex", g, shape, profile, T=1.0, rel_tol=0.0)
