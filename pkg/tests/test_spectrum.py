import math

import numpy as np
import pytest

from svpqa.errors import ValidationError
from svpqa.lattice import GramMatrix, LatticeBasis, gram_from_basis, norm_sq
from svpqa.register import (
    FieldProfile,
    Operator,
    RegisterShape,
    driver_hamiltonian,
    problem_hamiltonian,
    spin_matrices,
)
from svpqa.spectrum import eigh, min_gap, trace_spectrum

from conftest import random_spd_gram


def _fig3_pair(theta):
    shape = RegisterShape(2, 2)
    h_d = driver_hamiltonian(FieldProfile((1.0, 2.0)), shape)
    g = gram_from_basis(LatticeBasis.from_polar(1, 2, theta))
    h_p = problem_hamiltonian(g, shape)
    return h_d, h_p


class TestEigh:
    def test_diagonal(self):
        op = Operator(np.diag([3.0, -1.0, 2.0]), hermitian=True)
        w, _ = eigh(op)
        assert np.array_equal(w, [-1.0, 2.0, 3.0])

    def test_collective_x_spectrum(self):
        # 2*Sx for spin 2 at unit field: equally spaced +-4..4
        shape = RegisterShape(1, 2)
        h = driver_hamiltonian(FieldProfile.uniform(1.0, 1), shape)
        w, _ = eigh(h)
        assert np.allclose(w, [-4, -2, 0, 2, 4], atol=1e-12)

    def test_unit_gram_multiplicities(self):
        shape = RegisterShape(2, 2)
        h = problem_hamiltonian(GramMatrix(np.eye(2)), shape)
        w, _ = eigh(h)
        assert np.sum(np.abs(w) < 1e-12) == 1
        assert np.sum(np.abs(w - 1.0) < 1e-12) == 4

    def test_rejects_unflagged(self):
        with pytest.raises(ValidationError):
            eigh(Operator(np.eye(3)))

    def test_reconstruction(self, rng):
        g = random_spd_gram(rng)
        shape = RegisterShape(2, 2)
        h = driver_hamiltonian(FieldProfile((0.7, 1.4)), shape)
        w, v = eigh(h)
        assert np.max(np.abs(h.matrix - (v * w) @ v.conj().T)) < 1e-9 * np.max(np.abs(h.matrix))
        assert np.max(np.abs(v.conj().T @ v - np.eye(h.dim))) < 1e-10


class TestTraceSpectrum:
    def test_endpoints_reproduce_operators(self):
        h_d, h_p = _fig3_pair(math.pi / 6)
        tr = trace_spectrum(h_d, h_p, n_points=11, L=6)
        w_d, _ = eigh(h_d)
        w_p, _ = eigh(h_p)
        assert np.allclose(tr.levels[0], w_d[:6], atol=1e-12)
        assert np.allclose(tr.levels[-1], w_p[:6], atol=1e-12)

    def test_fig3_instance_level_structure(self):
        # lowest nonzero costs at ratio 1:2, angle pi/6: {1, 8-4sqrt3, 5-2sqrt3},
        # each from a +-x pair
        h_d, h_p = _fig3_pair(math.pi / 6)
        tr = trace_spectrum(h_d, h_p, n_points=3, L=7)
        vals = tr.levels[-1]
        expected = [0.0, 1.0, 1.0, 8 - 4 * math.sqrt(3), 8 - 4 * math.sqrt(3),
                    5 - 2 * math.sqrt(3), 5 - 2 * math.sqrt(3)]
        assert np.allclose(vals, expected, atol=1e-10)

    def test_swap_symmetry_unit_gram(self):
        shape = RegisterShape(2, 2)
        h_d = driver_hamiltonian(FieldProfile.uniform(1.0, 2), shape)
        h_p = problem_hamiltonian(GramMatrix(np.eye(2)), shape)
        tr = trace_spectrum(h_d, h_p, n_points=21, L=8)
        # coordinate swap is a symmetry of both endpoints: levels repeat in
        # degenerate pairs wherever (m1, m2) != (m2, m1)
        g = gram_from_basis(LatticeBasis.from_polar(1, 1, math.pi / 2))
        assert norm_sq(g, (1, 0)) == norm_sq(g, (0, 1))
        assert np.allclose(tr.levels[-1][1:5], [1, 1, 1, 1], atol=1e-12)

    def test_weyl_continuity(self):
        # between grid points each level moves at most ||H_P - H_D||_2 * ds
        h_d, h_p = _fig3_pair(math.pi / 6)
        tr = trace_spectrum(h_d, h_p, n_points=101, L=8)
        bound = np.linalg.norm((h_p.matrix - h_d.matrix), 2)
        ds = np.diff(tr.s_grid)[:, None]
        moves = np.abs(np.diff(tr.levels, axis=0))
        assert np.all(moves <= bound * ds + 1e-9)

    def test_grid_validation(self):
        h_d, h_p = _fig3_pair(math.pi / 6)
        with pytest.raises(ValidationError):
            trace_spectrum(h_d, h_p, n_points=1)
        with pytest.raises(ValidationError):
            trace_spectrum(h_d, h_p, L=26)


class TestMinGap:
    def test_constant_hamiltonian(self):
        shape = RegisterShape(1, 1)
        h = driver_hamiltonian(FieldProfile.uniform(1.0, 1), shape)
        tr = trace_spectrum(h, h, n_points=9, L=3)
        gap, _ = min_gap(tr, 0, 1)
        assert gap == pytest.approx(2.0, abs=1e-12)
        assert np.ptp(tr.levels[:, 1] - tr.levels[:, 0]) < 1e-12

    def test_equal_indices_forbidden(self):
        h_d, h_p = _fig3_pair(math.pi / 6)
        tr = trace_spectrum(h_d, h_p, n_points=5, L=4)
        with pytest.raises(ValidationError):
            min_gap(tr, 1, 1)
        with pytest.raises(ValidationError):
            min_gap(tr, 2, 1)
        with pytest.raises(ValidationError):
            min_gap(tr, 0, 4)

    def test_near_degenerate_instance_has_smaller_gaps(self):
        # the angle-pi/6 spike instance closes both the bottom gap and the
        # band splitting above the solution pair relative to a benign angle
        tr_spike = trace_spectrum(*_fig3_pair(math.pi / 6), n_points=201, L=8)
        tr_ok = trace_spectrum(*_fig3_pair(math.pi / 2.2), n_points=201, L=8)
        assert min_gap(tr_spike, 0, 1)[0] < min_gap(tr_ok, 0, 1)[0]
        assert min_gap(tr_spike, 1, 3)[0] < min_gap(tr_ok, 1, 3)[0]
