#!/usr/bin/env python3
"""Benchmark the compiled slice propagator against the numpy fallback.

Workload: the standard desk-scale anneal (N=2, k=2, dim 25) plus a larger
register (N=3, k=2, dim 125), timed per slice over a fixed schedule.
"""

import math
import time

import numpy as np

from svpqa import _kernel_py, backend
from svpqa.lattice import LatticeBasis, gram_from_basis
from svpqa.register import FieldProfile, RegisterShape, driver_hamiltonian, problem_hamiltonian
from svpqa.states import driver_first_excited


def workload(n_sites, k):
    shape = RegisterShape(n_sites, k)
    if n_sites == 2:
        gram = gram_from_basis(LatticeBasis.from_polar(1, 1, math.pi / 6))
    else:
        gram = gram_from_basis(
            LatticeBasis.from_matrix(np.eye(n_sites) + 0.2 * np.triu(np.ones((n_sites, n_sites)), 1))
        )
    profile = FieldProfile((0.5,) + (1.0,) * (n_sites - 1))
    h_d = driver_hamiltonian(profile, shape).matrix.real
    h_p = problem_hamiltonian(gram, shape).matrix.real
    psi0 = driver_first_excited(profile, shape).amplitudes
    return np.ascontiguousarray(h_d), np.ascontiguousarray(h_p), psi0


def time_kernel(fn, h_d, h_p, psi0, steps, dt=0.05, repeats=3):
    mids = (np.arange(steps) + 0.5) / steps
    fn(h_d, h_p, psi0, dt, mids)  # warm up
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(h_d, h_p, psi0, dt, mids)
        best = min(best, time.perf_counter() - t0)
    return best / steps


def main():
    print(f"active backend: {backend.backend_name()}")
    cases = [("N=2 k=2 (dim 25)", 2, 2, 2000), ("N=3 k=2 (dim 125)", 3, 2, 200)]
    for label, n, k, steps in cases:
        h_d, h_p, psi0 = workload(n, k)
        t_pure = time_kernel(_kernel_py.propagate, h_d, h_p, psi0, steps)
        line = f"{label}: pure {t_pure * 1e6:8.1f} us/slice"
        if backend.HAVE_COMPILED:
            from svpqa import _kernel

            t_comp = time_kernel(_kernel.propagate, h_d, h_p, psi0, steps)
            line += f" | compiled {t_comp * 1e6:8.1f} us/slice | speedup {t_pure / t_comp:.2f}x"
        else:
            line += " | compiled kernel not built"
        print(line)


if __name__ == "__main__":
    main()
