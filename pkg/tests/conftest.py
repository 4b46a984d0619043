import numpy as np
import pytest

from svpqa.lattice import GramMatrix


def random_spd_gram(rng, n=2, scale=2.0):
    """Random symmetric positive-definite Gram matrix (well-conditioned)."""
    a = rng.normal(size=(n, n)) * scale
    g = a.T @ a + 0.3 * np.eye(n)
    g = (g + g.T) / 2.0
    return GramMatrix(g)


def rk4_reference(h_d, h_p, psi0, T, rtol=1e-10, n0=4000, max_halvings=8):
    """Independent fixed-step RK4 integration of i dpsi/dt = H(t/T) psi.

    Step-halves until successive solutions agree to ``rtol`` per amplitude.
    Deliberately shares nothing with the package's spectral propagator.
    """

    def run(n):
        dt = T / n
        psi = np.array(psi0, dtype=complex)
        for j in range(n):
            t = j * dt

            def rhs(tt, y):
                s = tt / T
                return -1j * (((1.0 - s) * h_d + s * h_p) @ y)

            k1 = rhs(t, psi)
            k2 = rhs(t + dt / 2, psi + dt / 2 * k1)
            k3 = rhs(t + dt / 2, psi + dt / 2 * k2)
            k4 = rhs(t + dt, psi + dt * k3)
            psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return psi

    n = n0
    prev = run(n)
    for _ in range(max_halvings):
        n *= 2
        cur = run(n)
        if np.max(np.abs(cur - prev)) < rtol:
            return cur
        prev = cur
    raise AssertionError(f"RK4 reference did not converge to {rtol} by n={n}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
