"""Sweep protocols, transverse-field optimization, and CSV persistence.

Protocol conventions baked into the sweeps:

* ground-state search (gs): uniform fields (ratio 1), ``bx1`` optimized; in
  the angle sweep the anneal time is optimized over a grid as well.
* excited-state search (ex) and spin-coherent search (sc): field ratio
  ``bx1/bx2 = 1/2`` by default, ``bx1`` optimized; the angle sweep fixes
  T = 100.

Records are sorted by (mode, theta, T) before persistence, so identical
configs give byte-identical CSVs regardless of worker scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dynamics, spectrum, symmetry
from .errors import ConfigError, ValidationError
from .lattice import LatticeBasis, gram_from_basis
from .register import FieldProfile, RegisterShape, driver_hamiltonian, problem_hamiltonian
from .spectrum import SpectrumTrace

SWEEP_CSV_HEADER = "mode,theta,b1,b2,k,T,bx1,bx2,steps,failure_prob,success_prob,blocked"

DEFAULT_BX1_RANGE = (0.2, 4.0)
COARSE_POINTS = 77
GOLDEN_XTOL = 1e-3

DEFAULT_T_GRID = (5.0, 10.0, 20.0, 50.0, 100.0, 200.0)
DEFAULT_GS_T_GRID = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0)
DEFAULT_THETA_GRID = tuple(np.linspace(math.pi / 18.0, 17.0 * math.pi / 18.0, 25))
DEFAULT_THETA_SWEEP_T = 100.0

_MODE_ORDER = {"gs": 0, "ex": 1, "sc": 2}


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved inputs of one experiment invocation."""

    modes: tuple[str, ...]
    b1: float
    b2: float
    theta: float
    k: int
    bx_ratio: float = 0.5  # bx1 / bx_j for the ex and sc protocols
    bx1_range: tuple[float, float] = DEFAULT_BX1_RANGE
    T: float = DEFAULT_THETA_SWEEP_T
    t_grid: tuple[float, ...] = DEFAULT_T_GRID
    gs_t_grid: tuple[float, ...] = DEFAULT_GS_T_GRID
    theta_grid: tuple[float, ...] = DEFAULT_THETA_GRID
    steps: int | None = None  # None = default policy max(1000, 20 T)
    converge_rel_tol: float | None = None
    out_dir: str = "out"

    def __post_init__(self):
        if not self.modes or any(m not in dynamics.MODES for m in self.modes):
            raise ConfigError(f"modes must be a nonempty subset of {dynamics.MODES}")
        if any(m in ("ex", "sc") for m in self.modes) and not self.bx_ratio < 1.0:
            raise ConfigError(
                f"excited/spin-coherent search needs field ratio < 1, got {self.bx_ratio}"
            )
        for name, grid in (("t_grid", self.t_grid), ("theta_grid", self.theta_grid)):
            if len(grid) == 0 or any(b <= a for a, b in zip(grid, grid[1:])):
                raise ConfigError(f"{name} must be nonempty and strictly increasing")
        lo, hi = self.bx1_range
        if not 0 < lo < hi:
            raise ConfigError(f"bx1 range must satisfy 0 < lo < hi, got {self.bx1_range}")

    def basis(self) -> LatticeBasis:
        return LatticeBasis.from_polar(self.b1, self.b2, self.theta)


@dataclass(frozen=True)
class SweepRecord:
    """One CSV row of a sweep."""

    mode: str
    theta: float
    b1: float
    b2: float
    k: int
    T: float
    bx1: float
    bx2: float
    steps: int
    failure_prob: float
    success_prob: float
    blocked: bool

    def __post_init__(self):
        if abs(self.failure_prob + self.success_prob - 1.0) > 1e-10:
            raise ValidationError("failure_prob + success_prob must equal 1")


def mode_ratio(mode: str, bx_ratio: float) -> float:
    return 1.0 if mode == "gs" else bx_ratio


def run_point(mode, basis, k, bx1, ratio, T, steps=None, converge_rel_tol=None):
    """One anneal at fixed parameters; returns (outcome, steps_used)."""
    gram = gram_from_basis(basis)
    shape = RegisterShape(n_sites=gram.n, k=k)
    profile = FieldProfile.with_ratio(bx1, ratio, gram.n)
    if converge_rel_tol is not None:
        return dynamics.converge_steps(mode, gram, shape, profile, T, rel_tol=converge_rel_tol)
    n_steps = steps if steps is not None else dynamics.default_steps(T)
    outcome = dynamics.anneal(mode, gram, shape, profile, dynamics.Schedule(T, n_steps))
    return outcome, n_steps


def _golden_min(f, a, b, xtol, best):
    """Deterministic golden-section descent on [a, b]; tracks the best eval."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    best = min(best, (f1, x1), (f2, x2))
    while b - a > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
            best = min(best, (f1, x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
            best = min(best, (f2, x2))
    return best


def optimize_bx1(mode, basis, k, ratio, T, bx1_range=DEFAULT_BX1_RANGE,
                 steps=None, coarse_points=COARSE_POINTS, xtol=GOLDEN_XTOL):
    """Minimize the failure probability over the weak-field strength bx1.

    Deterministic: a coarse scan of ``coarse_points`` evenly spaced values
    over the range, then golden-section refinement of the bracketing interval
    down to ``xtol``.  Returns (bx1*, failure*).
    """
    lo, hi = bx1_range
    if not 0 < lo < hi:
        raise ValidationError(f"invalid bx1 range {bx1_range}")

    cache = {}

    def failure(bx1):
        if bx1 not in cache:
            outcome, _ = run_point(mode, basis, k, bx1, ratio, T, steps=steps)
            cache[bx1] = outcome.failure_prob
        return cache[bx1]

    grid = np.linspace(lo, hi, coarse_points)
    vals = [failure(float(x)) for x in grid]
    i = int(np.argmin(vals))
    best = (vals[i], float(grid[i]))
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, len(grid) - 1)])
    best = _golden_min(failure, a, b, xtol, best)
    return best[1], best[0]


def _sweep_workers() -> int:
    env = os.environ.get("SVPQA_THREADS", "")
    if env:
        cap = int(env)
        if cap < 1:
            raise ConfigError(f"SVPQA_THREADS must be a positive integer, got {env!r}")
        return cap
    return min(4, os.cpu_count() or 1)


def _run_jobs(jobs):
    workers = min(_sweep_workers(), max(len(jobs), 1))
    if workers == 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _is_blocked(mode, basis, k, bx1, ratio) -> bool:
    gram = gram_from_basis(basis)
    shape = RegisterShape(n_sites=gram.n, k=k)
    profile = FieldProfile.with_ratio(bx1, ratio, gram.n)
    psi0 = dynamics.initial_state(mode, shape, profile)
    return symmetry.blocked(gram, shape, profile, psi0).blocked


def _record(cfg, mode, theta, T, bx1):
    """Re-run the optimum under the configured steps policy and wrap the row."""
    ratio = mode_ratio(mode, cfg.bx_ratio)
    basis = LatticeBasis.from_polar(cfg.b1, cfg.b2, theta)
    outcome, steps_used = run_point(
        mode, basis, cfg.k, bx1, ratio, T,
        steps=cfg.steps, converge_rel_tol=cfg.converge_rel_tol,
    )
    return SweepRecord(
        mode=mode,
        theta=theta,
        b1=cfg.b1,
        b2=cfg.b2,
        k=cfg.k,
        T=T,
        bx1=bx1,
        bx2=bx1 / ratio,
        steps=steps_used,
        failure_prob=outcome.failure_prob,
        success_prob=outcome.success_prob,
        blocked=_is_blocked(mode, basis, cfg.k, bx1, ratio),
    )


def sweep_T(cfg: ExperimentConfig) -> list[SweepRecord]:
    """Failure probability against anneal time, bx1 optimized per point."""

    def job(mode, T):
        def run():
            basis = cfg.basis()
            ratio = mode_ratio(mode, cfg.bx_ratio)
            bx1, _ = optimize_bx1(
                mode, basis, cfg.k, ratio, T, cfg.bx1_range, steps=cfg.steps
            )
            return _record(cfg, mode, cfg.theta, T, bx1)

        return run

    jobs = [job(mode, T) for mode in cfg.modes for T in cfg.t_grid]
    records = _run_jobs(jobs)
    records.sort(key=lambda r: (_MODE_ORDER[r.mode], r.theta, r.T))
    return records


def sweep_theta(cfg: ExperimentConfig) -> list[SweepRecord]:
    """Failure probability against the basis angle at fixed norm ratio.

    ex/sc run at fixed T (``cfg.T``); gs additionally optimizes T over
    ``cfg.gs_t_grid``, keeping the (bx1, T) pair with the least failure.
    """

    def job(mode, theta):
        def run():
            basis = LatticeBasis.from_polar(cfg.b1, cfg.b2, theta)
            ratio = mode_ratio(mode, cfg.bx_ratio)
            if mode == "gs":
                candidates = []
                for T in cfg.gs_t_grid:
                    bx1, failure = optimize_bx1(
                        mode, basis, cfg.k, ratio, T, cfg.bx1_range, steps=cfg.steps
                    )
                    candidates.append((failure, T, bx1))
                _, T, bx1 = min(candidates)
            else:
                T = cfg.T
                bx1, _ = optimize_bx1(
                    mode, basis, cfg.k, ratio, T, cfg.bx1_range, steps=cfg.steps
                )
            return _record(cfg, mode, theta, T, bx1)

        return run

    jobs = [job(mode, theta) for mode in cfg.modes for theta in cfg.theta_grid]
    records = _run_jobs(jobs)
    records.sort(key=lambda r: (_MODE_ORDER[r.mode], r.theta, r.T))
    return records


def run_spectrum(cfg: ExperimentConfig, n_points=spectrum.DEFAULT_GRID_POINTS,
                 L=spectrum.DEFAULT_LEVELS) -> SpectrumTrace:
    """Level trace of the instance, driver fields set by the ex protocol."""
    basis = cfg.basis()
    gram = gram_from_basis(basis)
    shape = RegisterShape(n_sites=gram.n, k=cfg.k)
    ratio = mode_ratio("ex", cfg.bx_ratio)
    bx1, _ = optimize_bx1("ex", basis, cfg.k, ratio, cfg.T, cfg.bx1_range, steps=cfg.steps)
    profile = FieldProfile.with_ratio(bx1, ratio, gram.n)
    h_d = driver_hamiltonian(profile, shape)
    h_p = problem_hamiltonian(gram, shape)
    return spectrum.trace_spectrum(h_d, h_p, n_points=n_points, L=L)


def _fmt(x) -> str:
    return format(float(x), ".12g")


def sweep_csv_lines(records) -> list[str]:
    lines = [SWEEP_CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    r.mode,
                    _fmt(r.theta),
                    _fmt(r.b1),
                    _fmt(r.b2),
                    str(r.k),
                    _fmt(r.T),
                    _fmt(r.bx1),
                    _fmt(r.bx2),
                    str(r.steps),
                    _fmt(r.failure_prob),
                    _fmt(r.success_prob),
                    "true" if r.blocked else "false",
                ]
            )
        )
    return lines


def write_sweep_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(sweep_csv_lines(records)) + "\n")


def spectrum_csv_lines(trace: SpectrumTrace) -> list[str]:
    header = "s," + ",".join(f"e{i}" for i in range(trace.L))
    lines = [header]
    for s, row in zip(trace.s_grid, trace.levels):
        lines.append(",".join([_fmt(s)] + [_fmt(e) for e in row]))
    return lines


def write_spectrum_csv(trace: SpectrumTrace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(spectrum_csv_lines(trace)) + "\n")
