"""Command-line surface: solve, anneal, sweep-t, sweep-theta, spectrum, symmetry.

Configuration comes from a flat ``key = value`` file (lists comma-separated),
from flags, or both; flags win.  Every run writes a manifest next to its
outputs carrying the fully resolved configuration plus provenance, and
re-running from that manifest reproduces the CSVs byte for byte.  Angles are
accepted as radians or as fractions like ``pi/18``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
import time

from . import __version__, dynamics, experiments, symmetry
from .errors import ConfigError, ConvergenceError, IntegrationError, SvpqaError, ValidationError
from .lattice import LatticeBasis, brute_force_svp, gram_from_basis
from .register import FieldProfile, RegisterShape
from .experiments import ExperimentConfig

_ANGLE_RE = re.compile(r"^\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Parse an angle given in radians or as a pi fraction ('pi/18', '5pi/12')."""
    s = str(text).strip()
    m = _ANGLE_RE.match(s)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}; use radians or 'pi/18' form") from None


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in str(text).split(",") if x.strip())


def _parse_angles(text: str) -> tuple[float, ...]:
    return tuple(parse_angle(x) for x in str(text).split(",") if x.strip())


PROVENANCE_KEYS = ("tool_version", "timestamp", "config_hash")


def read_config_file(path: str) -> dict[str, str]:
    """Flat key = value file; '#' starts a comment, blank lines ignored."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = (
    "mode", "modes", "theta", "b1", "b2", "basis", "k", "T", "t_grid", "gs_t_grid",
    "theta_grid", "bx1", "bx_ratio", "bx1_lo", "bx1_hi", "steps", "converge_rel_tol",
    "n_points", "levels", "out",
)


def merge_config(file_values: dict[str, str], flag_values: dict[str, str]) -> dict[str, str]:
    merged = {k: v for k, v in file_values.items() if k not in PROVENANCE_KEYS}
    for key in merged:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    return merged


def config_hash(values: dict[str, str]) -> str:
    canon = json.dumps({k: values[k] for k in sorted(values)}, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def write_manifest(path: str, values: dict[str, str]) -> None:
    lines = [f"{k} = {values[k]}" for k in sorted(values)]
    lines.append(f"tool_version = {__version__}")
    lines.append(f"timestamp = {time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime())}")
    lines.append(f"config_hash = {config_hash(values)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _basis_from(values: dict[str, str]) -> LatticeBasis:
    if "basis" in values:
        rows = [
            [float(x) for x in row.split(",")]
            for row in values["basis"].split(";")
            if row.strip()
        ]
        return LatticeBasis.from_matrix(rows)
    missing = [k for k in ("b1", "b2", "theta") if k not in values]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}")
    return LatticeBasis.from_polar(
        float(values["b1"]), float(values["b2"]), parse_angle(values["theta"])
    )


def _require(values: dict[str, str], *keys: str) -> None:
    missing = [k for k in keys if k not in values]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}")


def build_experiment_config(values: dict[str, str]) -> ExperimentConfig:
    _require(values, "b1", "b2", "theta", "k")
    modes = tuple(
        m.strip() for m in values.get("modes", values.get("mode", "ex")).split(",") if m.strip()
    )
    kwargs = dict(
        modes=modes,
        b1=float(values["b1"]),
        b2=float(values["b2"]),
        theta=parse_angle(values["theta"]),
        k=int(values["k"]),
        out_dir=values.get("out", "out"),
    )
    if "bx_ratio" in values:
        kwargs["bx_ratio"] = float(values["bx_ratio"])
    if "bx1_lo" in values or "bx1_hi" in values:
        _require(values, "bx1_lo", "bx1_hi")
        kwargs["bx1_range"] = (float(values["bx1_lo"]), float(values["bx1_hi"]))
    if "T" in values:
        kwargs["T"] = float(values["T"])
    if "t_grid" in values:
        kwargs["t_grid"] = _parse_floats(values["t_grid"])
    if "gs_t_grid" in values:
        kwargs["gs_t_grid"] = _parse_floats(values["gs_t_grid"])
    if "theta_grid" in values:
        kwargs["theta_grid"] = _parse_angles(values["theta_grid"])
    if "steps" in values:
        kwargs["steps"] = int(values["steps"])
    if "converge_rel_tol" in values:
        kwargs["converge_rel_tol"] = float(values["converge_rel_tol"])
    return ExperimentConfig(**kwargs)


def _gather_flags(args: argparse.Namespace) -> dict[str, str]:
    mapping = {
        "mode": "modes",
        "modes": "modes",
        "theta": "theta",
        "b1": "b1",
        "b2": "b2",
        "basis": "basis",
        "k": "k",
        "T": "T",
        "t_grid": "t_grid",
        "gs_t_grid": "gs_t_grid",
        "theta_grid": "theta_grid",
        "bx1": "bx1",
        "bx_ratio": "bx_ratio",
        "bx1_lo": "bx1_lo",
        "bx1_hi": "bx1_hi",
        "steps": "steps",
        "converge_rel_tol": "converge_rel_tol",
        "n_points": "n_points",
        "levels": "levels",
        "out": "out",
    }
    flags = {}
    for attr, key in mapping.items():
        val = getattr(args, attr, None)
        if val is not None:
            flags[key] = str(val)
    return flags


def resolve(args: argparse.Namespace) -> dict[str, str]:
    file_values = read_config_file(args.config) if args.config else {}
    return merge_config(file_values, _gather_flags(args))


def _out_dir(values: dict[str, str]) -> str:
    out = values.get("out", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _fmt(x) -> str:
    return format(float(x), ".12g")


# ---------------------------------------------------------------- subcommands


def cmd_solve(args) -> int:
    values = resolve(args)
    _require(values, "k")
    gram = gram_from_basis(_basis_from(values))
    result = brute_force_svp(gram, int(values["k"]))
    print(f"min_norm_sq = {_fmt(result.min_norm_sq)}")
    print(f"degeneracy = {result.degeneracy}")
    for x in sorted(result.solutions):
        print(f"solution: {x}")
    return 0


def cmd_anneal(args) -> int:
    values = resolve(args)
    _require(values, "k", "T", "bx1")
    mode = values.get("modes", "ex")
    if "," in mode:
        raise ConfigError("anneal runs a single mode; use sweep-t for several")
    basis = _basis_from(values)
    k = int(values["k"])
    ratio = experiments.mode_ratio(mode, float(values.get("bx_ratio", 0.5)))
    if mode in ("ex", "sc") and ratio >= 1.0:
        raise ConfigError(f"mode {mode} needs bx_ratio < 1, got {ratio}")
    outcome, steps_used = experiments.run_point(
        mode,
        basis,
        k,
        float(values["bx1"]),
        ratio,
        float(values["T"]),
        steps=int(values["steps"]) if "steps" in values else None,
        converge_rel_tol=float(values["converge_rel_tol"])
        if "converge_rel_tol" in values
        else None,
    )
    out = _out_dir(values)
    print(
        f"mode={mode} T={_fmt(values['T'])} steps={steps_used} "
        f"success_prob={_fmt(outcome.success_prob)} failure_prob={_fmt(outcome.failure_prob)}"
    )
    pop_path = os.path.join(out, "populations.csv")
    n_sites = outcome.final_state.shape.n_sites
    with open(pop_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(f"m{i + 1}" for i in range(n_sites)) + ",probability\n")
        for m_tuple, prob in outcome.populations.items():
            fh.write(",".join(str(m) for m in m_tuple) + f",{_fmt(prob)}\n")
    write_manifest(os.path.join(out, "anneal_manifest.cfg"), values)
    print(f"wrote {pop_path}")
    return 0


def cmd_sweep_t(args) -> int:
    values = resolve(args)
    cfg = build_experiment_config(values)
    records = experiments.sweep_T(cfg)
    out = _out_dir(values)
    csv_path = os.path.join(out, "sweep_t.csv")
    experiments.write_sweep_csv(records, csv_path)
    write_manifest(os.path.join(out, "sweep_t_manifest.cfg"), values)
    print(f"wrote {csv_path} ({len(records)} records)")
    return 0


def cmd_sweep_theta(args) -> int:
    values = resolve(args)
    cfg = build_experiment_config(values)
    records = experiments.sweep_theta(cfg)
    out = _out_dir(values)
    csv_path = os.path.join(out, "sweep_theta.csv")
    experiments.write_sweep_csv(records, csv_path)
    write_manifest(os.path.join(out, "sweep_theta_manifest.cfg"), values)
    print(f"wrote {csv_path} ({len(records)} records)")
    return 0


def cmd_spectrum(args) -> int:
    values = resolve(args)
    # default instance: norm ratio 1:2 at angle pi/6, k=2, ex-protocol fields
    for key, default in (("b1", "1"), ("b2", "2"), ("theta", "pi/6"), ("k", "2")):
        values.setdefault(key, default)
    cfg = build_experiment_config(values)
    trace = experiments.run_spectrum(
        cfg,
        n_points=int(values.get("n_points", 201)),
        L=int(values.get("levels", 8)),
    )
    out = _out_dir(values)
    csv_path = os.path.join(out, "spectrum.csv")
    experiments.write_spectrum_csv(trace, csv_path)
    write_manifest(os.path.join(out, "spectrum_manifest.cfg"), values)
    print(f"wrote {csv_path} ({len(trace.s_grid)} rows, {trace.L} levels)")
    return 0


def cmd_symmetry(args) -> int:
    values = resolve(args)
    _require(values, "k", "bx1")
    mode = values.get("modes", "ex")
    basis = _basis_from(values)
    gram = gram_from_basis(basis)
    k = int(values["k"])
    shape = RegisterShape(n_sites=gram.n, k=k)
    ratio = experiments.mode_ratio(mode, float(values.get("bx_ratio", 0.5)))
    profile = FieldProfile.with_ratio(float(values["bx1"]), ratio, gram.n)
    psi0 = dynamics.initial_state(mode, shape, profile)
    report = symmetry.blocked(gram, shape, profile, psi0)
    print(report.text())
    out = _out_dir(values)
    record = {
        "mode": mode,
        "k": k,
        "gram": gram.matrix.tolist(),
        "conserved_sites": list(report.conserved_sites),
        "initial_sectors": {
            str(site): {"plus": sw.plus, "minus": sw.minus}
            for site, sw in report.initial_sectors.items()
        },
        "solution_projections": {
            str(x): p for x, p in sorted(report.solution_projections.items())
        },
        "projection_norm": report.projection_norm,
        "blocked": report.blocked,
    }
    json_path = os.path.join(out, "symmetry_report.json")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_manifest(os.path.join(out, "symmetry_manifest.cfg"), values)
    print(f"wrote {json_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svpqa",
        description="Quantum-annealing search for boxed shortest-vector problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--out", help="output directory (default ./out)")
        p.add_argument("--b1", type=float, help="norm of basis vector 1")
        p.add_argument("--b2", type=float, help="norm of basis vector 2")
        p.add_argument("--theta", help="angle between the vectors (radians or pi/18 form)")
        p.add_argument("--basis", help="explicit basis, rows ';'-separated: '1,0;0,1'")
        p.add_argument("--k", type=int, help="coefficient bound")

    p_solve = sub.add_parser("solve", help="exact brute-force shortest vector")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_anneal = sub.add_parser("anneal", help="single annealing run")
    common(p_anneal)
    p_anneal.add_argument("--mode", choices=dynamics.MODES, help="search mode")
    p_anneal.add_argument("--T", type=float, help="anneal time")
    p_anneal.add_argument("--bx1", type=float, help="weak-site field strength")
    p_anneal.add_argument("--bx-ratio", dest="bx_ratio", type=float, help="bx1/bx2")
    p_anneal.add_argument("--steps", type=int, help="fixed slice count")
    p_anneal.add_argument(
        "--converge-rel-tol", dest="converge_rel_tol", type=float,
        help="step-double until failure_prob stabilizes to this",
    )
    p_anneal.set_defaults(func=cmd_anneal)

    p_st = sub.add_parser("sweep-t", help="failure probability vs anneal time")
    common(p_st)
    p_st.add_argument("--modes", help="comma-separated subset of gs,ex,sc")
    p_st.add_argument("--t-grid", dest="t_grid", help="comma-separated anneal times")
    p_st.add_argument("--bx-ratio", dest="bx_ratio", type=float)
    p_st.add_argument("--bx1-lo", dest="bx1_lo", type=float)
    p_st.add_argument("--bx1-hi", dest="bx1_hi", type=float)
    p_st.add_argument("--steps", type=int)
    p_st.add_argument("--converge-rel-tol", dest="converge_rel_tol", type=float)
    p_st.set_defaults(func=cmd_sweep_t)

    p_sth = sub.add_parser("sweep-theta", help="failure probability vs basis angle")
    common(p_sth)
    p_sth.add_argument("--modes", help="comma-separated subset of gs,ex,sc")
    p_sth.add_argument("--theta-grid", dest="theta_grid", help="comma-separated angles")
    p_sth.add_argument("--T", type=float, help="fixed anneal time for ex/sc")
    p_sth.add_argument("--gs-t-grid", dest="gs_t_grid", help="anneal-time grid optimized for gs")
    p_sth.add_argument("--bx-ratio", dest="bx_ratio", type=float)
    p_sth.add_argument("--bx1-lo", dest="bx1_lo", type=float)
    p_sth.add_argument("--bx1-hi", dest="bx1_hi", type=float)
    p_sth.add_argument("--steps", type=int)
    p_sth.add_argument("--converge-rel-tol", dest="converge_rel_tol", type=float)
    p_sth.set_defaults(func=cmd_sweep_theta)

    p_sp = sub.add_parser("spectrum", help="instantaneous level trace CSV")
    common(p_sp)
    p_sp.add_argument("--T", type=float, help="anneal time used by the field optimizer")
    p_sp.add_argument("--bx-ratio", dest="bx_ratio", type=float)
    p_sp.add_argument("--bx1-lo", dest="bx1_lo", type=float)
    p_sp.add_argument("--bx1-hi", dest="bx1_hi", type=float)
    p_sp.add_argument("--n-points", dest="n_points", type=int, help="s-grid size")
    p_sp.add_argument("--levels", type=int, help="number of levels retained")
    p_sp.add_argument("--steps", type=int)
    p_sp.set_defaults(func=cmd_spectrum)

    p_sym = sub.add_parser("symmetry", help="parity-sector blocking report")
    common(p_sym)
    p_sym.add_argument("--mode", choices=dynamics.MODES, help="search mode")
    p_sym.add_argument("--bx1", type=float, help="weak-site field strength")
    p_sym.add_argument("--bx-ratio", dest="bx_ratio", type=float)
    p_sym.set_defaults(func=cmd_symmetry)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # stash --mode under modes for resolve()
    if getattr(args, "mode", None) is not None:
        args.modes = args.mode
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, ConvergenceError) as exc:
        print(f"dynamics: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SvpqaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
