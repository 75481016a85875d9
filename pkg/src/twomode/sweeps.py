"""Parameter sweeps behind the CLI subcommands, with ordered parallel dispatch.

Each sweep point is a pure function of its parameters, so points dispatch to
a process pool and are written back in input order regardless of completion
order.  Result rows are fixed-column ordered dicts of floats; every
ED-backed quantity carries a convergence flag from an n_max + 10 recheck.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import __version__
from .config import RunConfig
from .fock import FockCutoff, ground_state, partial_trace, von_neumann_entropy
from .meanfield import (
    Branch,
    bogoliubov_params,
    quadratic_alpha_hamiltonian,
    squeezed_ground_entropy,
    squeezing_cutoff,
    stationary_amplitude,
)
from .model import (
    ModelParams,
    Phase,
    auto_cutoff,
    build_hamiltonian_alphabeta,
    classify_phase,
    fock_condensate_entropy,
    rotate_alpha_vacuum,
    rotate_modes,
)
from .dynamics import (
    covariance_from_coefficients,
    entropy_from_symplectic,
    fock_dynamics_oracle,
    heisenberg_coefficients,
    prepare_superfluid,
)

CONVERGENCE_TOL = 1e-8

PHASE_COLUMNS = ("ratio", "n_alpha", "S_analytic", "S_numeric", "gap", "converged")
SBF_COLUMNS = (
    "ratio",
    "nu",
    "branch",
    "theta",
    "epsilon",
    "S_analytic",
    "S_ed_quadratic",
    "converged",
)
DYNAMICS_COLUMNS = (
    "t",
    "S_gaussian",
    "f_re",
    "f_im",
    "fp_re",
    "fp_im",
    "canonical_residual",
)


def default_ratio_grid(points: int = 201) -> np.ndarray:
    return np.linspace(0.5, 1.5, points)


def _phase_ed_entropy(params: ModelParams, cutoff: FockCutoff, n_select: int):
    """(energy, entropy, gap) of the rotated ED ground state.

    At a degenerate boundary the multiplet member matching ``n_select`` is
    taken, so the comparison against the analytic staircase is well defined.
    """
    h = build_hamiltonian_alphabeta(params, cutoff)
    gs = ground_state(h)
    state = gs.state
    if gs.degeneracy > 1:
        target = np.zeros(cutoff.dim_two_mode)
        target[cutoff.index(n_select, 0)] = 1.0
        basis = np.column_stack(gs.multiplet)
        proj = basis @ (basis.conj().T @ target)
        nrm = np.linalg.norm(proj)
        if nrm > 1e-8:
            from .fock import make_state

            state = make_state(cutoff, proj, normalize=True)
    rotated = rotate_modes(state)
    entropy = von_neumann_entropy(partial_trace(rotated, "a"))
    return gs.energy, entropy, gs.gap


def phase_point(task: tuple) -> dict:
    """One row of the condensate staircase sweep."""
    omega, w, g, cutoff_n = task
    params = ModelParams(omega=omega, w=w, g=g)
    ratio = w / (omega + g)
    cls = classify_phase(params)
    s_analytic = 0.0 if cls.phase is Phase.NORMAL else fock_condensate_entropy(cls.n_alpha)

    cutoff = FockCutoff(cutoff_n) if cutoff_n else auto_cutoff(params)
    e0, s0, gap = _phase_ed_entropy(params, cutoff, cls.n_alpha)
    e1, s1, _ = _phase_ed_entropy(params, cutoff.bumped(), cls.n_alpha)
    converged = abs(e1 - e0) < CONVERGENCE_TOL and abs(s1 - s0) < CONVERGENCE_TOL
    return {
        "ratio": ratio,
        "n_alpha": float(cls.n_alpha if cls.phase is not Phase.NORMAL else 0),
        "S_analytic": s_analytic,
        "S_numeric": s0,
        "gap": gap,
        "converged": float(converged),
    }


def sbf_point(task: tuple) -> dict:
    """One row of the driven-condensate entanglement sweep."""
    omega, w, g, lam, cutoff_n = task
    params = ModelParams(omega=omega, w=w, g=g, lam=lam)
    ratio = w / (omega + g)
    solution = stationary_amplitude(params)
    bogo = bogoliubov_params(params, solution)
    s_closed = squeezed_ground_entropy(bogo.theta)

    def ed_entropy(cut: FockCutoff) -> tuple[float, float]:
        h = quadratic_alpha_hamiltonian(params, solution, cut)
        gs = ground_state(h)
        matrix = rotate_alpha_vacuum(gs.state.amplitudes)
        sv = np.linalg.svd(matrix, compute_uv=False)
        p = sv**2
        p = p[p > 1e-14]
        return gs.energy, float(-np.sum(p * np.log(p)))

    cutoff = FockCutoff(cutoff_n) if cutoff_n else squeezing_cutoff(bogo.theta)
    e0, s0 = ed_entropy(cutoff)
    e1, s1 = ed_entropy(cutoff.bumped())
    converged = abs(e1 - e0) < CONVERGENCE_TOL and abs(s1 - s0) < CONVERGENCE_TOL
    return {
        "ratio": ratio,
        "nu": solution.nu,
        "branch": float(solution.branch is Branch.SUPERFLUID),
        "theta": bogo.theta,
        "epsilon": bogo.epsilon,
        "S_analytic": s_closed,
        "S_ed_quadratic": s0,
        "converged": float(converged),
    }


def dynamics_point(task: tuple) -> dict:
    """One row of the entanglement-dynamics time series."""
    omega, w, g, lam, t = task
    params = ModelParams(omega=omega, w=w, g=g, lam=lam)
    solution, bogo = prepare_superfluid(params)
    coeffs = heisenberg_coefficients(bogo, solution.nu, t)
    state = covariance_from_coefficients(coeffs)
    mu = float(np.sqrt(np.linalg.det(state.reduced_block("a"))))
    return {
        "t": t,
        "S_gaussian": entropy_from_symplectic(mu),
        "f_re": coeffs.f.real,
        "f_im": coeffs.f.imag,
        "fp_re": coeffs.f_prime.real,
        "fp_im": coeffs.f_prime.imag,
        "canonical_residual": coeffs.canonical_residual,
    }


def _run_tasks(fn: Callable[[tuple], dict], tasks: Sequence[tuple], jobs: int) -> list[dict]:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(tasks) // (4 * jobs))
        return list(pool.map(fn, tasks, chunksize=chunk))


def run_phase_sweep(config: RunConfig, points: int | None = None) -> tuple[tuple, list[dict]]:
    m = config.model
    if config.sweep is not None:
        if config.sweep.param != "w":
            raise ValueError("phase sweep varies w; use --sweep w:start:stop:points")
        w_grid = config.sweep.grid()
    else:
        w_grid = default_ratio_grid(points or 201) * (m.omega + m.g)
    tasks = [(m.omega, float(w), m.g, config.cutoff or 0) for w in w_grid]
    return PHASE_COLUMNS, _run_tasks(phase_point, tasks, config.jobs)


def run_sbf_sweep(config: RunConfig, points: int | None = None) -> tuple[tuple, list[dict]]:
    m = config.model
    if m.lam <= 0:
        raise ValueError("sbf sweep needs lambda > 0")
    if config.sweep is not None:
        if config.sweep.param != "w":
            raise ValueError("sbf sweep varies w; use --sweep w:start:stop:points")
        w_grid = config.sweep.grid()
    else:
        w_grid = default_ratio_grid(points or 201) * (m.omega + m.g)
    tasks = [(m.omega, float(w), m.g, m.lam, config.cutoff or 0) for w in w_grid]
    return SBF_COLUMNS, _run_tasks(sbf_point, tasks, config.jobs)


def run_dynamics_sweep(config: RunConfig) -> tuple[tuple, list[dict]]:
    m = config.model
    _, bogo = prepare_superfluid(m)
    t_max = config.time_max if config.time_max is not None else 3.0 * np.pi / bogo.epsilon
    if config.sweep is not None and config.sweep.param == "t":
        t_grid = config.sweep.grid()
    else:
        t_grid = np.linspace(0.0, t_max, config.time_points)
    tasks = [(m.omega, m.w, m.g, m.lam, float(t)) for t in t_grid]
    columns, rows = DYNAMICS_COLUMNS, _run_tasks(dynamics_point, tasks, config.jobs)

    if config.with_fock_oracle:
        columns = columns[:2] + ("S_fock_oracle",) + columns[2:]
        sample_idx = set(
            int(i) for i in np.linspace(0, len(t_grid) - 1, min(6, len(t_grid))).round()
        )
        for i, row in enumerate(rows):
            if i in sample_idx:
                row["S_fock_oracle"] = fock_dynamics_oracle(
                    m, float(t_grid[i]), nu_prime=m.nu_prime if m.nu_prime > 0 else 0.3
                )
            else:
                row["S_fock_oracle"] = float("nan")
    return columns, rows


def format_value(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(
    stream,
    columns: Sequence[str],
    rows: Iterable[dict],
    config: RunConfig,
) -> None:
    """CSV with '#' provenance comments, 17-significant-digit values."""
    scale = 1.0 / np.log(2.0) if config.entropy_unit == "bits" else 1.0
    entropy_cols = {c for c in columns if c.startswith("S_")}
    stream.write(f"# twomode {__version__}\n")
    stream.write(f"# config-sha256: {config.config_hash()}\n")
    stream.write(f"# entropy-unit: {config.entropy_unit}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        missing = [c for c in columns if c not in row]
        if missing:
            raise ValueError(f"row missing cells: {missing}")
        vals = [
            format_value(row[c] * scale if c in entropy_cols else row[c])
            for c in columns
        ]
        stream.write(",".join(vals) + "\n")


def emit(config: RunConfig, columns: Sequence[str], rows: list[dict]) -> None:
    if config.out:
        with open(config.out, "w") as fh:
            write_csv(fh, columns, rows, config)
    else:
        write_csv(sys.stdout, columns, rows, config)


PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Plot {kind} data produced by twomode ({columns}).\"\"\"
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {default_path!r}
rows = []
with open(path) as fh:
    for line in fh:
        if not line.startswith("#"):
            break
        print(line.rstrip())
    fh.seek(0)
    reader = csv.DictReader(l for l in fh if not l.startswith("#"))
    rows = [{{k: float(v) for k, v in r.items()}} for r in reader]

x = [r[{x_col!r}] for r in rows]
for col in {y_cols!r}:
    plt.plot(x, [r[col] for r in rows], label=col)
plt.xlabel({x_col!r})
plt.ylabel("entropy")
plt.legend()
plt.tight_layout()
plt.show()
"""


def write_plot_script(path: str, kind: str, columns: Sequence[str], csv_path: str) -> None:
    """Self-contained matplotlib script; the tool itself never renders."""
    x_col = columns[0]
    y_cols = [c for c in columns if c.startswith("S_")]
    with open(path, "w") as fh:
        fh.write(
            PLOT_SCRIPT.format(
                kind=kind,
                columns=",".join(columns),
                default_path=csv_path,
                x_col=x_col,
                y_cols=y_cols,
            )
        )
