"""Named validation checks: acceptance criteria and module invariants.

Every check has a stable identifier, a measured value, and a tolerance, so
the validate subcommand can emit a machine-readable report and the test
suite can assert the same registry.  Checks tagged "full" add the expensive
cutoff-doubling and fine-grid variants on top of the quick set.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np

from .config import RunConfig, default_jobs
from .fock import (
    FockCutoff,
    basis_state,
    coherent_state,
    expectation,
    ground_state,
    make_state,
    partial_trace,
    propagate,
    schmidt_entropy,
    von_neumann_entropy,
)
from .meanfield import (
    bogoliubov_params,
    mean_field_energy,
    quadratic_alpha_hamiltonian,
    squeezed_ground_entropy,
    squeezed_state,
    squeezing_cutoff,
    stationary_amplitude,
)
from .model import (
    ModelParams,
    auto_cutoff,
    build_hamiltonian_ab,
    build_hamiltonian_alphabeta,
    build_sbf_hamiltonian,
    classify_phase,
    fock_condensate_entropy,
    perturbative_energy_shift,
    rotate_alpha_vacuum,
    rotate_modes,
)
from .dynamics import (
    covariance_from_coefficients,
    entropy_curve,
    fock_dynamics_oracle,
    heisenberg_coefficients,
    oracle_cutoff,
    prepare_superfluid,
    short_time_sbf_sensitivity,
    symplectic_eigenvalues,
)
from . import sweeps

FIG1_PARAMS = dict(omega=1.0, g=0.01)
FIG2_LAMBDAS = (0.1, 0.3)
FIG3_PARAMS = ModelParams(omega=1.0, w=2.0, g=0.1, lam=0.11)

# regression bound for the short-time drive-insensitivity spread, frozen
# from the first oracle run (measured 0.0588 for lambda in {0.05, 0.11})
SHORT_TIME_SPREAD_BOUND = 0.08


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    description: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""


def _result(check_id, description, value, tolerance, passed=None, detail=""):
    if passed is None:
        passed = bool(value <= tolerance)
    return CheckResult(check_id, description, float(value), float(tolerance), bool(passed), detail)


# ---------------------------------------------------------------------------
# extended-precision tridiagonal ground energy (drive-sector oracle)

def _alpha_sector_tridiagonal(params: ModelParams, n_max: int):
    """Driven alpha-sector block at beta vacuum: diag E_n, off-diag -lambda sqrt(n+1).

    The drive conserves the beta occupation and every added beta quantum
    strictly raises the energy, so the two-mode ground state lives in this
    sector exactly.
    """
    n = np.arange(n_max + 1, dtype=np.longdouble)
    om, w, g, lam = (
        np.longdouble(params.omega),
        np.longdouble(params.w),
        np.longdouble(params.g),
        np.longdouble(params.lam),
    )
    diag = (om - w) * n + g * n * n
    off = -lam * np.sqrt(n[1:])
    return diag, off


def _tridiag_lowest(diag: np.ndarray, off: np.ndarray, iters: int = 120) -> np.longdouble:
    """Lowest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.

    Runs in 80-bit floats so perturbation residuals down to ~1e-17 are
    resolvable, far below float64 eigensolver noise.
    """
    d = np.asarray(diag, dtype=np.longdouble)
    e = np.asarray(off, dtype=np.longdouble)
    pad = np.concatenate((np.abs(e), [np.longdouble(0.0)]))
    pad2 = np.concatenate(([np.longdouble(0.0)], np.abs(e)))
    lo = np.min(d - pad - pad2)
    hi = d[0]  # Rayleigh quotient of the first basis vector

    def count_below(x) -> int:
        cnt = 0
        t = d[0] - x
        if t < 0:
            cnt += 1
        for i in range(1, len(d)):
            denom = t if t != 0 else np.longdouble(1e-300)
            t = d[i] - x - e[i - 1] * e[i - 1] / denom
            if t < 0:
                cnt += 1
        return cnt

    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if count_below(mid) >= 1:
            hi = mid
        else:
            lo = mid
    return np.longdouble(0.5) * (lo + hi)


def sector_ground_energy(params: ModelParams, n_max: int) -> np.longdouble:
    diag, off = _alpha_sector_tridiagonal(params, n_max)
    if params.lam == 0.0:
        return np.min(diag)
    return _tridiag_lowest(diag, off)


def _lowest_eigenvalues_dense(op, k: int) -> np.ndarray:
    import scipy.sparse as sp

    mat = op.entries.toarray() if sp.issparse(op.entries) else op.entries
    return np.linalg.eigvalsh(mat)[:k]


# ---------------------------------------------------------------------------
# acceptance criteria

def check_fig1_staircase(points: int = 201, jobs: int | None = None) -> CheckResult:
    started = time.perf_counter()
    config = RunConfig(
        model=ModelParams(FIG1_PARAMS["omega"], 0.5, FIG1_PARAMS["g"]),
        jobs=jobs or default_jobs(),
    )
    _, rows = sweeps.run_phase_sweep(config, points=points)
    elapsed = time.perf_counter() - started
    unconverged = sum(1 for r in rows if not r["converged"])
    max_dev = max(abs(r["S_analytic"] - r["S_numeric"]) for r in rows)
    normal_nonzero = max(
        (r["S_numeric"] for r in rows if r["ratio"] * (1.0 + FIG1_PARAMS["g"]) < 1.0),
        default=0.0,
    )
    passed = max_dev <= 1e-8 and unconverged == 0 and normal_nonzero <= 1e-8 and elapsed < 120.0
    return _result(
        "accept.fig1-staircase",
        f"condensate staircase over {points} points: analytic vs ED entropy",
        max_dev,
        1e-8,
        passed,
        f"unconverged={unconverged}, normal-phase max S={normal_nonzero:.2e}, runtime={elapsed:.1f}s",
    )


def check_ground_energy_formula() -> CheckResult:
    targets = [1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 25, 26, 27, 28, 30]
    g_cycle = (0.005, 0.01, 0.02, 0.04)
    offset_cycle = (0.0, 0.2, -0.3, 0.4)
    worst = 0.0
    for i, n in enumerate(targets):
        g = g_cycle[i % 4]
        delta = n + offset_cycle[i % 4]
        params = ModelParams(omega=1.0, w=1.0 + 2.0 * g * delta, g=g)
        cls = classify_phase(params)
        assert cls.n_alpha == n, (cls, n)
        h = build_hamiltonian_alphabeta(params, auto_cutoff(params))
        gs = ground_state(h)
        worst = max(worst, abs(gs.energy - cls.ground_energy))
    return _result(
        "accept.ground-energy-formula",
        "ED ground energy equals (omega-w) n + g n^2 over 20 parameter sets",
        worst,
        1e-10,
    )


def _perturbation_residuals(params0: ModelParams, lambdas) -> list[float]:
    n_max = max(40, int(abs(params0.detuning_ratio)) + 25)
    e_ref = sector_ground_energy(ModelParams(params0.omega, params0.w, params0.g), n_max)
    out = []
    for lam in lambdas:
        p = ModelParams(params0.omega, params0.w, params0.g, lam)
        shift = perturbative_energy_shift(p)
        e_lam = sector_ground_energy(p, n_max)
        out.append(float(abs(e_lam - e_ref - np.longdouble(shift.delta_e))))
    return out


def check_perturbation_scaling() -> CheckResult:
    lambdas = (1e-3, 5e-4, 2.5e-4)
    cases = {
        "normal": (ModelParams(1.0, 0.5, 0.01), 4.0),
        "condensate": (ModelParams(1.0, 1.04, 0.01), 4.0),
        "boundary": (ModelParams(1.0, 1.05, 0.01), 2.0),
    }
    worst_err = 0.0
    details = []
    for name, (params0, expected) in cases.items():
        residuals = _perturbation_residuals(params0, lambdas)
        exps = [
            np.log2(residuals[i] / residuals[i + 1]) for i in range(len(residuals) - 1)
        ]
        err = max(abs(e - expected) for e in exps)
        worst_err = max(worst_err, err)
        details.append(f"{name}: exponents {[f'{e:.3f}' for e in exps]} (target {expected})")
    return _result(
        "accept.perturbation-scaling",
        "drive-shift residual scaling: exponent 4 (2 at the degenerate boundary) +/- 0.3",
        worst_err,
        0.3,
        detail="; ".join(details),
    )


def check_meanfield_consistency() -> CheckResult:
    params = FIG3_PARAMS
    solution = stationary_amplitude(params)
    c = params.omega - params.w + params.g
    residual = abs(c * solution.nu + 2 * params.g * solution.nu**3 - params.lam)
    bogo = bogoliubov_params(params, solution)
    cutoff = squeezing_cutoff(bogo.theta)
    h = quadratic_alpha_hamiltonian(params, solution, cutoff)
    vals = _lowest_eigenvalues_dense(h, 2)
    gap_err = abs((vals[1] - vals[0]) - bogo.epsilon)
    zero_err = abs(vals[0] - bogo.zero_point)
    gs = ground_state(h)
    sq = squeezed_state(bogo.theta, cutoff)
    overlap = abs(np.vdot(sq, gs.state.amplitudes)) ** 2
    matrix = rotate_alpha_vacuum(gs.state.amplitudes)
    sv = np.linalg.svd(matrix, compute_uv=False)
    p = sv**2
    p = p[p > 1e-14]
    s_ed = float(-np.sum(p * np.log(p)))
    s_closed = squeezed_ground_entropy(bogo.theta)
    checks = [
        ("cubic residual", residual, 1e-12),
        ("ED gap vs epsilon", gap_err, 1e-8),
        ("ED ground vs zero-point", zero_err, 1e-8),
        ("squeezed overlap deficit", 1.0 - overlap, 1e-8),
        ("entropy closed-form vs ED", abs(s_ed - s_closed), 1e-6),
    ]
    worst_margin = max(v / tol for _, v, tol in checks)
    passed = all(v <= tol for _, v, tol in checks)
    detail = (
        f"nu={solution.nu:.8f}, eps={bogo.epsilon:.8f}, theta={bogo.theta:.8f}; "
        + "; ".join(f"{n}={v:.2e} (tol {tol:.0e})" for n, v, tol in checks)
    )
    return _result(
        "accept.meanfield-consistency",
        "stationary amplitude, Bogoliubov data, squeezed ground state vs ED",
        worst_margin,
        1.0,
        passed,
        detail,
    )


def check_fig2_properties(points: int = 201, jobs: int | None = None) -> CheckResult:
    curves = {}
    for lam in FIG2_LAMBDAS:
        config = RunConfig(
            model=ModelParams(FIG1_PARAMS["omega"], 1.2, FIG1_PARAMS["g"], lam=lam),
            jobs=jobs or default_jobs(),
        )
        _, rows = sweeps.run_sbf_sweep(config, points=points)
        curves[lam] = rows
    rows_01, rows_03 = curves[0.1], curves[0.3]
    all_nonneg = all(r["S_analytic"] >= 0.0 for rows in curves.values() for r in rows)
    deep_normal = max(
        r["S_analytic"] for rows in curves.values() for r in rows if r["ratio"] <= 0.6
    )
    ordered = all(
        a["S_analytic"] >= b["S_analytic"] - 1e-12
        for a, b in zip(rows_01, rows_03)
        if a["ratio"] > 1.0
    )
    rises = rows_01[-1]["S_analytic"] > 0.4 and rows_03[-1]["S_analytic"] > 0.3
    unconverged = sum(1 for rows in curves.values() for r in rows if not r["converged"])
    passed = all_nonneg and deep_normal < 1e-3 and ordered and rises and unconverged == 0
    return _result(
        "accept.fig2-properties",
        "driven entanglement curves: nonnegative, small in deep normal phase, "
        "rising past critical, smaller drive gives more entanglement",
        deep_normal,
        1e-3,
        passed,
        f"deep-normal max={deep_normal:.2e}, ordered={ordered}, rises={rises}, "
        f"unconverged={unconverged}, S(1.5)={rows_01[-1]['S_analytic']:.4f}/{rows_03[-1]['S_analytic']:.4f}",
    )


def check_fig3_dynamics(oracle_times=(0.25, 0.5, 1.0, 1.5, 2.0), doubling: bool = True) -> CheckResult:
    params = FIG3_PARAMS
    solution, bogo = prepare_superfluid(params)
    eps = bogo.epsilon
    s0 = entropy_curve(params, [0.0])[0]
    grid = np.linspace(0.0, 2.0 * np.pi / eps, 200)
    s_a = entropy_curve(params, grid)
    s_b = entropy_curve(params, grid + np.pi / eps)
    period_dev = float(np.max(np.abs(s_a - s_b)))

    grid_small = np.linspace(0.0, 3.0 * np.pi / eps, 120)
    col_a = [sweeps.format_value(v) for v in entropy_curve(
        ModelParams(params.omega, params.w, params.g, params.lam, 0.5), grid_small)]
    col_b = [sweeps.format_value(v) for v in entropy_curve(
        ModelParams(params.omega, params.w, params.g, params.lam, 5.0), grid_small)]
    byte_identical = col_a == col_b

    base_cut = oracle_cutoff(solution, bogo, 0.3)
    worst_oracle = 0.0
    worst_doubling = 0.0
    for et in oracle_times:
        t = float(et / eps)
        s_gauss = entropy_curve(params, [t])[0]
        s_fock = fock_dynamics_oracle(params, t, nu_prime=0.3, cutoff=base_cut)
        worst_oracle = max(worst_oracle, abs(s_fock - s_gauss))
        if doubling:
            s_fock2 = fock_dynamics_oracle(
                params, t, nu_prime=0.3, cutoff=FockCutoff(2 * base_cut.n_max)
            )
            worst_doubling = max(worst_doubling, abs(s_fock2 - s_fock))
    passed = (
        s0 <= 1e-12
        and period_dev <= 1e-9
        and byte_identical
        and worst_oracle <= 1e-4
        and (not doubling or worst_doubling <= 1e-6)
    )
    return _result(
        "accept.fig3-dynamics",
        "S(0)=0, period pi/eps, amplitude-independent, Gaussian route matches Fock oracle",
        worst_oracle,
        1e-4,
        passed,
        f"S(0)={s0:.2e}, period-dev={period_dev:.2e}, byte-identical={byte_identical}, "
        f"oracle-dev={worst_oracle:.2e}, doubling-dev={worst_doubling:.2e}, cutoff={base_cut.n_max}",
    )


def check_canonical_invariants() -> CheckResult:
    params = FIG3_PARAMS
    solution, bogo = prepare_superfluid(params)
    t_grid = np.linspace(0.0, 4.0 * np.pi / bogo.epsilon, 1000)
    worst_canon = 0.0
    worst_purity = 0.0
    for t in t_grid:
        coeffs = heisenberg_coefficients(bogo, solution.nu, float(t))
        worst_canon = max(worst_canon, coeffs.canonical_residual)
        state = covariance_from_coefficients(coeffs, nu_prime=0.7)
        mu = symplectic_eigenvalues(state.covariance)
        worst_purity = max(worst_purity, float(np.max(np.abs(mu - 0.5))))
    passed = worst_canon <= 1e-12 and worst_purity <= 1e-10
    return _result(
        "accept.canonical-invariants",
        "|f|^2 - |f'|^2 = 1 and pure-state symplectic spectrum {1/2, 1/2} on a 1000-point grid",
        worst_canon,
        1e-12,
        passed,
        f"canonical={worst_canon:.2e}, purity={worst_purity:.2e} (uncertainty checked at construction)",
    )


def check_short_time_sbf() -> CheckResult:
    report = short_time_sbf_sensitivity(
        FIG3_PARAMS, (0.05, 0.11), np.linspace(0.0, 4.0, 401)
    )
    passed = (
        report.max_spread_short < report.max_spread_mid
        and report.max_spread_short <= SHORT_TIME_SPREAD_BOUND
        and all(report.in_free_diffusion_window)
    )
    return _result(
        "accept.short-time-sbf",
        "short-time entanglement growth insensitive to the drive amplitude",
        report.max_spread_short,
        SHORT_TIME_SPREAD_BOUND,
        passed,
        f"short spread={report.max_spread_short:.4f}, mid spread={report.max_spread_mid:.4f}, "
        f"free-diffusion flags={report.in_free_diffusion_window}",
    )


# ---------------------------------------------------------------------------
# module invariants

def check_fock_hermiticity() -> CheckResult:
    worst = 0.0
    for params in (
        ModelParams(1.0, 0.5, 0.01),
        ModelParams(1.0, 1.04, 0.01, lam=0.2),
        ModelParams(1.0, 2.0, 0.1, lam=0.11),
    ):
        cutoff = FockCutoff(18)
        for build in (build_hamiltonian_ab, build_hamiltonian_alphabeta, build_sbf_hamiltonian):
            h = build(params, cutoff).entries
            num = abs((h - h.conj().T)).max()
            worst = max(worst, float(num / max(1.0, abs(h).max())))
    return _result(
        "fock.hermiticity",
        "Hamiltonian builders produce Hermitian matrices (relative 1e-12)",
        worst,
        1e-12,
    )


def check_fock_cutoff_convergence() -> CheckResult:
    params = ModelParams(1.0, 1.1, 0.01)

    def quantity(cutoff: FockCutoff):
        h = build_hamiltonian_alphabeta(params, cutoff)
        gs = ground_state(h)
        rotated = rotate_modes(gs.state)
        return gs.energy, schmidt_entropy(rotated)

    base = quantity(auto_cutoff(params))
    again = quantity(auto_cutoff(params).bumped())
    delta = max(abs(a - b) for a, b in zip(base, again))
    return _result(
        "fock.cutoff-convergence",
        "ground energy and entropy stable under n_max -> n_max + 10",
        delta,
        1e-8,
    )


def check_fock_schmidt_vs_trace() -> CheckResult:
    rng = np.random.default_rng(20240811)
    cutoff = FockCutoff(7)
    worst = 0.0
    for _ in range(100):
        vec = rng.normal(size=cutoff.dim_two_mode) + 1j * rng.normal(size=cutoff.dim_two_mode)
        state = make_state(cutoff, vec, normalize=True)
        s1 = schmidt_entropy(state)
        s2 = von_neumann_entropy(partial_trace(state, "a"))
        s3 = von_neumann_entropy(partial_trace(state, "b"))
        worst = max(worst, abs(s1 - s2), abs(s1 - s3))
    return _result(
        "fock.schmidt-vs-partial-trace",
        "Schmidt route equals partial-trace entropy on 100 random states",
        worst,
        1e-10,
    )


def check_fock_propagation() -> CheckResult:
    params = ModelParams(1.0, 1.04, 0.01, lam=0.05)
    cutoff = FockCutoff(14)
    h = build_sbf_hamiltonian(params, cutoff)
    psi, _ = coherent_state(0.6, 0.3j, cutoff)
    e0 = expectation(h, psi)
    worst_norm = 0.0
    worst_energy = 0.0
    for t in (0.7, 3.1, 12.9):
        out = propagate(h, psi, t)
        worst_norm = max(worst_norm, abs(np.linalg.norm(out.amplitudes) - 1.0))
        worst_energy = max(worst_energy, abs(expectation(h, out) - e0) / max(1.0, abs(e0)))
    value = max(worst_norm, worst_energy / 100.0)
    return _result(
        "fock.propagate-norm-energy",
        "propagation preserves norm (1e-10) and energy (1e-8 relative)",
        value,
        1e-10,
        worst_norm <= 1e-10 and worst_energy <= 1e-8,
        f"norm drift={worst_norm:.2e}, energy drift={worst_energy:.2e}",
    )


def check_spectra_unitary_equivalence() -> CheckResult:
    params = ModelParams(1.0, 1.04, 0.01)
    cutoff = FockCutoff(30)
    e_ab = _lowest_eigenvalues_dense(build_hamiltonian_ab(params, cutoff), 10)
    e_rot = _lowest_eigenvalues_dense(build_hamiltonian_alphabeta(params, cutoff), 10)
    dev = float(np.max(np.abs(e_ab - e_rot)))
    return _result(
        "spectra.unitary-equivalence",
        "lowest 10 levels agree between the (a,b) and rotated-basis builders",
        dev,
        1e-9,
    )


def check_spectra_entropy_oracle() -> CheckResult:
    worst = 0.0
    for n in range(0, 13):
        cutoff = FockCutoff(n + 4)
        state = basis_state(cutoff, n, 0)
        rotated = rotate_modes(state)
        s_num = von_neumann_entropy(partial_trace(rotated, "a"))
        worst = max(worst, abs(s_num - fock_condensate_entropy(n)))
    return _result(
        "spectra.condensate-entropy-oracle",
        "closed-form condensate entropy equals rotate + trace oracle for n <= 12",
        worst,
        1e-10,
    )


def check_spectra_monotonicity() -> CheckResult:
    values = [fock_condensate_entropy(n) for n in range(0, 61)]
    min_step = min(b - a for a, b in zip(values, values[1:]))
    return _result(
        "spectra.entropy-monotonic",
        "condensate entropy strictly increases with the occupation",
        -min_step,
        0.0,
        min_step > 0.0,
        f"min increment {min_step:.3e}",
    )


def check_spectra_normal_vacuum() -> CheckResult:
    params = ModelParams(1.0, 0.5, 0.01)
    h = build_hamiltonian_alphabeta(params, auto_cutoff(params))
    gs = ground_state(h)
    rotated = rotate_modes(gs.state)
    s = von_neumann_entropy(partial_trace(rotated, "a"))
    vac_overlap = abs(gs.state.amplitudes[0]) ** 2
    passed = abs(gs.energy) <= 1e-10 and s <= 1e-10 and vac_overlap >= 1.0 - 1e-10
    return _result(
        "spectra.normal-vacuum",
        "normal-phase ED ground state is the vacuum with zero entropy",
        s,
        1e-10,
        passed,
        f"energy={gs.energy:.2e}, vacuum overlap deficit={1 - vac_overlap:.2e}",
    )


def check_spectra_sector_reduction() -> CheckResult:
    worst = 0.0
    for params in (
        ModelParams(1.0, 0.5, 0.01, lam=0.004),
        ModelParams(1.0, 1.04, 0.01, lam=0.004),
    ):
        e_sector = float(sector_ground_energy(params, auto_cutoff(params).n_max))
        h = build_sbf_hamiltonian(params, auto_cutoff(params))
        worst = max(worst, abs(ground_state(h).energy - e_sector))
    return _result(
        "spectra.sector-reduction",
        "two-mode ED ground energy equals the beta-vacuum sector reduction",
        worst,
        1e-11,
    )


def check_meanfield_cubic() -> CheckResult:
    rng = np.random.default_rng(7)
    worst_resid = 0.0
    minimizer_ok = True
    for _ in range(200):
        omega = 1.0
        w = float(rng.uniform(0.2, 3.0))
        g = float(rng.uniform(0.005, 0.3))
        lam = float(rng.uniform(1e-4, 0.5))
        params = ModelParams(omega, w, g, lam)
        sol = stationary_amplitude(params)
        c = omega - w + g
        worst_resid = max(worst_resid, abs(c * sol.nu + 2 * g * sol.nu**3 - lam))
        energies = [mean_field_energy(params, r) for r in sol.all_real_roots]
        if mean_field_energy(params, sol.nu) > min(energies) + 1e-12:
            minimizer_ok = False
    return _result(
        "meanfield.cubic-residual",
        "stationarity residual <= 1e-12 and returned root minimizes E0 (200 random sets)",
        worst_resid,
        1e-12,
        worst_resid <= 1e-12 and minimizer_ok,
        f"minimizer ok={minimizer_ok}",
    )


def check_meanfield_superfluid_asymptotics() -> CheckResult:
    base = ModelParams(1.0, 2.0, 0.1)
    nu_star = np.sqrt((base.w - base.omega - base.g) / (2 * base.g))
    errs = []
    for lam in (0.02, 0.01, 0.005):
        sol = stationary_amplitude(ModelParams(base.omega, base.w, base.g, lam))
        errs.append(abs(sol.nu - nu_star - lam / (4 * base.g * nu_star**2)))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    ok = all(3.0 <= r <= 5.0 for r in ratios)
    return _result(
        "meanfield.superfluid-asymptotics",
        "nu(lambda) - nu* - lambda/(4 g nu*^2) shrinks as O(lambda^2)",
        max(abs(r - 4.0) for r in ratios),
        1.0,
        ok,
        f"halving ratios {[f'{r:.3f}' for r in ratios]}",
    )


def check_meanfield_normal_asymptotics() -> CheckResult:
    base = ModelParams(1.0, 0.5, 0.01)
    c = base.omega - base.w + base.g
    errs = []
    for lam in (0.02, 0.01, 0.005):
        sol = stationary_amplitude(ModelParams(base.omega, base.w, base.g, lam))
        errs.append(abs(sol.nu - lam / c))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    ok = all(6.5 <= r <= 9.5 for r in ratios)
    return _result(
        "meanfield.normal-asymptotics",
        "nu(lambda) - lambda/(omega-w+g) shrinks as O(lambda^3)",
        max(abs(r - 8.0) for r in ratios),
        1.5,
        ok,
        f"halving ratios {[f'{r:.3f}' for r in ratios]}",
    )


def check_meanfield_entropy_oracle() -> CheckResult:
    worst = 0.0
    for w, lam in ((1.2, 0.1), (1.3, 0.3), (2.0, 0.11)):
        params = ModelParams(1.0, w, 0.1 if w == 2.0 else 0.01, lam=lam)
        sol = stationary_amplitude(params)
        bogo = bogoliubov_params(params, sol)
        cutoff = squeezing_cutoff(bogo.theta)
        gs = ground_state(quadratic_alpha_hamiltonian(params, sol, cutoff))
        sv = np.linalg.svd(rotate_alpha_vacuum(gs.state.amplitudes), compute_uv=False)
        p = sv**2
        p = p[p > 1e-14]
        s_ed = float(-np.sum(p * np.log(p)))
        worst = max(worst, abs(s_ed - squeezed_ground_entropy(bogo.theta)))
    return _result(
        "meanfield.entropy-oracle",
        "closed-form squeezed entropy equals the rotated ED ground-state entropy",
        worst,
        1e-6,
    )


def check_meanfield_weak_coupling_flag() -> CheckResult:
    strong = ModelParams(1.0, 2.0, 0.3, lam=0.05)  # g > lambda
    sol = stationary_amplitude(strong)
    flagged = not bogoliubov_params(strong, sol).weak_coupling_ok
    fine = FIG3_PARAMS
    sol2 = stationary_amplitude(fine)
    ok = bogoliubov_params(fine, sol2).weak_coupling_ok
    return _result(
        "meanfield.weak-coupling-flag",
        "validity flag raised outside g < lambda, clear at reference parameters",
        0.0,
        1.0,
        flagged and ok,
        f"flagged strong-coupling={flagged}, reference ok={ok}",
    )


def check_dyn_nuprime_invariance() -> CheckResult:
    grid = np.linspace(0.0, 25.0, 200)
    pa = ModelParams(1.0, 2.0, 0.1, 0.11, nu_prime=0.5)
    pb = ModelParams(1.0, 2.0, 0.1, 0.11, nu_prime=5.0)
    dev = float(np.max(np.abs(entropy_curve(pa, grid) - entropy_curve(pb, grid))))
    return _result(
        "dyn.nuprime-invariance",
        "S(t) identical for any initial coherent amplitude",
        dev,
        1e-12,
    )


def check_dyn_theta_zero() -> CheckResult:
    from .meanfield import BogoliubovParams

    bogo = BogoliubovParams(0.0, 0.5, -0.1, 0.5, 0.0, True)
    worst = 0.0
    for t in np.linspace(0.0, 20.0, 50):
        coeffs = heisenberg_coefficients(bogo, 1.3, float(t))
        state = covariance_from_coefficients(coeffs, nu_prime=0.4)
        mu = float(np.sqrt(np.linalg.det(state.reduced_block("a"))))
        from .dynamics import entropy_from_symplectic

        worst = max(worst, entropy_from_symplectic(mu), abs(coeffs.f_prime))
    return _result(
        "dyn.theta-zero",
        "no squeezing means no entanglement at any time",
        worst,
        1e-12,
    )


def check_dyn_gaussian_vs_fock_quick() -> CheckResult:
    params = FIG3_PARAMS
    _, bogo = prepare_superfluid(params)
    worst = 0.0
    for et in (0.5, 1.0):
        t = float(et / bogo.epsilon)
        worst = max(
            worst, abs(fock_dynamics_oracle(params, t, nu_prime=0.3) - entropy_curve(params, [t])[0])
        )
    return _result(
        "dyn.gaussian-vs-fock",
        "covariance-route entropy matches Fock propagation oracle",
        worst,
        1e-4,
    )


def check_cli_determinism() -> CheckResult:
    config = RunConfig(model=ModelParams(1.0, 1.2, 0.01, lam=0.1), jobs=1)
    columns, rows1 = sweeps.run_sbf_sweep(config, points=11)
    config2 = RunConfig(model=ModelParams(1.0, 1.2, 0.01, lam=0.1), jobs=2)
    _, rows2 = sweeps.run_sbf_sweep(config2, points=11)
    bufs = []
    for rows in (rows1, rows2):
        buf = io.StringIO()
        sweeps.write_csv(buf, columns, rows, config)
        bufs.append(buf.getvalue())
    identical = bufs[0] == bufs[1]
    return _result(
        "cli.determinism",
        "identical config produces byte-identical CSV across worker counts",
        0.0 if identical else 1.0,
        0.0,
        identical,
    )


# ---------------------------------------------------------------------------
# registry

QUICK_CHECKS: list[tuple[str, Callable[[], CheckResult]]] = [
    ("accept.ground-energy-formula", check_ground_energy_formula),
    ("accept.perturbation-scaling", check_perturbation_scaling),
    ("accept.meanfield-consistency", check_meanfield_consistency),
    ("accept.canonical-invariants", check_canonical_invariants),
    ("accept.short-time-sbf", check_short_time_sbf),
    ("fock.hermiticity", check_fock_hermiticity),
    ("fock.schmidt-vs-partial-trace", check_fock_schmidt_vs_trace),
    ("fock.propagate-norm-energy", check_fock_propagation),
    ("spectra.unitary-equivalence", check_spectra_unitary_equivalence),
    ("spectra.condensate-entropy-oracle", check_spectra_entropy_oracle),
    ("spectra.entropy-monotonic", check_spectra_monotonicity),
    ("spectra.normal-vacuum", check_spectra_normal_vacuum),
    ("meanfield.cubic-residual", check_meanfield_cubic),
    ("meanfield.superfluid-asymptotics", check_meanfield_superfluid_asymptotics),
    ("meanfield.normal-asymptotics", check_meanfield_normal_asymptotics),
    ("meanfield.weak-coupling-flag", check_meanfield_weak_coupling_flag),
    ("dyn.nuprime-invariance", check_dyn_nuprime_invariance),
    ("dyn.theta-zero", check_dyn_theta_zero),
    ("dyn.gaussian-vs-fock", check_dyn_gaussian_vs_fock_quick),
    ("cli.determinism", check_cli_determinism),
]

FULL_ONLY_CHECKS: list[tuple[str, Callable[[], CheckResult]]] = [
    ("accept.fig1-staircase", check_fig1_staircase),
    ("accept.fig2-properties", check_fig2_properties),
    ("accept.fig3-dynamics", check_fig3_dynamics),
    ("fock.cutoff-convergence", check_fock_cutoff_convergence),
    ("spectra.sector-reduction", check_spectra_sector_reduction),
    ("meanfield.entropy-oracle", check_meanfield_entropy_oracle),
]


def run_checks(level: str = "quick") -> list[CheckResult]:
    checks = list(QUICK_CHECKS)
    if level == "full":
        checks += FULL_ONLY_CHECKS
    results = []
    for _, fn in checks:
        results.append(fn())
    return results


def report_payload(results: list[CheckResult], level: str) -> dict:
    return {
        "level": level,
        "all_passed": all(r.passed for r in results),
        "results": [asdict(r) for r in results],
    }
