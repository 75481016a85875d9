import numpy as np
import pytest

from twomode.fock import FockCutoff, ground_state
from twomode.meanfield import (
    Branch,
    MeanFieldError,
    bogoliubov_params,
    ground_wavefunction,
    mean_field_energy,
    neglected_term_expectations,
    quadratic_alpha_hamiltonian,
    sbf_entropy_curve,
    squeezed_ground_entropy,
    squeezed_state,
    squeezing_cutoff,
    stationary_amplitude,
)
from twomode.model import ModelParams, rotate_alpha_vacuum

FIG3 = ModelParams(1.0, 2.0, 0.1, lam=0.11)


def cubic_roots_reference(params):
    """Independent root oracle: companion-matrix roots of the stationarity cubic."""
    c = params.omega - params.w + params.g
    roots = np.roots([2.0 * params.g, 0.0, c, -params.lam])
    return sorted(r.real for r in roots if abs(r.imag) < 1e-9)


class TestMeanFieldEnergy:
    def test_zero_amplitude(self):
        assert mean_field_energy(FIG3, 0.0) == 0.0

    def test_direct_evaluation(self):
        # term-by-term: (omega-w+g) nu^2 + g nu^4 - 2 lambda nu at nu = 2.18
        nu = 2.18
        expected = -0.9 * nu**2 + 0.1 * nu**4 - 2 * 0.11 * nu
        assert expected == pytest.approx(-2.4982294239999994)
        assert mean_field_energy(FIG3, nu) == pytest.approx(expected, abs=1e-14)

    def test_positive_coefficients_minimized_at_zero(self):
        params = ModelParams(1.0, 0.5, 0.01)
        grid = np.linspace(-2.0, 2.0, 1001)
        energies = [mean_field_energy(params, v) for v in grid]
        assert min(energies) == pytest.approx(0.0, abs=1e-12)
        assert stationary_amplitude(params).nu == pytest.approx(0.0, abs=1e-14)


class TestStationaryAmplitude:
    def test_normal_branch_root(self):
        params = ModelParams(1.0, 0.5, 0.01, lam=0.1)
        sol = stationary_amplitude(params)
        assert sol.branch is Branch.NORMAL
        ref = cubic_roots_reference(params)
        assert len(ref) == 1
        assert sol.nu == pytest.approx(ref[0], abs=1e-12)
        assert sol.nu == pytest.approx(0.19578413000761677, abs=1e-12)
        # leading-order amplitude lambda/(omega - w + g) = 0.19608
        assert sol.nu == pytest.approx(0.1 / 0.51, abs=4e-4)

    def test_superfluid_root_and_energy_ordering(self):
        sol = stationary_amplitude(FIG3)
        assert sol.branch is Branch.SUPERFLUID
        resid = -0.9 * sol.nu + 0.2 * sol.nu**3 - 0.11
        assert abs(resid) < 1e-12
        assert sol.nu == pytest.approx(2.179976222307879, abs=1e-12)
        ref = cubic_roots_reference(FIG3)
        assert len(ref) == 3
        assert len(sol.all_real_roots) == 3
        for mine, theirs in zip(sol.all_real_roots, ref):
            assert mine == pytest.approx(theirs, abs=1e-9)
        energies = [mean_field_energy(FIG3, r) for r in sol.all_real_roots]
        assert sol.e0 == pytest.approx(min(energies), abs=1e-12)

    def test_superfluid_asymptotic_formula(self):
        sol = stationary_amplitude(FIG3)
        nu_star = np.sqrt((2.0 - 1.0 - 0.1) / 0.2)
        approx = nu_star + 0.11 / (4 * 0.1 * nu_star**2)
        assert abs(sol.nu - approx) < 3e-3

    def test_zero_drive_superfluid_limit(self):
        params = ModelParams(1.0, 2.0, 0.1)
        sol = stationary_amplitude(params)
        assert sol.sign_degenerate
        assert sol.nu == pytest.approx(np.sqrt(4.5), abs=1e-15)

    def test_zero_drive_normal(self):
        sol = stationary_amplitude(ModelParams(1.0, 0.5, 0.01))
        assert sol.nu == 0.0
        assert not sol.sign_degenerate

    def test_critical_coefficient(self):
        # omega - w + g = 0: amplitude is the pure cube root
        params = ModelParams(1.0, 1.01, 0.01, lam=0.1)
        sol = stationary_amplitude(params)
        assert sol.nu == pytest.approx((0.1 / 0.02) ** (1 / 3), rel=1e-12)

    def test_residual_and_minimizer_randomized(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            params = ModelParams(
                1.0,
                float(rng.uniform(0.1, 3.0)),
                float(rng.uniform(0.004, 0.4)),
                lam=float(rng.uniform(0.0, 0.6)),
            )
            sol = stationary_amplitude(params)
            c = params.omega - params.w + params.g
            assert abs(c * sol.nu + 2 * params.g * sol.nu**3 - params.lam) < 1e-12
            ref = cubic_roots_reference(params)
            best_ref = min((mean_field_energy(params, r) for r in ref))
            assert mean_field_energy(params, sol.nu) <= best_ref + 1e-10


class TestBogoliubov:
    def test_reference_values(self):
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        nu = sol.nu
        assert bogo.a_coef == pytest.approx(0.11 / nu + 0.2 * nu * nu, abs=1e-14)
        assert bogo.b_coef == pytest.approx(0.1 * nu * nu, abs=1e-14)
        assert bogo.a_coef == pytest.approx(1.0009185319310925, abs=1e-12)
        assert bogo.b_coef == pytest.approx(0.47522963298277315, abs=1e-12)
        assert bogo.epsilon == pytest.approx(0.31379147742303065, abs=1e-12)
        assert bogo.theta == pytest.approx(-0.9137811422086126, abs=1e-12)
        assert bogo.zero_point == pytest.approx(-0.34356352725403094, abs=1e-12)
        assert bogo.weak_coupling_ok

    def test_quasiparticle_identity_on_grid(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            params = ModelParams(
                1.0,
                float(rng.uniform(1.2, 3.0)),
                float(rng.uniform(0.01, 0.2)),
                lam=float(rng.uniform(0.02, 0.5)),
            )
            sol = stationary_amplitude(params)
            bogo = bogoliubov_params(params, sol)
            assert bogo.epsilon**2 + 4 * bogo.b_coef**2 == pytest.approx(
                bogo.a_coef**2, rel=1e-12
            )
            assert np.tanh(2 * bogo.theta) == pytest.approx(
                -2 * bogo.b_coef / bogo.a_coef, abs=1e-12
            )

    def test_normal_branch_small_drive_limit(self):
        params = ModelParams(1.0, 0.5, 0.01, lam=1e-6)
        sol = stationary_amplitude(params)
        bogo = bogoliubov_params(params, sol)
        assert bogo.epsilon == pytest.approx(0.51, rel=1e-9)
        assert abs(bogo.b_coef) < 1e-12

    def test_zero_drive_refused(self):
        params = ModelParams(1.0, 2.0, 0.1)
        sol = stationary_amplitude(params)
        with pytest.raises(MeanFieldError, match="squeezing divergence"):
            bogoliubov_params(params, sol)


class TestQuadraticHamiltonian:
    def test_ed_matches_quasiparticle_data(self):
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        cutoff = squeezing_cutoff(bogo.theta)
        h = quadratic_alpha_hamiltonian(FIG3, sol, cutoff)
        vals = np.linalg.eigvalsh(h.entries)
        assert vals[0] == pytest.approx(bogo.zero_point, abs=1e-10)
        assert vals[1] - vals[0] == pytest.approx(bogo.epsilon, abs=1e-10)

    def test_ground_state_is_squeezed_vacuum(self):
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        cutoff = squeezing_cutoff(bogo.theta)
        gs = ground_state(quadratic_alpha_hamiltonian(FIG3, sol, cutoff))
        match = abs(np.vdot(squeezed_state(bogo.theta, cutoff), gs.state.amplitudes)) ** 2
        flipped = abs(np.vdot(squeezed_state(-bogo.theta, cutoff), gs.state.amplitudes)) ** 2
        # the generator sign follows the computed (negative) angle
        assert match >= 1.0 - 1e-8
        assert flipped < 0.9

    def test_weak_kerr_ground_is_vacuum(self):
        params = ModelParams(1.0, 0.5, 1e-7, lam=0.3)
        sol = stationary_amplitude(params)
        gs = ground_state(quadratic_alpha_hamiltonian(params, sol, FockCutoff(40)))
        assert abs(gs.state.amplitudes[0]) ** 2 > 1.0 - 1e-10


class TestSqueezedEntropy:
    def test_zero_angle(self):
        assert squeezed_ground_entropy(0.0) == 0.0

    def test_reference_value(self):
        assert squeezed_ground_entropy(-0.9137811422086126) == pytest.approx(
            0.5819929138242238, abs=1e-12
        )

    def test_even_in_angle(self):
        for theta in np.linspace(0.0, 2.5, 40):
            assert squeezed_ground_entropy(theta) == pytest.approx(
                squeezed_ground_entropy(-theta), rel=1e-13
            )

    def test_matches_rotated_ed_ground(self):
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        cutoff = squeezing_cutoff(bogo.theta)
        gs = ground_state(quadratic_alpha_hamiltonian(FIG3, sol, cutoff))
        sv = np.linalg.svd(rotate_alpha_vacuum(gs.state.amplitudes), compute_uv=False)
        p = sv**2
        p = p[p > 1e-14]
        s_ed = -np.sum(p * np.log(p))
        assert abs(s_ed - squeezed_ground_entropy(bogo.theta)) < 1e-6

    def test_grows_without_bound(self):
        assert squeezed_ground_entropy(6.0) > squeezed_ground_entropy(3.0) > 1.0


class TestGroundWavefunction:
    def test_vacuum_limit(self):
        from twomode.meanfield import BogoliubovParams, CondensateSolution

        sol = CondensateSolution(0.0, 0.0, Branch.NORMAL, (0.0,))
        bogo = BogoliubovParams(0.0, 1.0, 0.0, 1.0, 0.0, True)
        psi = ground_wavefunction(ModelParams(1.0, 0.5, 0.01, lam=0.0), sol, bogo)
        xs = np.linspace(-2, 2, 9)
        for x in xs:
            for y in xs:
                expected = np.exp(-0.5 * (x * x + y * y))
                assert psi(x, y, normalized=False) == pytest.approx(expected, rel=1e-12)

    def test_peak_at_negative_amplitude(self):
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        psi = ground_wavefunction(FIG3, sol, bogo)
        grid = np.linspace(-5, 5, 2001)
        values = psi(grid, grid, normalized=False)
        assert grid[np.argmax(values)] == pytest.approx(-sol.nu, abs=0.01)

    def test_moments_match_squeezing(self):
        # numerical quadrature oracle for the quadrature variances
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        psi = ground_wavefunction(FIG3, sol, bogo)
        grid = np.linspace(-14.0, 10.0, 1201)
        xa, xb = np.meshgrid(grid, grid, indexing="ij")
        weight = np.abs(psi(xa, xb)) ** 2
        dx = grid[1] - grid[0]
        total = np.sum(weight) * dx * dx
        assert total == pytest.approx(1.0, rel=1e-6)
        s = (xa + xb) / np.sqrt(2.0)
        d = (xa - xb) / np.sqrt(2.0)
        mean_s = np.sum(s * weight) * dx * dx
        var_s = np.sum((s - mean_s) ** 2 * weight) * dx * dx
        var_d = np.sum(d**2 * weight) * dx * dx
        assert var_s == pytest.approx(0.5 * np.exp(2 * bogo.theta), rel=1e-5)
        assert var_d == pytest.approx(0.5, rel=1e-5)
        assert mean_s == pytest.approx(-np.sqrt(2.0) * sol.nu, rel=1e-5)


class TestEntropyCurveAndDiagnostics:
    def test_smaller_drive_more_entanglement(self):
        w_values = np.linspace(1.05, 1.5, 10) * 1.01
        curve_01 = sbf_entropy_curve(ModelParams(1.0, 1.2, 0.01, lam=0.1), w_values)
        curve_03 = sbf_entropy_curve(ModelParams(1.0, 1.2, 0.01, lam=0.3), w_values)
        for (r1, s1), (r2, s2) in zip(curve_01, curve_03):
            assert r1 == pytest.approx(r2)
            assert s1 >= s2

    def test_deep_normal_entropy_tiny(self):
        curve = sbf_entropy_curve(ModelParams(1.0, 0.5, 0.01, lam=0.1), np.array([0.505]))
        assert curve[0][1] < 1e-3

    def test_neglected_terms_are_small(self):
        sol = stationary_amplitude(FIG3)
        bogo = bogoliubov_params(FIG3, sol)
        h3, h4 = neglected_term_expectations(FIG3, sol, squeezing_cutoff(bogo.theta))
        # cubic term vanishes by parity; quartic stays below the quadratic
        # scale A (the strong squeezing here keeps it a sizable fraction)
        assert h3 < 1e-10
        assert 0.0 < h4 < bogo.a_coef
