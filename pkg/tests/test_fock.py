import numpy as np
import pytest

from twomode.fock import (
    ConvergenceError,
    FockCutoff,
    FockError,
    ModeOperator,
    TwoModeOperator,
    basis_state,
    coherent_state,
    cutoff_scan,
    expectation,
    ground_state,
    identity_operator,
    ladder_operators,
    make_state,
    partial_trace,
    propagate,
    schmidt_entropy,
    tensor,
    von_neumann_entropy,
)
from twomode.model import ModelParams, build_hamiltonian_alphabeta, auto_cutoff

import scipy.sparse as sp


def test_ladder_action_cutoff_two():
    cutoff = FockCutoff(2)
    a, ad, n = ladder_operators(cutoff)
    vec = np.array([0.0, 0.0, 1.0], dtype=complex)
    out = a.entries @ vec
    assert np.allclose(out, [0.0, np.sqrt(2.0), 0.0])
    assert np.allclose(ad.entries, a.entries.conj().T)


def test_number_annihilates_vacuum():
    _, _, n = ladder_operators(FockCutoff(5))
    vac = np.zeros(6, dtype=complex)
    vac[0] = 1.0
    assert np.allclose(n.entries @ vac, 0.0)


def test_truncated_commutator():
    # [a, a^dag] = 1 except the top corner, which picks up -n_max
    n_max = 7
    a, ad, _ = ladder_operators(FockCutoff(n_max))
    comm = a.entries @ ad.entries - ad.entries @ a.entries
    expected = np.eye(n_max + 1, dtype=complex)
    expected[n_max, n_max] = -n_max
    assert np.allclose(comm, expected, atol=1e-14)


def test_number_eigenvalues():
    _, _, n = ladder_operators(FockCutoff(6))
    for k in range(7):
        vec = np.zeros(7)
        vec[k] = 1.0
        assert np.allclose(n.entries @ vec, k * vec)


class TestTensor:
    def test_identity_product(self):
        cutoff = FockCutoff(3)
        one = identity_operator(cutoff)
        prod = tensor(one, one)
        assert prod.dim == 16
        assert np.allclose(prod.toarray(), np.eye(16))

    def test_total_number_on_basis_state(self):
        cutoff = FockCutoff(4)
        one = identity_operator(cutoff)
        _, _, n = ladder_operators(cutoff)
        n_tot = tensor(n, one).entries + tensor(one, n).entries
        state = basis_state(cutoff, 2, 3)
        assert np.allclose(n_tot @ state.amplitudes, 5.0 * state.amplitudes)

    def test_annihilation_on_first_mode(self):
        cutoff = FockCutoff(2)
        a, _, _ = ladder_operators(cutoff)
        op = tensor(a, identity_operator(cutoff))
        out = op.entries @ basis_state(cutoff, 1, 0).amplitudes
        assert np.allclose(out, basis_state(cutoff, 0, 0).amplitudes)

    def test_dim_mismatch_rejected(self):
        with pytest.raises(FockError):
            tensor(identity_operator(FockCutoff(2)), identity_operator(FockCutoff(3)))


class TestGroundState:
    def test_free_hamiltonian_vacuum(self):
        cutoff = FockCutoff(6)
        one = identity_operator(cutoff)
        _, _, n = ladder_operators(cutoff)
        h = TwoModeOperator(
            cutoff.dim_two_mode,
            sp.csr_matrix(tensor(n, one).entries + tensor(one, n).entries),
        )
        gs = ground_state(h)
        assert gs.energy == pytest.approx(0.0, abs=1e-12)
        assert abs(gs.state.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)

    def test_condensate_eigenvalue(self):
        # rotated-basis Hamiltonian at a parameter point where the selected
        # occupation is 2: ground energy (omega - w)*2 + g*4 = -0.04
        params = ModelParams(1.0, 1.04, 0.01)
        h = build_hamiltonian_alphabeta(params, FockCutoff(25))
        gs = ground_state(h)
        assert gs.energy == pytest.approx(-0.04, abs=1e-12)

    def test_normal_phase_vacuum(self):
        params = ModelParams(1.0, 0.5, 0.01)
        h = build_hamiltonian_alphabeta(params, auto_cutoff(params))
        gs = ground_state(h)
        assert gs.energy == pytest.approx(0.0, abs=1e-12)
        assert abs(gs.state.amplitudes[0]) == pytest.approx(1.0, abs=1e-10)

    def test_reports_gap(self):
        params = ModelParams(1.0, 0.5, 0.01)
        h = build_hamiltonian_alphabeta(params, FockCutoff(10))
        gs = ground_state(h)
        assert gs.gap == pytest.approx(params.omega - params.w + params.g, abs=1e-12)

    def test_degenerate_multiplet_reported(self):
        # exact boundary: occupations 0 and 1 tie
        params = ModelParams(1.0, 1.01, 0.01)
        h = build_hamiltonian_alphabeta(params, auto_cutoff(params))
        gs = ground_state(h)
        assert gs.degeneracy == 2
        assert gs.gap == pytest.approx(0.02, abs=1e-10)

    def test_non_hermitian_rejected(self):
        bad = np.zeros((4, 4), dtype=complex)
        bad[0, 1] = 1.0
        with pytest.raises(FockError):
            ground_state(ModeOperator(4, bad))


class TestPropagate:
    def test_zero_time_identity(self):
        cutoff = FockCutoff(4)
        psi, _ = coherent_state(0.4, 0.2, cutoff)
        h = build_hamiltonian_alphabeta(ModelParams(1.0, 0.5, 0.01), cutoff)
        out = propagate(h, psi, 0.0)
        assert np.array_equal(out.amplitudes, psi.amplitudes)

    def test_number_phase(self):
        cutoff = FockCutoff(3)
        one = identity_operator(cutoff)
        _, _, n = ladder_operators(cutoff)
        h = TwoModeOperator(cutoff.dim_two_mode, sp.csr_matrix(tensor(n, one).entries))
        psi = basis_state(cutoff, 1, 0)
        out = propagate(h, psi, np.pi)
        assert out.amplitudes[cutoff.index(1, 0)] == pytest.approx(-1.0, abs=1e-12)

    def test_norm_and_energy_preserved(self):
        params = ModelParams(1.0, 1.04, 0.01, lam=0.05)
        cutoff = FockCutoff(16)
        from twomode.model import build_sbf_hamiltonian

        h = build_sbf_hamiltonian(params, cutoff)
        psi, _ = coherent_state(0.7, 0.4j, cutoff)
        e0 = expectation(h, psi)
        out = propagate(h, psi, 5.3)
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-10
        assert abs(expectation(h, out) - e0) < 1e-8 * max(1.0, abs(e0))

    def test_infinite_time_rejected(self):
        cutoff = FockCutoff(3)
        h = build_hamiltonian_alphabeta(ModelParams(1.0, 0.5, 0.01), cutoff)
        with pytest.raises(FockError):
            propagate(h, basis_state(cutoff, 0, 0), np.inf)


class TestCoherentState:
    def test_zero_amplitude_is_vacuum(self):
        state, tail = coherent_state(0.0, 0.0, FockCutoff(5))
        assert state.amplitudes[0] == pytest.approx(1.0)
        assert tail == 0.0

    def test_mean_photon_number(self):
        cutoff = FockCutoff(24)
        state, tail = coherent_state(1.0, 0.0, cutoff)
        one = identity_operator(cutoff)
        _, _, n = ladder_operators(cutoff)
        n_a = TwoModeOperator(cutoff.dim_two_mode, sp.csr_matrix(tensor(n, one).entries))
        assert expectation(n_a, state) == pytest.approx(1.0, abs=1e-10)
        assert tail < 1e-12

    def test_amplitude_cap_enforced(self):
        with pytest.raises(FockError):
            coherent_state(4.0, 0.0, FockCutoff(10))


class TestPartialTraceAndEntropy:
    def test_bell_like_state(self):
        cutoff = FockCutoff(1)
        amp = np.zeros(4, dtype=complex)
        amp[cutoff.index(0, 0)] = 1 / np.sqrt(2)
        amp[cutoff.index(1, 1)] = 1 / np.sqrt(2)
        state = make_state(cutoff, amp)
        rho = partial_trace(state, "a")
        assert np.allclose(rho.entries, 0.5 * np.eye(2), atol=1e-14)
        assert von_neumann_entropy(rho) == pytest.approx(np.log(2.0), abs=1e-12)

    def test_product_state_rank_one(self):
        state, _ = coherent_state(0.5, 0.9, FockCutoff(14))
        rho = partial_trace(state, "b")
        vals = np.sort(np.linalg.eigvalsh(rho.entries))[::-1]
        assert vals[0] == pytest.approx(1.0, abs=1e-10)
        assert vals[1] == pytest.approx(0.0, abs=1e-10)
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-9)

    def test_three_level_entropy(self):
        rho = np.diag([0.25, 0.5, 0.25]).astype(complex)
        from twomode.fock import DensityMatrix

        s = von_neumann_entropy(DensityMatrix(rho))
        assert s == pytest.approx(1.5 * np.log(2.0), abs=1e-12)

    def test_trace_deviation_rejected(self):
        from twomode.fock import DensityMatrix

        with pytest.raises(FockError):
            DensityMatrix(np.diag([0.6, 0.6]).astype(complex))


class TestSchmidtEntropy:
    def test_vacuum_zero(self):
        assert schmidt_entropy(basis_state(FockCutoff(2), 0, 0)) == 0.0

    def test_single_photon_bell(self):
        cutoff = FockCutoff(1)
        amp = np.zeros(4, dtype=complex)
        amp[cutoff.index(0, 1)] = 1 / np.sqrt(2)
        amp[cutoff.index(1, 0)] = 1 / np.sqrt(2)
        s = schmidt_entropy(make_state(cutoff, amp))
        assert s == pytest.approx(np.log(2.0), abs=1e-12)

    def test_matches_partial_trace_on_random_states(self):
        rng = np.random.default_rng(42)
        cutoff = FockCutoff(6)
        for _ in range(100):
            vec = rng.normal(size=cutoff.dim_two_mode) + 1j * rng.normal(
                size=cutoff.dim_two_mode
            )
            state = make_state(cutoff, vec, normalize=True)
            s_schmidt = schmidt_entropy(state)
            s_a = von_neumann_entropy(partial_trace(state, "a"))
            s_b = von_neumann_entropy(partial_trace(state, "b"))
            assert abs(s_schmidt - s_a) < 1e-10
            assert abs(s_schmidt - s_b) < 1e-10


def test_cutoff_scan_flags_convergence():
    params = ModelParams(1.0, 1.1, 0.01)

    def quantity(cutoff):
        gs = ground_state(build_hamiltonian_alphabeta(params, cutoff))
        return (gs.energy,)

    values, converged, delta = cutoff_scan(quantity, auto_cutoff(params))
    assert converged
    assert delta < 1e-12
    # a cutoff below the selected occupation cannot be converged
    values, converged, _ = cutoff_scan(quantity, FockCutoff(2))
    assert not converged


def test_pure_state_norm_validated():
    with pytest.raises(FockError):
        make_state(FockCutoff(1), np.array([1.0, 1.0, 0.0, 0.0]))
