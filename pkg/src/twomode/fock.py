"""Truncated two-mode Fock space: ladder operators, Hermitian eigensolver,
state propagation, partial trace, and entanglement entropies.

Everything here is basis-level machinery; the single-mode basis is
|0>, ..., |n_max> and two-mode amplitudes are indexed row-major,
``index = n_a * (n_max + 1) + n_b``.  All entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh, expm_multiply
from scipy.special import gammaln

HERMITICITY_RTOL = 1e-12
STATE_NORM_ATOL = 1e-12
PROPAGATE_NORM_ATOL = 1e-10
EIG_RESIDUAL_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-12
ENTROPY_EIGENVALUE_CLAMP = 1e-14
TRACE_ATOL = 1e-8

# Dense eigensolver above this dimension is slower than Lanczos on the
# sparse Hamiltonians built here; sweeps at n_max ~ 45 hit dim ~ 2100.
DENSE_EIG_MAX_DIM = 600


class FockError(ValueError):
    """Invalid state, operator, or parameter in Fock-space machinery."""


class ConvergenceError(RuntimeError):
    """Eigensolver or propagator failed to reach its tolerance."""


@dataclass(frozen=True)
class FockCutoff:
    """Single-mode truncation |0>..|n_max>; two-mode dimension (n_max+1)^2."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise FockError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def dim_two_mode(self) -> int:
        return self.dim * self.dim

    def index(self, n_a: int, n_b: int) -> int:
        if not (0 <= n_a <= self.n_max and 0 <= n_b <= self.n_max):
            raise FockError(f"occupation ({n_a},{n_b}) outside cutoff {self.n_max}")
        return n_a * self.dim + n_b

    def bumped(self, extra: int = 10) -> "FockCutoff":
        return FockCutoff(self.n_max + extra)


@dataclass(frozen=True)
class ModeOperator:
    """Dense single-mode operator on the truncated basis."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (self.dim, self.dim):
            raise FockError("ModeOperator entries shape mismatch")

    @property
    def adjoint(self) -> "ModeOperator":
        return ModeOperator(self.dim, self.entries.conj().T)


@dataclass(frozen=True)
class TwoModeOperator:
    """Sparse two-mode operator; index convention matches PureState."""

    dim: int
    entries: sp.csr_matrix

    def __post_init__(self):
        if self.entries.shape != (self.dim, self.dim):
            raise FockError("TwoModeOperator entries shape mismatch")

    def element(self, row: int, col: int) -> complex:
        return complex(self.entries[row, col])

    def toarray(self) -> np.ndarray:
        return self.entries.toarray()


@dataclass(frozen=True)
class PureState:
    """Normalized two-mode state vector, index = n_a*(n_max+1) + n_b."""

    cutoff: FockCutoff
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (self.cutoff.dim_two_mode,):
            raise FockError("PureState amplitude length mismatch")
        nrm = np.linalg.norm(self.amplitudes)
        if abs(nrm - 1.0) > STATE_NORM_ATOL:
            raise FockError(f"PureState norm deviates by {abs(nrm - 1.0):.3e}")

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (n_a, n_b)."""
        return self.amplitudes.reshape(self.cutoff.dim, self.cutoff.dim)

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace reduced state."""

    entries: np.ndarray

    def __post_init__(self):
        m = self.entries
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise FockError("DensityMatrix must be square")
        if np.linalg.norm(m - m.conj().T) > 1e-10 * max(1.0, np.linalg.norm(m)):
            raise FockError("DensityMatrix not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise FockError(f"DensityMatrix trace deviates by {abs(tr - 1.0):.3e}")


@dataclass(frozen=True)
class _RawVectorState:
    """Normalized eigenvector of a single-mode operator (no 2-mode indexing)."""

    amplitudes: np.ndarray


@dataclass(frozen=True)
class GroundState:
    """Lowest eigenpair plus the gap and any degenerate partners.

    ``multiplet`` holds every eigenvector within ``degeneracy_tol`` of the
    lowest energy (at least the ground vector itself), so boundary cases
    expose the full degenerate space instead of one arbitrary member.
    """

    energy: float
    state: PureState | _RawVectorState
    gap: float
    multiplet: tuple[np.ndarray, ...]

    @property
    def degeneracy(self) -> int:
        return len(self.multiplet)


def ladder_operators(cutoff: FockCutoff) -> tuple[ModeOperator, ModeOperator, ModeOperator]:
    """Annihilation, creation, and number operators on the truncated basis.

    Truncation artifact (documented behavior): create|n_max> = 0, so the
    commutator [a, a^dag] equals the identity except for the (n_max, n_max)
    entry, which equals -n_max.
    """
    d = np.sqrt(np.arange(1, cutoff.dim, dtype=float))
    a = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
    a[np.arange(cutoff.dim - 1), np.arange(1, cutoff.dim)] = d
    n = np.diag(np.arange(cutoff.dim, dtype=float)).astype(complex)
    return (
        ModeOperator(cutoff.dim, a),
        ModeOperator(cutoff.dim, a.conj().T),
        ModeOperator(cutoff.dim, n),
    )


def identity_operator(cutoff: FockCutoff) -> ModeOperator:
    return ModeOperator(cutoff.dim, np.eye(cutoff.dim, dtype=complex))


def tensor(op_a: ModeOperator, op_b: ModeOperator) -> TwoModeOperator:
    """Kronecker product consistent with index = n_a*dim + n_b."""
    if op_a.dim != op_b.dim:
        raise FockError(f"tensor dims differ: {op_a.dim} vs {op_b.dim}")
    prod = sp.kron(sp.csr_matrix(op_a.entries), sp.csr_matrix(op_b.entries), format="csr")
    return TwoModeOperator(op_a.dim * op_b.dim, prod)


def basis_state(cutoff: FockCutoff, n_a: int, n_b: int) -> PureState:
    amp = np.zeros(cutoff.dim_two_mode, dtype=complex)
    amp[cutoff.index(n_a, n_b)] = 1.0
    return PureState(cutoff, amp)


def make_state(cutoff: FockCutoff, amplitudes: np.ndarray, normalize: bool = False) -> PureState:
    amp = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if normalize:
        nrm = np.linalg.norm(amp)
        if nrm == 0.0:
            raise FockError("cannot normalize the zero vector")
        amp = amp / nrm
    return PureState(cutoff, amp)


def _hermitian_deviation(mat) -> float:
    if sp.issparse(mat):
        diff = (mat - mat.conj().T).tocsr()
        num = sp.linalg.norm(diff)
        den = sp.linalg.norm(mat)
    else:
        num = np.linalg.norm(mat - mat.conj().T)
        den = np.linalg.norm(mat)
    return num / max(den, 1e-300)


def require_hermitian(op, rtol: float = HERMITICITY_RTOL) -> None:
    dev = _hermitian_deviation(op.entries)
    if dev > rtol:
        raise FockError(f"operator not Hermitian: relative deviation {dev:.3e}")


def _gershgorin_floor(csr: sp.csr_matrix) -> float:
    """Lower bound on the spectrum of a Hermitian sparse matrix."""
    diag = csr.diagonal().real
    absolute = sp.csr_matrix((np.abs(csr.data), csr.indices, csr.indptr), shape=csr.shape)
    row_sums = np.asarray(absolute.sum(axis=1)).ravel()
    return float((diag - (row_sums - np.abs(diag))).min())


def _lowest_eigenpairs(mat, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Lowest k eigenpairs of a Hermitian matrix.

    Dense below DENSE_EIG_MAX_DIM; above that, shift-invert Lanczos with the
    shift below the Gershgorin floor, so the eigenvalues nearest the shift
    are exactly the lowest ones.  (Plain smallest-algebraic Lanczos can
    mis-converge on these stiff spectra: an exact excited eigenvector in the
    Krylov space has zero residual and gets accepted.)
    """
    dim = mat.shape[0]
    k = min(k, dim)
    if dim <= DENSE_EIG_MAX_DIM:
        dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
        vals, vecs = np.linalg.eigh(dense)
        return vals[:k], vecs[:, :k]
    csr = sp.csr_matrix(mat)
    csr.eliminate_zeros()
    off_diag = csr - sp.diags(csr.diagonal(), format="csr")
    off_diag.eliminate_zeros()
    if off_diag.nnz == 0:
        # exactly diagonal (the number-conserving builders): eigenpairs are
        # basis vectors, including exact degenerate multiplets
        diag = csr.diagonal().real
        order = np.argsort(diag, kind="stable")[:k]
        vecs = np.zeros((dim, len(order)), dtype=complex)
        vecs[order, np.arange(len(order))] = 1.0
        return diag[order], vecs
    k_eff = min(max(k, 2), dim - 1)
    v0 = np.full(dim, 1.0 / np.sqrt(dim))
    sigma = _gershgorin_floor(csr) - 1.0
    try:
        vals, vecs = eigsh(
            csr, k=k_eff, sigma=sigma, which="LM", v0=v0, maxiter=max(4000, 40 * dim)
        )
    except Exception as exc:  # ArpackNoConvergence and friends
        raise ConvergenceError(f"shift-invert eigensolver failed: {exc}") from exc
    order = np.argsort(vals)
    vals, vecs = vals[order][:k], vecs[:, order][:, :k]
    # the minimum diagonal entry is an upper bound on the true ground energy
    floor_check = csr.diagonal().real.min()
    if vals[0] > floor_check + 1e-9 * max(1.0, abs(floor_check)):
        raise ConvergenceError(
            f"eigensolver missed the ground state: {vals[0]} > min diagonal {floor_check}"
        )
    return vals, vecs


def ground_state(
    op: TwoModeOperator | ModeOperator,
    k: int = 6,
    degeneracy_tol: float = 1e-9,
) -> GroundState:
    """Lowest eigenpair of a Hermitian operator, with gap and multiplet.

    Raises FockError on non-Hermitian input and ConvergenceError if the
    eigensolver cannot reach residual <= 1e-10 (relative to the matrix scale).
    """
    require_hermitian(op)
    mat = op.entries
    vals, vecs = _lowest_eigenpairs(mat, k)
    scale = max(1.0, float(abs(vals).max()))
    resid = np.linalg.norm(mat @ vecs[:, 0] - vals[0] * vecs[:, 0])
    if resid > EIG_RESIDUAL_TOL * scale:
        raise ConvergenceError(f"ground-state residual {resid:.3e} exceeds tolerance")

    e0 = float(vals[0])
    close = np.abs(vals - e0) <= degeneracy_tol * max(1.0, abs(e0))
    multiplet = tuple(vecs[:, i].copy() for i in range(len(vals)) if close[i])
    above = vals[~close]
    gap = float(above[0] - e0) if above.size else float("inf")

    if isinstance(op, TwoModeOperator):
        side = int(round(np.sqrt(mat.shape[0])))
        state: PureState | _RawVectorState = make_state(
            FockCutoff(side - 1), vecs[:, 0], normalize=True
        )
    else:
        state = _RawVectorState(vecs[:, 0] / np.linalg.norm(vecs[:, 0]))
    return GroundState(e0, state, gap, multiplet)


def propagate(op: TwoModeOperator, psi0: PureState, t: float) -> PureState:
    """exp(-i H t) psi0 via Krylov-stepped matrix exponential.

    Norm must be preserved to 1e-10 or ConvergenceError is raised; the
    returned state is not renormalized.
    """
    if not np.isfinite(t):
        raise FockError("propagation time must be finite")
    require_hermitian(op)
    if t == 0.0:
        return psi0
    mat = op.entries
    if mat.shape[0] <= DENSE_EIG_MAX_DIM:
        dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
        vals, vecs = np.linalg.eigh(dense)
        out = vecs @ (np.exp(-1j * vals * t) * (vecs.conj().T @ psi0.amplitudes))
    else:
        out = expm_multiply((-1j * t) * sp.csc_matrix(mat), psi0.amplitudes)
    drift = abs(np.linalg.norm(out) - 1.0)
    if drift > PROPAGATE_NORM_ATOL:
        raise ConvergenceError(f"propagation norm drift {drift:.3e}")
    return PureState(psi0.cutoff, out)


def expectation(op: TwoModeOperator, state: PureState) -> float:
    val = np.vdot(state.amplitudes, op.entries @ state.amplitudes)
    return float(val.real)


def coherent_amplitudes(z: complex, n_max: int) -> tuple[np.ndarray, float]:
    """Truncated single-mode coherent amplitudes and the weight beyond n_max.

    Computed in log space so large |z| and large n_max stay finite; the
    returned vector is renormalized to 1.
    """
    ns = np.arange(n_max + 1)
    if z == 0:
        amp = np.zeros(n_max + 1, dtype=complex)
        amp[0] = 1.0
        return amp, 0.0
    log_mod = ns * np.log(abs(z)) - 0.5 * gammaln(ns + 1.0) - 0.5 * abs(z) ** 2
    amp = np.exp(log_mod) * np.exp(1j * np.angle(z) * ns)
    kept = float(np.sum(np.abs(amp) ** 2))
    tail = max(0.0, 1.0 - kept)
    return amp / np.sqrt(kept), tail


def coherent_state(
    amplitude_a: complex, amplitude_b: complex, cutoff: FockCutoff
) -> tuple[PureState, float]:
    """Truncated two-mode coherent state |z_a>|z_b> and its truncation weight.

    Enforces |z|^2 <= n_max/4 per mode so the Poisson weight lost to
    truncation is negligible; violations raise FockError.
    """
    for z in (amplitude_a, amplitude_b):
        if abs(z) ** 2 > cutoff.n_max / 4.0:
            raise FockError(
                f"coherent amplitude |{z}|^2 = {abs(z)**2:.3f} exceeds n_max/4 = {cutoff.n_max / 4:.3f}"
            )
    amp_a, tail_a = coherent_amplitudes(amplitude_a, cutoff.n_max)
    amp_b, tail_b = coherent_amplitudes(amplitude_b, cutoff.n_max)
    joint = np.kron(amp_a, amp_b)
    tail = 1.0 - (1.0 - tail_a) * (1.0 - tail_b)
    return make_state(cutoff, joint, normalize=True), float(tail)


def partial_trace(state: PureState, keep: str) -> DensityMatrix:
    """Reduced density matrix of mode 'a' or mode 'b'."""
    m = state.as_matrix()
    if keep == "a":
        rho = m @ m.conj().T
    elif keep == "b":
        rho = m.T @ m.conj()
    else:
        raise FockError(f"keep must be 'a' or 'b', got {keep!r}")
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S = -sum p ln p over the spectrum, in nats.

    Eigenvalues below 1e-14 contribute zero; eigenvalues below -1e-12 or a
    trace off by more than 1e-8 indicate an invalid density matrix.
    """
    vals = np.linalg.eigvalsh(rho.entries)
    if vals.min() < EIGENVALUE_FLOOR:
        raise FockError(f"density matrix has eigenvalue {vals.min():.3e} < -1e-12")
    tr = float(vals.sum())
    if abs(tr - 1.0) > TRACE_ATOL:
        raise FockError(f"density matrix trace deviates by {abs(tr - 1.0):.3e}")
    p = vals[vals > ENTROPY_EIGENVALUE_CLAMP]
    return float(-np.sum(p * np.log(p)))


def entropy_of_probabilities(p: np.ndarray) -> float:
    """Shannon entropy in nats of a probability vector, clamping tiny weights."""
    p = np.asarray(p, dtype=float)
    p = p[p > ENTROPY_EIGENVALUE_CLAMP]
    return float(-np.sum(p * np.log(p)))


def schmidt_entropy(state: PureState) -> float:
    """Entanglement entropy from the singular values of the amplitude matrix.

    Independent route to the same number as von_neumann_entropy(partial_trace):
    the squared singular values are the reduced-state eigenvalues.
    """
    sv = np.linalg.svd(state.as_matrix(), compute_uv=False)
    return entropy_of_probabilities(sv**2)


def cutoff_scan(
    value_fn: Callable[[FockCutoff], tuple[float, ...]],
    cutoff: FockCutoff,
    bump: int = 10,
    tol: float = 1e-8,
) -> tuple[tuple[float, ...], bool, float]:
    """Evaluate value_fn at cutoff and cutoff+bump; flag convergence.

    Returns (values_at_base, converged, max_abs_change).  Any reported
    ground-state quantity should carry this flag.
    """
    base = tuple(value_fn(cutoff))
    again = tuple(value_fn(cutoff.bumped(bump)))
    delta = max(abs(x - y) for x, y in zip(base, again))
    return base, bool(delta < tol), float(delta)
