"""Two-mode Kerr model: Hamiltonians, phase classification, and closed forms.

The model couples two degenerate photon modes (a, b) of frequency omega with
a transfer term of strength w and a Kerr term g*(total number)^2.  The 50/50
rotation alpha=(a+b)/sqrt(2), beta=(a-b)/sqrt(2) removes the transfer term and
makes the lambda=0 Hamiltonian number-diagonal, with single-sector energies
E_n = (omega-w)*n + g*n^2.  A symmetry-breaking field couples linearly to the
alpha mode with amplitude lambda.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm
from scipy.special import gammaln

from .fock import (
    FockCutoff,
    FockError,
    PureState,
    TwoModeOperator,
    entropy_of_probabilities,
    identity_operator,
    ladder_operators,
    make_state,
    tensor,
)

# Tie tolerance (relative) for the nearest-integer classification and the
# exact-boundary detection on (w - omega) / (2g).
BOUNDARY_RTOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: mode frequency, transfer, Kerr, drive, initial amplitude."""

    omega: float
    w: float
    g: float
    lam: float = 0.0
    nu_prime: float = 0.0

    def __post_init__(self):
        vals = (self.omega, self.w, self.g, self.lam, self.nu_prime)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("all model parameters must be finite")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.w < 0:
            raise ValueError(f"w must be >= 0, got {self.w}")
        if self.g <= 0:
            # g = 0 leaves the w > omega sector unbounded from below
            raise ValueError(f"g must be > 0, got {self.g}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.nu_prime < 0:
            raise ValueError(f"nu_prime must be >= 0, got {self.nu_prime}")

    @property
    def detuning_ratio(self) -> float:
        """(w - omega) / (2g): occupation selector for the condensate phase."""
        return (self.w - self.omega) / (2.0 * self.g)


class Phase(enum.Enum):
    NORMAL = "normal"
    CONDENSATE = "condensate"
    DEGENERATE_BOUNDARY = "degenerate_boundary"


@dataclass(frozen=True)
class PhaseClassification:
    phase: Phase
    n_alpha: int
    ground_energy: float
    # boundary cases carry both tied occupations; otherwise (n_alpha,)
    candidates: tuple[int, ...]


def single_mode_energy(params: ModelParams, n: int | np.ndarray):
    """Energy of |n> in the alpha sector (beta in vacuum): (omega-w)n + g n^2."""
    return (params.omega - params.w) * n + params.g * np.square(n)


def classify_phase(params: ModelParams) -> PhaseClassification:
    """Phase of the lambda=0 ground state.

    Normal for omega > w (vacuum, energy 0).  Otherwise the ground state is
    the alpha Fock state whose occupation is the integer nearest to
    (w - omega)/(2g); an exact half-odd-integer ratio (within 1e-9 relative)
    is a degenerate boundary and both tied occupations are reported.
    """
    if params.omega - params.w > 0:
        return PhaseClassification(Phase.NORMAL, 0, 0.0, (0,))
    delta = params.detuning_ratio
    n_lo = int(np.floor(delta))
    if abs(delta - (n_lo + 0.5)) <= BOUNDARY_RTOL * max(1.0, abs(delta)):
        energy = float(single_mode_energy(params, n_lo))
        return PhaseClassification(
            Phase.DEGENERATE_BOUNDARY, n_lo, energy, (n_lo, n_lo + 1)
        )
    n_alpha = int(np.floor(delta + 0.5))
    energy = float(single_mode_energy(params, n_alpha))
    return PhaseClassification(Phase.CONDENSATE, n_alpha, energy, (n_alpha,))


def auto_cutoff(params: ModelParams, nu: float = 0.0) -> FockCutoff:
    """Default truncation: generous headroom over the selected occupation."""
    terms = [30]
    if nu > 0:
        terms.append(4 * int(np.ceil(nu * nu)))
    if params.w > params.omega:
        terms.append(int(np.ceil(params.detuning_ratio)) + 20)
    return FockCutoff(max(terms))


def build_hamiltonian_ab(params: ModelParams, cutoff: FockCutoff) -> TwoModeOperator:
    """omega*(n_a + n_b) - w*(a^dag b + b^dag a) + g*(n_a + n_b)^2."""
    a, ad, n = ladder_operators(cutoff)
    one = identity_operator(cutoff)
    n_tot = (tensor(n, one).entries + tensor(one, n).entries).tocsr()
    transfer = (
        tensor(ad, a).entries + tensor(a, ad).entries
    ).tocsr()
    h = params.omega * n_tot - params.w * transfer + params.g * (n_tot @ n_tot)
    return TwoModeOperator(cutoff.dim_two_mode, h.tocsr())


def build_hamiltonian_alphabeta(params: ModelParams, cutoff: FockCutoff) -> TwoModeOperator:
    """(omega-w)*n_alpha + (omega+w)*n_beta + g*(n_alpha + n_beta)^2.

    Number-diagonal at lambda=0; the matrix is diagonal in this basis.
    """
    _, _, n = ladder_operators(cutoff)
    one = identity_operator(cutoff)
    n_a = tensor(n, one).entries
    n_b = tensor(one, n).entries
    n_tot = (n_a + n_b).tocsr()
    h = (params.omega - params.w) * n_a + (params.omega + params.w) * n_b + params.g * (
        n_tot @ n_tot
    )
    return TwoModeOperator(cutoff.dim_two_mode, h.tocsr())


def build_sbf_hamiltonian(params: ModelParams, cutoff: FockCutoff) -> TwoModeOperator:
    """Rotated-basis Hamiltonian with the drive: H - lambda*(alpha^dag + alpha)."""
    base = build_hamiltonian_alphabeta(params, cutoff)
    if params.lam == 0.0:
        return base
    a, ad, _ = ladder_operators(cutoff)
    one = identity_operator(cutoff)
    drive = (tensor(ad, one).entries + tensor(a, one).entries).tocsr()
    return TwoModeOperator(cutoff.dim_two_mode, (base.entries - params.lam * drive).tocsr())


@lru_cache(maxsize=16)
def _beam_splitter_sectors(n_max: int) -> tuple[tuple[int, np.ndarray], ...]:
    """Per-total-photon-number blocks of exp(-(pi/4)(a^dag b - b^dag a)).

    The generator conserves n_a + n_b, so the unitary factorizes over
    sectors; each block is a real orthogonal matrix over occupations
    k in [max(0, N - n_max), min(N, n_max)] of the first mode.
    """
    blocks = []
    for total in range(2 * n_max + 1):
        k_min = max(0, total - n_max)
        k_max = min(total, n_max)
        size = k_max - k_min + 1
        gen = np.zeros((size, size))
        for i, k in enumerate(range(k_min, k_max)):
            # <k+1, N-k-1| (a^dag b) |k, N-k> = sqrt((k+1)(N-k))
            val = np.sqrt((k + 1) * (total - k))
            gen[i + 1, i] = val
            gen[i, i + 1] = -val
        blocks.append((k_min, expm(-(np.pi / 4.0) * gen)))
    return tuple(blocks)


def rotate_modes(state: PureState, inverse: bool = False) -> PureState:
    """Map amplitudes between the (alpha, beta) and (a, b) occupation bases.

    Forward: input amplitudes indexed by (n_alpha, n_beta) produce the same
    physical state indexed by (n_a, n_b) under alpha=(a+b)/sqrt(2),
    beta=(a-b)/sqrt(2).  ``inverse=True`` applies the inverse map.  The map
    is exactly unitary on the truncated space (sector-wise orthogonal).
    """
    n_max = state.cutoff.n_max
    dim = state.cutoff.dim
    blocks = _beam_splitter_sectors(n_max)
    amp = state.as_matrix().copy()
    if not inverse:
        # parity phase on the second input mode, then the sector rotation
        amp[:, 1::2] *= -1.0
    out = np.zeros_like(amp)
    for total in range(2 * n_max + 1):
        k_min, block = blocks[total]
        ks = np.arange(k_min, min(total, n_max) + 1)
        vec = amp[ks, total - ks]
        rotated = block @ vec if not inverse else block.T @ vec
        out[ks, total - ks] = rotated
    if inverse:
        out[:, 1::2] *= -1.0
    return make_state(state.cutoff, out.reshape(-1))


def rotate_alpha_vacuum(alpha_amplitudes: np.ndarray) -> np.ndarray:
    """(a, b) amplitude matrix of (vector in alpha) x (vacuum in beta).

    Exact closed form: |n, 0> maps to sum_k sqrt(C(n, k)/2^n) |k, n-k>,
    evaluated with log-gamma so large occupations stay finite.  Much faster
    than the general rotation for this common oracle-path shape.
    """
    c = np.asarray(alpha_amplitudes, dtype=complex)
    size = c.size
    out = np.zeros((size, size), dtype=complex)
    for total in range(size):
        ks = np.arange(total + 1)
        log_coef = 0.5 * (
            gammaln(total + 1.0) - gammaln(ks + 1.0) - gammaln(total - ks + 1.0)
        ) - 0.5 * total * np.log(2.0)
        out[ks, total - ks] += c[total] * np.exp(log_coef)
    return out


def fock_condensate_entropy(n_alpha: int) -> float:
    """Entanglement entropy (nats) of the alpha Fock condensate between a and b.

    The reduced state is the symmetric binomial distribution over n_alpha
    quanta; evaluated with log-gamma so it stays stable for n_alpha >~ 50.
    """
    if n_alpha < 0:
        raise ValueError(f"n_alpha must be >= 0, got {n_alpha}")
    if n_alpha == 0:
        return 0.0
    ks = np.arange(n_alpha + 1)
    log_p = (
        gammaln(n_alpha + 1.0)
        - gammaln(ks + 1.0)
        - gammaln(n_alpha - ks + 1.0)
        - n_alpha * np.log(2.0)
    )
    return float(-np.sum(np.exp(log_p) * log_p))


class ShiftBranch(enum.Enum):
    NORMAL_SECOND_ORDER = "normal_second_order"
    CONDENSATE_SECOND_ORDER = "condensate_second_order"
    DEGENERATE_FIRST_ORDER = "degenerate_first_order"


@dataclass(frozen=True)
class PerturbativeShift:
    delta_e: float
    branch: ShiftBranch
    valid: bool


def perturbative_energy_shift(params: ModelParams) -> PerturbativeShift:
    """Small-lambda ground-energy shift of the driven Hamiltonian.

    Normal phase: -lambda^2/(omega - w + g).  Condensate away from the
    boundary: second-order sum over the two neighbors of the selected
    occupation, which reduces to -lambda^2 (2 n_alpha + 1)/g exactly when
    (w - omega)/(2g) is an integer.  At a degenerate boundary the shift is
    first order, -lambda * sqrt(n_alpha + 1) from the 2x2 tied block.

    The validity flag is False once lambda >= g: there the level spread of
    the linear drive exceeds the Kerr gap and the perturbative treatment
    breaks down (mean-field territory).
    """
    lam = params.lam
    valid = lam < params.g
    cls = classify_phase(params)
    if cls.phase is Phase.NORMAL:
        delta = -(lam**2) / (params.omega - params.w + params.g)
        return PerturbativeShift(float(delta), ShiftBranch.NORMAL_SECOND_ORDER, valid)
    if cls.phase is Phase.DEGENERATE_BOUNDARY:
        delta = -lam * np.sqrt(cls.n_alpha + 1.0)
        return PerturbativeShift(float(delta), ShiftBranch.DEGENERATE_FIRST_ORDER, valid)
    n = cls.n_alpha
    e_n = single_mode_energy(params, n)
    terms = (n + 1) / (e_n - single_mode_energy(params, n + 1))
    if n >= 1:
        terms += n / (e_n - single_mode_energy(params, n - 1))
    delta = lam**2 * terms
    return PerturbativeShift(float(delta), ShiftBranch.CONDENSATE_SECOND_ORDER, valid)
