"""Shifted-frame mean-field theory of the driven condensate.

Displacing the alpha mode by a real amplitude nu turns the driven
Hamiltonian into a constant E0(nu) = (omega-w+g) nu^2 + g nu^4 - 2 lambda nu
plus linear, quadratic, cubic, and quartic fluctuation terms.  Stationarity
of E0 (which also kills the linear term) fixes nu through the cubic

    (omega - w + g) nu + 2 g nu^3 - lambda = 0.

The retained quadratic theory is diagonalized by a Bogoliubov transformation
with squeezing angle theta and quasiparticle energy epsilon; its ground state
is a squeezed vacuum whose two-mode entanglement entropy has a closed form in
theta.  Cubic and quartic fluctuation terms are dropped from the diagonalized
theory (weak coupling) but can be evaluated as smallness diagnostics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fock import FockCutoff, ModeOperator, ladder_operators
from .model import ModelParams

CUBIC_RESIDUAL_TOL = 1e-12
# quasiparticle picture degrades as tanh(2 theta) -> -1 (lambda -> 0)
SQUEEZING_VALIDITY_MAX = 0.99


class MeanFieldError(ValueError):
    """Mean-field input outside the solvable regime."""


class Branch(enum.Enum):
    NORMAL = "normal"
    SUPERFLUID = "superfluid"


@dataclass(frozen=True)
class CondensateSolution:
    """Minimizing root of the stationarity cubic with its energy and branch."""

    nu: float
    e0: float
    branch: Branch
    all_real_roots: tuple[float, ...]
    # lambda = 0 in the superfluid branch: the minimum is degenerate under
    # nu -> -nu and only the lambda -> 0+ limit is represented
    sign_degenerate: bool = False


@dataclass(frozen=True)
class BogoliubovParams:
    """Squeezing angle, quasiparticle energy, and quadratic-form coefficients."""

    theta: float
    epsilon: float
    zero_point: float
    a_coef: float
    b_coef: float
    weak_coupling_ok: bool


def mean_field_energy(params: ModelParams, nu: float) -> float:
    """E0(nu) = (omega - w + g) nu^2 + g nu^4 - 2 lambda nu."""
    c = params.omega - params.w + params.g
    return float(c * nu * nu + params.g * nu**4 - 2.0 * params.lam * nu)


def _real_cubic_roots(c: float, two_g: float, lam: float) -> list[float]:
    """All real roots of two_g * x^3 + c * x - lam = 0 (closed form)."""
    p = c / two_g
    q = -lam / two_g
    if q == 0.0:
        roots = [0.0]
        if p < 0.0:
            r = np.sqrt(-p)
            roots.extend([r, -r])
        return roots
    if p == 0.0:
        return [float(np.cbrt(-q))]
    disc = -4.0 * p**3 - 27.0 * q**2
    if disc > 0.0:
        # three distinct real roots: trigonometric form
        m = 2.0 * np.sqrt(-p / 3.0)
        acos_arg = np.clip(3.0 * q / (p * m), -1.0, 1.0)
        phi = np.arccos(acos_arg) / 3.0
        return [float(m * np.cos(phi - 2.0 * np.pi * k / 3.0)) for k in range(3)]
    if disc == 0.0:
        return [float(3.0 * q / p), float(-3.0 * q / (2.0 * p))]
    # one real root: Cardano
    rad = np.sqrt(q * q / 4.0 + p**3 / 27.0)
    return [float(np.cbrt(-q / 2.0 + rad) + np.cbrt(-q / 2.0 - rad))]


def _stationarity_residual(params: ModelParams, nu: float) -> float:
    c = params.omega - params.w + params.g
    return c * nu + 2.0 * params.g * nu**3 - params.lam


def _polish_root(params: ModelParams, nu: float) -> float:
    c = params.omega - params.w + params.g
    for _ in range(50):
        f = _stationarity_residual(params, nu)
        if f == 0.0:
            break
        df = c + 6.0 * params.g * nu * nu
        if df == 0.0:
            break
        step = f / df
        nu -= step
        if abs(step) < 1e-17 * max(1.0, abs(nu)):
            break
    return nu


def stationary_amplitude(params: ModelParams) -> CondensateSolution:
    """Solve the stationarity cubic and return the E0-minimizing amplitude.

    All real roots are found in closed form and Newton-polished to residual
    <= 1e-12; the winner minimizes E0, with ties broken toward nu >= 0.
    Asymptotics: nu ~ lambda/(omega-w+g) on the normal branch and
    nu ~ nu* + lambda/(4 g nu*^2) on the superfluid branch.
    """
    c = params.omega - params.w + params.g
    raw = _real_cubic_roots(c, 2.0 * params.g, params.lam)
    polished = sorted(_polish_root(params, r) for r in raw)
    roots: list[float] = []
    for r in polished:
        if not roots or abs(r - roots[-1]) > 1e-9 * max(1.0, abs(r)):
            roots.append(r)
    scale = max(1.0, abs(params.lam), *(abs(c * r) for r in roots))
    for r in roots:
        resid = abs(_stationarity_residual(params, r))
        if resid > CUBIC_RESIDUAL_TOL * scale:
            raise MeanFieldError(f"cubic root residual {resid:.3e} at nu={r}")
    energies = [mean_field_energy(params, r) for r in roots]
    best = min(range(len(roots)), key=lambda i: (energies[i], -np.sign(roots[i])))
    nu = roots[best]
    sign_degenerate = params.lam == 0.0 and c < 0.0
    if sign_degenerate:
        nu = abs(nu) if abs(nu) > 0 else nu
        # represent the lambda -> 0+ limit: nu = nu* exactly
        nu = float(np.sqrt(-c / (2.0 * params.g)))
    branch = Branch.SUPERFLUID if c < 0.0 else Branch.NORMAL
    return CondensateSolution(
        float(nu), mean_field_energy(params, nu), branch, tuple(roots), sign_degenerate
    )


def bogoliubov_params(params: ModelParams, solution: CondensateSolution) -> BogoliubovParams:
    """Diagonalization data of the quadratic fluctuation Hamiltonian.

    A = lambda/nu + 2 g nu^2 and B = g nu^2 give tanh(2 theta) = -2B/A,
    epsilon = sqrt(A^2 - 4 B^2) and zero-point energy (epsilon - A)/2.
    Requires nu > 0 and lambda > 0: at lambda = 0 in the superfluid branch
    tanh(2 theta) -> -1 and the squeezing diverges (free-diffusion limit).
    """
    if solution.nu <= 0.0:
        raise MeanFieldError(f"Bogoliubov parameters need nu > 0, got {solution.nu}")
    if params.lam <= 0.0:
        raise MeanFieldError(
            "squeezing divergence: tanh 2theta -> -1 at lambda = 0 "
            "(free-diffusion limit); use lambda > 0"
        )
    nu = solution.nu
    a_coef = params.lam / nu + 2.0 * params.g * nu * nu
    b_coef = params.g * nu * nu
    ratio = 2.0 * b_coef / a_coef
    epsilon = float(np.sqrt((params.lam / nu) * (params.lam / nu + 4.0 * params.g * nu * nu)))
    theta = float(0.5 * np.arctanh(-ratio))
    zero_point = 0.5 * (epsilon - a_coef)
    ok = (params.g < params.lam) and (ratio <= SQUEEZING_VALIDITY_MAX)
    return BogoliubovParams(theta, epsilon, float(zero_point), float(a_coef), float(b_coef), ok)


def quadratic_alpha_hamiltonian(
    params: ModelParams, solution: CondensateSolution, cutoff: FockCutoff
) -> ModeOperator:
    """(lambda/nu) n + g nu^2 (2 n + a^dag^2 + a^2) in the shifted frame.

    Its exact ground energy is the Bogoliubov zero-point energy and its
    ground state is the squeezed vacuum with angle theta.
    """
    if solution.nu <= 0.0:
        raise MeanFieldError("quadratic Hamiltonian needs nu > 0")
    a, ad, n = ladder_operators(cutoff)
    nu = solution.nu
    h = (params.lam / nu) * n.entries + params.g * nu * nu * (
        2.0 * n.entries + ad.entries @ ad.entries + a.entries @ a.entries
    )
    return ModeOperator(cutoff.dim, h)


def squeezed_state(theta: float, cutoff: FockCutoff) -> np.ndarray:
    """Squeezed vacuum exp[(theta/2)(a^dag^2 - a^2)] |0> on the truncated basis."""
    a, ad, _ = ladder_operators(cutoff)
    gen = 0.5 * theta * (ad.entries @ ad.entries - a.entries @ a.entries)
    vec = expm(gen)[:, 0]
    return vec / np.linalg.norm(vec)


def squeezing_cutoff(theta: float) -> FockCutoff:
    """Truncation comfortably beyond the squeezed vacuum's pair tail."""
    t = abs(np.tanh(theta))
    if t < 1e-6:
        return FockCutoff(48)
    # pair amplitudes fall off as tanh^(2m); demand the tail below ~1e-13
    pairs = int(np.ceil(30.0 / max(-np.log(t), 0.02)))
    return FockCutoff(max(48, 2 * pairs + 16))


def squeezed_ground_entropy(theta: float) -> float:
    """Entanglement entropy (nats) between a and b of the squeezed ground state.

    S = cosh^2(theta/2) ln cosh^2(theta/2) - sinh^2(theta/2) ln sinh^2(theta/2);
    even in theta, zero at theta = 0, divergent as |theta| -> infinity.
    """
    sh2 = float(np.sinh(0.5 * theta) ** 2)
    ch2 = 1.0 + sh2
    if sh2 < 1e-300:
        return 0.0
    return float(ch2 * np.log(ch2) - sh2 * np.log(sh2))


@dataclass(frozen=True)
class GroundWavefunction:
    """Position-space ground state around the displaced condensate.

    Unnormalized form exp{ -(e^(-2 theta)/4) [(x_a + x_b) + 2 nu]^2
    - (1/4)(x_a - x_b)^2 }, peaked at x_a = x_b = -nu; ``norm_constant``
    makes the squared integral one.  The displacement is local and does
    not affect the entanglement entropy.
    """

    theta: float
    nu: float
    norm_constant: float

    def __call__(self, x_a, x_b, normalized: bool = True):
        x_a = np.asarray(x_a, dtype=float)
        x_b = np.asarray(x_b, dtype=float)
        s = x_a + x_b + 2.0 * self.nu
        d = x_a - x_b
        val = np.exp(-0.25 * np.exp(-2.0 * self.theta) * s * s - 0.25 * d * d)
        return self.norm_constant * val if normalized else val


def ground_wavefunction(
    params: ModelParams, solution: CondensateSolution, bogo: BogoliubovParams
) -> GroundWavefunction:
    """Evaluable ground-state wavefunction with its normalization constant."""
    # integral of |psi|^2 over the plane is pi * e^theta
    norm = float((np.pi * np.exp(bogo.theta)) ** -0.5)
    return GroundWavefunction(bogo.theta, solution.nu, norm)


def sbf_entropy_curve(
    params: ModelParams, w_values: np.ndarray
) -> list[tuple[float, float]]:
    """(w/(omega+g), entropy) along a transfer-strength sweep at fixed drive."""
    out = []
    for w in np.asarray(w_values, dtype=float):
        p = ModelParams(params.omega, float(w), params.g, params.lam, params.nu_prime)
        sol = stationary_amplitude(p)
        bogo = bogoliubov_params(p, sol)
        ratio = w / (p.omega + p.g)
        out.append((float(ratio), squeezed_ground_entropy(bogo.theta)))
    return out


def neglected_term_expectations(
    params: ModelParams, solution: CondensateSolution, cutoff: FockCutoff
) -> tuple[float, float]:
    """|<H3>| and |<H4>| in the squeezed ground state (smallness diagnostics).

    These fluctuation terms are never included in the diagonalized theory;
    with the beta mode in vacuum only the alpha-sector pieces contribute:
    2 g nu (a^dag n + n a) for the cubic and g a^dag^2 a^2 for the quartic.
    """
    bogo = bogoliubov_params(params, solution)
    vec = squeezed_state(bogo.theta, cutoff)
    a, ad, n = ladder_operators(cutoff)
    cubic_op = 2.0 * params.g * solution.nu * (ad.entries @ n.entries + n.entries @ a.entries)
    quartic_op = params.g * (ad.entries @ ad.entries @ a.entries @ a.entries)
    h3 = abs(np.vdot(vec, cubic_op @ vec))
    h4 = abs(np.vdot(vec, quartic_op @ vec))
    return float(h3), float(h4)
