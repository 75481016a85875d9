"""Two-mode Kerr photon condensate: spectra, mean-field squeezing, dynamics."""

from .fock import (
    ConvergenceError,
    DensityMatrix,
    FockCutoff,
    FockError,
    GroundState,
    ModeOperator,
    PureState,
    TwoModeOperator,
    basis_state,
    coherent_state,
    cutoff_scan,
    ground_state,
    ladder_operators,
    partial_trace,
    propagate,
    schmidt_entropy,
    tensor,
    von_neumann_entropy,
)
from .model import (
    ModelParams,
    Phase,
    PhaseClassification,
    ShiftBranch,
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
from .meanfield import (
    BogoliubovParams,
    Branch,
    CondensateSolution,
    MeanFieldError,
    bogoliubov_params,
    ground_wavefunction,
    mean_field_energy,
    quadratic_alpha_hamiltonian,
    sbf_entropy_curve,
    squeezed_ground_entropy,
    squeezed_state,
    stationary_amplitude,
)
from .dynamics import (
    EvolutionCoefficients,
    GaussianState,
    covariance_from_coefficients,
    dynamical_entropy,
    entropy_curve,
    evolved_wavefunction,
    fock_dynamics_oracle,
    heisenberg_coefficients,
    short_time_sbf_sensitivity,
    symplectic_eigenvalues,
)

__version__ = "0.1.0"
