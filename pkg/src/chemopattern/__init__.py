"""Pattern-formation toolkit for the 1-D volume-filling chemotaxis model
with logistic growth: linear instability thresholds, cubic/quintic
Stuart-Landau amplitude equations, two-mode competition dynamics, a
finite-difference simulator of the full system, and a harness comparing
the asymptotic predictions against the simulated patterns."""

__version__ = "0.1.0"

from .model import (
    ModelParams,
    ParameterError,
    TRIVIAL_STEADY_STATE,
    UniformSteadyState,
    require_valid,
    uniform_steady_state,
    validate,
)
from .linear_stability import (
    ChiMinResult,
    DispersionReport,
    NoCriticalModeError,
    admissible_unstable_modes,
    chi_c,
    chi_critical_for_mode,
    chi_min,
    dispersion_g,
    dispersion_h,
    dispersion_report,
    growth_rate,
    k_c,
    most_unstable_mode,
    unstable_band,
)
from .amplitude import (
    BifurcationReport,
    ChiSNotFoundError,
    ExpansionSetup,
    LandauCoefficients,
    LinearEigenpair,
    ResonanceError,
    SolvabilityError,
    bifurcation_branches,
    chi_s,
    cubic_landau,
    eigenpair,
    quintic_landau,
    reconstruct_fourth_order,
    reconstruct_second_order,
    second_order_vectors,
    setup_expansion,
    solve_reduced,
    stationary_amplitude_cubic,
    stationary_amplitude_quintic,
)
from .competition import (
    CompetitionCoefficients,
    EquilibriumSet,
    basin_map,
    competition_coefficients,
    equilibria,
    integrate_amplitudes,
    reconstruct_two_mode,
)
from .pde import (
    FieldState,
    Grid1D,
    PatternMeasure,
    convergence_study,
    cosine_state,
    measure_pattern,
    mode_superposition_state,
    random_perturbation_state,
    rhs,
    run_to_steady,
    stable_dt,
    step,
    uniform_state,
)
