"""Higher-order intensity correlations of thermal light at magic detector positions.

Three independent routes to the same N00N-like fringes: explicit quantum-path
summation, the permanent of the mutual coherence matrix, and pseudothermal
speckle Monte Carlo; plus a truncated Fock-space module for the projected
N00N-like state behind them.
"""

from .analytic import (
    Setup2Coefficients,
    crossover_threshold,
    setup1_coeffs,
    setup1_curve,
    setup1_g,
    setup1_visibility,
    setup2_coeffs,
    setup2_curve,
    setup2_g,
    setup2_visibility,
)
from .curves import CorrelationCurve, default_grid
from .errors import (
    AccumulatorOverflowError,
    CapacityError,
    NumericalError,
    TruncationError,
    ZeroProbabilityError,
)
from .fockstate import (
    IsomorphismReport,
    TwoModeDensityMatrix,
    default_cutoff,
    g_detectors,
    g_moving,
    noon_overlap,
    noon_state,
    project_magic,
    thermal_two_mode,
    verify_isomorphism,
)
from .geometry import (
    DetectorLayout,
    SourceArray,
    magic_positions,
    moving_magic_positions,
    phase_from_angle,
    reduce_phase,
)
from .pathsum import (
    coherence_matrix,
    correlation_pathsum,
    correlation_permanent,
    enumerate_partitions,
    multiset_phase_sum,
)
from .speckle import (
    ConvergenceReport,
    FitResult,
    SpeckleConfig,
    convergence_probe,
    dominant_frequency,
    fit_cosine,
    simulate_curve,
)

__version__ = "0.1.0"

__all__ = [
    "AccumulatorOverflowError",
    "CapacityError",
    "ConvergenceReport",
    "CorrelationCurve",
    "DetectorLayout",
    "FitResult",
    "IsomorphismReport",
    "NumericalError",
    "Setup2Coefficients",
    "SourceArray",
    "SpeckleConfig",
    "TruncationError",
    "TwoModeDensityMatrix",
    "ZeroProbabilityError",
    "coherence_matrix",
    "convergence_probe",
    "correlation_pathsum",
    "correlation_permanent",
    "crossover_threshold",
    "default_cutoff",
    "default_grid",
    "dominant_frequency",
    "enumerate_partitions",
    "fit_cosine",
    "g_detectors",
    "g_moving",
    "magic_positions",
    "moving_magic_positions",
    "multiset_phase_sum",
    "noon_overlap",
    "noon_state",
    "phase_from_angle",
    "project_magic",
    "reduce_phase",
    "setup1_coeffs",
    "setup1_curve",
    "setup1_g",
    "setup1_visibility",
    "setup2_coeffs",
    "setup2_curve",
    "setup2_g",
    "setup2_visibility",
    "simulate_curve",
    "thermal_two_mode",
    "verify_isomorphism",
]
