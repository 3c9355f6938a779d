"""Simulator of a dc SQUID artificial atom coupled to single-mode radiation.

Integrates the chirped four-level amplitude equations and derives the
population, entanglement-of-formation and l1-coherence dynamics of the
twin-photon generation and entanglement-transfer protocols, plus a
three-level cascade check of the effective two-photon coupling.
"""

from .dynamics import (
    ModelParams,
    Trajectory,
    chirped_frequency,
    coefficient_matrix,
    integrate,
    phase_r,
    rhs,
)
from .errors import (
    ConfigError,
    IntegrationError,
    NormalizationError,
    NumericalValidityError,
    ScenarioIncompleteError,
    SquidSimError,
    StabilityError,
)
from .integrator import IntegratorConfig, solve
from .ladder import (
    LadderComparison,
    LadderParams,
    LadderTrajectory,
    compare_effective_vs_full,
    measured_rabi_rate,
    simulate_ladder_effective,
    simulate_ladder_full,
)
from .measures import (
    concurrence,
    concurrence_hermitian,
    entanglement_of_formation,
    eof_from_concurrence,
    l1_coherence,
    populations,
)
from .scenarios import (
    MeasureTable,
    PAIR_GENERATION_PARAMS,
    ScenarioReport,
    TRANSFER_PARAMS,
    compute_measures,
    find_crossings,
    find_peaks,
    run_entanglement_transfer,
    run_pair_generation,
)
from .states import (
    Amplitudes,
    BASIS_LABELS,
    Factor,
    PairDensityMatrix,
    norm,
    partial_trace,
)

__version__ = "0.1.0"

__all__ = [
    "Amplitudes",
    "BASIS_LABELS",
    "ConfigError",
    "Factor",
    "IntegrationError",
    "IntegratorConfig",
    "LadderComparison",
    "LadderParams",
    "LadderTrajectory",
    "MeasureTable",
    "ModelParams",
    "NormalizationError",
    "NumericalValidityError",
    "PAIR_GENERATION_PARAMS",
    "PairDensityMatrix",
    "ScenarioIncompleteError",
    "ScenarioReport",
    "SquidSimError",
    "StabilityError",
    "TRANSFER_PARAMS",
    "Trajectory",
    "chirped_frequency",
    "coefficient_matrix",
    "compare_effective_vs_full",
    "compute_measures",
    "concurrence",
    "concurrence_hermitian",
    "entanglement_of_formation",
    "eof_from_concurrence",
    "find_crossings",
    "find_peaks",
    "integrate",
    "l1_coherence",
    "measured_rabi_rate",
    "norm",
    "partial_trace",
    "phase_r",
    "populations",
    "rhs",
    "run_entanglement_transfer",
    "run_pair_generation",
    "simulate_ladder_effective",
    "simulate_ladder_full",
    "solve",
    "__version__",
]
