"""Three-tangle and three-pi for GHZ/W superpositions and their rank-2 mixtures."""

from .core import (
    GhzwMixture,
    GhzwRay,
    NumericalContractError,
    WeightedEnsemble,
    density,
    ensemble_density,
    make_ghz,
    make_w,
    mixture_density,
    partial_trace,
    partial_transpose_a,
    superpose,
    trace_norm,
)
from .measures import MeasureKind, measure_pure, pi_pure, tangle_closed, tangle_vector
from .oracle import SearchResult, oracle_search
from .roof import (
    CriticalPoints,
    build_decomposition,
    find_critical_points,
    pi_mixed_closed,
    roof_value,
    tangle_mixed_closed,
    verify_decomposition,
)

__version__ = "0.1.0"
