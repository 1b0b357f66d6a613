"""Metric projections onto the cone of power series with non-negative coefficients."""

from .cone import (
    ConeProblem,
    ExplicitMoments,
    GeneratorFamily,
    Indicator,
    Interval,
    MonotoneStep,
    Power,
    PowerMixture,
    SignedPower,
    Stride,
)
from .projector import (
    ActiveSetSolution,
    distance,
    exhaustive_oracle,
    nnls_active_set,
    solve_for_active_set,
    verify_candidate,
)

__version__ = "0.1.0"
