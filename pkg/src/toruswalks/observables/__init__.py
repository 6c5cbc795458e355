"""Streaming estimators with blocking/jackknife error analysis."""

from .accumulators import (
    BlockingLevel,
    BlockingResult,
    ECDFAccumulator,
    InsufficientData,
    MomentAccumulator,
    blocking_errors,
    ratio_jackknife,
)
from .fits import PowerLawFit, fit_power_law, fit_power_law_sweep
from .recording import RunAccumulators, record_walk
from .twopoint import (
    ENDPOINT,
    VISIT,
    TwoPointHistogram,
    radial_profile,
    rllerw_visit_two_point,
    unwrapped_two_point,
)

__all__ = [
    "ENDPOINT",
    "VISIT",
    "BlockingLevel",
    "BlockingResult",
    "ECDFAccumulator",
    "InsufficientData",
    "MomentAccumulator",
    "PowerLawFit",
    "RunAccumulators",
    "TwoPointHistogram",
    "blocking_errors",
    "fit_power_law",
    "fit_power_law_sweep",
    "radial_profile",
    "ratio_jackknife",
    "record_walk",
    "rllerw_visit_two_point",
    "unwrapped_two_point",
]
