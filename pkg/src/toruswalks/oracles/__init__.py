"""Exact small-instance reference computations."""

from .enumerate_walks import SawEnsemble, enumerate_saw
from .high_temperature import (
    HighTemperatureEnsemble,
    enumerate_high_temperature,
    exact_ising_correlation,
    four_cycle_reference,
)
from .rllerw_exact import RllerwExact, enumerate_sa_paths, rllerw_absorption
from .srw import (
    OracleValue,
    SrwKernelTable,
    exact_kernel_series,
    exact_visit_counts,
    iter_walks,
    lattice_green_fourier,
    oracle_rlrw_two_point,
    oracle_rlrw_two_point_map,
    srw_convolve,
    srw_onaxis_pn,
    srw_return_probs,
)

__all__ = [
    "HighTemperatureEnsemble",
    "OracleValue",
    "RllerwExact",
    "SawEnsemble",
    "SrwKernelTable",
    "enumerate_high_temperature",
    "enumerate_sa_paths",
    "enumerate_saw",
    "exact_ising_correlation",
    "exact_kernel_series",
    "exact_visit_counts",
    "four_cycle_reference",
    "iter_walks",
    "lattice_green_fourier",
    "oracle_rlrw_two_point",
    "oracle_rlrw_two_point_map",
    "rllerw_absorption",
    "srw_convolve",
    "srw_onaxis_pn",
    "srw_return_probs",
]
