"""Markov-chain and direct samplers for walk ensembles on the torus."""

from .berretti_sokal import BerrettiSokalChain, append_accept_prob, delete_accept_prob
from .laws import (
    Deterministic,
    Empirical,
    Geometric,
    LengthLaw,
    ScaledHalfNormal,
    complete_graph_law,
)
from .random_length import rllerw_sample, rlrw_sample
from .worm import WormChain, WormGraph, compute_sources, extract_ising_walk, extract_trail

__all__ = [
    "BerrettiSokalChain",
    "Deterministic",
    "Empirical",
    "Geometric",
    "LengthLaw",
    "ScaledHalfNormal",
    "WormChain",
    "WormGraph",
    "append_accept_prob",
    "complete_graph_law",
    "compute_sources",
    "delete_accept_prob",
    "extract_ising_walk",
    "extract_trail",
    "rllerw_sample",
    "rlrw_sample",
]
