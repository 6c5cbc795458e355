"""Monte Carlo walk ensembles on discrete tori.

Samples self-avoiding walks, worm (high-temperature Ising) configurations,
and random-length (loop-erased) random walks on d-dimensional tori; measures
walk-length laws, winding numbers, and unwrapped two-point functions; and
checks every estimator against exact small-instance oracles and closed-form
asymptotics.
"""

from .lattice import (
    LatticeError,
    LatticeWalk,
    TorusSpec,
    parity,
    unwrap,
    winding_number,
    wrap,
)
from .rng import RandomBlocks, chain_rng

__version__ = "0.1.0"

__all__ = [
    "LatticeError",
    "LatticeWalk",
    "RandomBlocks",
    "TorusSpec",
    "chain_rng",
    "parity",
    "unwrap",
    "winding_number",
    "wrap",
    "__version__",
]
