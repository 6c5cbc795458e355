"""Distributions of the random walk length N.

Each law exposes sampling plus the survival function P(N >= n), which is what
the two-point oracles consume.  Laws used by the loop-erased sampler must be
bounded (cap), since the erased path cannot exceed the torus volume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ..lattice import TorusSpec

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Deterministic:
    """N = n with probability one."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("length must be non-negative")

    @property
    def max_length(self) -> int:
        return self.n

    def sample(self, rng: np.random.Generator) -> int:
        return self.n

    def survival(self, n: int) -> float:
        return 1.0 if n <= self.n else 0.0

    def survival_sum_beyond(self, n_max: int) -> float:
        """Exact sum of P(N >= n) over n > n_max."""
        return float(max(0, self.n - n_max))


@dataclass(frozen=True)
class Geometric:
    """P(N >= n) = p**n: each step survives independently with probability p.

    With this convention the two-point function of the walk is the lattice
    Green function at mass parameter p.
    """

    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValueError("retention probability must lie in (0, 1)")

    @property
    def max_length(self) -> None:
        return None

    def sample(self, rng: np.random.Generator) -> int:
        # numpy's geometric counts trials to first success (support 1, 2, ...)
        return int(rng.geometric(1.0 - self.p)) - 1

    def survival(self, n: int) -> float:
        return self.p**n

    def survival_sum_beyond(self, n_max: int) -> float:
        return self.p ** (n_max + 1) / (1.0 - self.p)


@dataclass(frozen=True)
class ScaledHalfNormal:
    """N = round(scale * |X|) clamped to [0, cap], X standard normal.

    Rounding is half-to-even; with scale = L^(d/2) and cap = L^d this is the
    asymptotic critical walk-length law of the complete-graph SAW, with mean
    ~ sqrt(2/pi) * scale and standard deviation ~ sqrt(1 - 2/pi) * scale.
    """

    scale: float
    cap: int

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.cap < 0:
            raise ValueError("cap must be non-negative")

    @property
    def max_length(self) -> int:
        return self.cap

    def sample(self, rng: np.random.Generator) -> int:
        n = int(np.rint(self.scale * abs(rng.standard_normal())))
        return min(n, self.cap)

    def survival(self, n: int) -> float:
        if n <= 0:
            return 1.0
        if n > self.cap:
            return 0.0
        # P(round(scale|X|) >= n) = P(|X| >= (n - 0.5)/scale)
        return math.erfc((n - 0.5) / (self.scale * _SQRT2))

    def survival_sum_beyond(self, n_max: int) -> float:
        total = 0.0
        for n in range(n_max + 1, self.cap + 1):
            s = self.survival(n)
            total += s
            if s < 1e-18:
                break
        return total


@dataclass(frozen=True)
class Empirical:
    """Finite table law; probabilities may be floats or exact Fractions."""

    pmf: tuple[tuple[int, Union[float, Fraction]], ...]

    def __post_init__(self) -> None:
        if not self.pmf:
            raise ValueError("empty probability table")
        tot = sum(p for _, p in self.pmf)
        if any(n < 0 for n, _ in self.pmf) or any(p < 0 for _, p in self.pmf):
            raise ValueError("lengths and probabilities must be non-negative")
        if abs(float(tot) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {float(tot)}, not 1")

    @classmethod
    def from_dict(cls, pmf: dict[int, Union[float, Fraction]]) -> "Empirical":
        return cls(tuple(sorted(pmf.items())))

    @property
    def max_length(self) -> int:
        return max(n for n, _ in self.pmf)

    def sample(self, rng: np.random.Generator) -> int:
        u = rng.random()
        acc = 0.0
        for n, p in self.pmf:
            acc += float(p)
            if u < acc:
                return n
        return self.pmf[-1][0]

    def survival(self, n: int):
        return sum(p for m, p in self.pmf if m >= n)

    def survival_sum_beyond(self, n_max: int):
        return sum(self.survival(n) for n in range(n_max + 1, self.max_length + 1))


LengthLaw = Union[Deterministic, Geometric, ScaledHalfNormal, Empirical]


def complete_graph_law(spec: TorusSpec) -> ScaledHalfNormal:
    """Walk-length law mimicking critical complete-graph SAW at volume L^d."""
    vol = spec.volume
    return ScaledHalfNormal(scale=math.sqrt(vol), cap=vol)
