"""Streaming moment and ECDF accumulators with blocking error analysis.

Totals are kept in exact arithmetic when the inputs are integers (walk
lengths, windings), so merged multi-chain statistics cannot depend on merge
order.  Error bars come from the variance of block means at doubling block
sizes; the reported level is the first whose block length comfortably
exceeds the integrated autocorrelation time it implies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class InsufficientData(RuntimeError):
    """Not enough samples/blocks to report the requested statistic."""


# block length must exceed this multiple of the estimated 2*tau before the
# blocked variance is trusted
_WINDOW_FACTOR = 8.0
_MIN_BLOCKS = 8


@dataclass
class BlockingLevel:
    block_length: int
    n_blocks: int
    stderr: float
    tau_int: float


@dataclass
class BlockingResult:
    mean: float
    stderr: float
    tau_int: float
    n: int
    chosen_block_length: int
    levels: list[BlockingLevel] = field(default_factory=list)


class MomentAccumulator:
    """Count/sum/sum-of-squares plus per-block sums for error analysis."""

    def __init__(self, block_size: int = 1):
        if block_size < 1:
            raise ValueError("block size must be >= 1")
        self.block_size = block_size
        self.count = 0
        self.total = 0
        self.total_sq = 0
        self._block_sums: list = []
        self._block_sumsqs: list = []
        self._partial = 0
        self._partial_sq = 0
        self._partial_count = 0

    def add(self, x) -> None:
        self.count += 1
        self.total += x
        self.total_sq += x * x
        self._partial += x
        self._partial_sq += x * x
        self._partial_count += 1
        if self._partial_count == self.block_size:
            self._block_sums.append(self._partial)
            self._block_sumsqs.append(self._partial_sq)
            self._partial = 0
            self._partial_sq = 0
            self._partial_count = 0

    def add_many(self, xs: Iterable) -> None:
        values = xs.tolist() if isinstance(xs, np.ndarray) else xs
        for x in values:
            self.add(x)

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        """Combine two accumulators; blocks never straddle the seam.

        Incomplete trailing blocks still count toward the moments but are
        dropped from the error blocks.
        """
        if self.block_size != other.block_size:
            raise ValueError("cannot merge accumulators with different block sizes")
        out = MomentAccumulator(self.block_size)
        out.count = self.count + other.count
        out.total = self.total + other.total
        out.total_sq = self.total_sq + other.total_sq
        out._block_sums = self._block_sums + other._block_sums
        out._block_sumsqs = self._block_sumsqs + other._block_sumsqs
        return out

    # -- moments -------------------------------------------------------------
    def mean(self) -> float:
        if self.count == 0:
            raise InsufficientData("no samples")
        return self.total / self.count

    def variance(self) -> float:
        if self.count < 2:
            raise InsufficientData("need at least two samples for a variance")
        n = self.count
        v = (self.total_sq - self.total * self.total / n) / (n - 1)
        return max(0.0, float(v))

    def std(self) -> float:
        return math.sqrt(self.variance())

    def mean_over_std(self) -> float:
        s = self.std()
        if s == 0:
            raise InsufficientData("zero standard deviation")
        return self.mean() / s

    def mean_over_std_jackknife(self) -> tuple[float, float]:
        """(mean/std, stderr) by leave-one-block-out over complete blocks."""
        est = self.mean_over_std()
        b = len(self._block_sums)
        if b < 2:
            return est, math.nan
        n_blk = self.block_size
        tot = sum(self._block_sums)
        tot_sq = sum(self._block_sumsqs)
        n = b * n_blk
        loo = []
        for s, sq in zip(self._block_sums, self._block_sumsqs):
            m = n - n_blk
            mu = (tot - s) / m
            var = ((tot_sq - sq) - m * mu * mu) / (m - 1)
            if var <= 0:
                return est, math.nan
            loo.append(mu / math.sqrt(var))
        loo_arr = np.asarray(loo)
        err = math.sqrt((b - 1) / b * float(((loo_arr - loo_arr.mean()) ** 2).sum()))
        return est, err

    # -- blocking -------------------------------------------------------------
    def blocking(self) -> BlockingResult:
        """Mean, plateau stderr, and integrated autocorrelation time.

        tau is reported in units of samples: 0.5 for uncorrelated input, and
        (1+rho)/(2(1-rho)) for an AR(1) stream with coefficient rho.
        """
        if len(self._block_sums) < _MIN_BLOCKS:
            raise InsufficientData(
                f"{len(self._block_sums)} complete blocks; need >= {_MIN_BLOCKS}"
            )
        mean = self.mean()
        var = self.variance()

        means = np.asarray([float(b) for b in self._block_sums]) / self.block_size
        levels: list[BlockingLevel] = []
        blen = self.block_size
        while len(means) >= _MIN_BLOCKS:
            vb = float(means.var(ddof=1))
            # vb * blen estimates 2 tau sigma^2; scale to the full sample count
            stderr = math.sqrt(vb * blen / self.count)
            tau = 0.5 * vb * blen / var if var > 0 else 0.5
            levels.append(BlockingLevel(blen, len(means), stderr, tau))
            if len(means) % 2:
                means = means[:-1]
            means = (means[0::2] + means[1::2]) / 2.0
            blen *= 2

        chosen = levels[-1]
        for lev in levels:
            if lev.block_length >= _WINDOW_FACTOR * 2.0 * lev.tau_int:
                chosen = lev
                break
        return BlockingResult(
            mean=mean,
            stderr=chosen.stderr,
            tau_int=chosen.tau_int,
            n=self.count,
            chosen_block_length=chosen.block_length,
            levels=levels,
        )


def blocking_errors(acc: MomentAccumulator) -> BlockingResult:
    return acc.blocking()


class ECDFAccumulator:
    """Histogram of observed values; reports the standardized step ECDF."""

    def __init__(self):
        self._counts: dict = {}
        self.count = 0
        self.total = 0
        self.total_sq = 0

    def add(self, x) -> None:
        self._counts[x] = self._counts.get(x, 0) + 1
        self.count += 1
        self.total += x
        self.total_sq += x * x

    def merge(self, other: "ECDFAccumulator") -> "ECDFAccumulator":
        out = ECDFAccumulator()
        out._counts = dict(self._counts)
        for x, c in other._counts.items():
            out._counts[x] = out._counts.get(x, 0) + c
        out.count = self.count + other.count
        out.total = self.total + other.total
        out.total_sq = self.total_sq + other.total_sq
        return out

    def mean(self) -> float:
        if self.count == 0:
            raise InsufficientData("no samples")
        return self.total / self.count

    def std(self) -> float:
        if self.count < 2:
            raise InsufficientData("need at least two samples")
        v = (self.total_sq - self.total * self.total / self.count) / (self.count - 1)
        return math.sqrt(max(0.0, float(v)))

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """(sorted values, ECDF at those values)."""
        if self.count == 0:
            raise InsufficientData("no samples")
        xs = np.array(sorted(self._counts))
        cum = np.cumsum([self._counts[x] for x in xs]) / self.count
        return xs, cum

    def standardized_support(self) -> tuple[np.ndarray, np.ndarray]:
        xs, cum = self.support()
        sd = self.std()
        if sd == 0:
            raise InsufficientData("all samples equal; no standardized version")
        return (xs - self.mean()) / sd, cum

    def ks_distance(self, cdf, standardized: bool = True) -> float:
        """sup_x |ECDF(x) - cdf(x)| over the step points."""
        xs, cum = self.standardized_support() if standardized else self.support()
        ref = np.asarray(cdf(xs), dtype=float)
        below = np.concatenate([[0.0], cum[:-1]])
        return float(np.max(np.maximum(np.abs(ref - cum), np.abs(ref - below))))


def ratio_jackknife(
    num_blocks: Sequence[float], den_blocks: Sequence[float]
) -> tuple[float, float]:
    """Estimate and stderr of sum(num)/sum(den) by leave-one-block-out."""
    num = np.asarray(num_blocks, dtype=float)
    den = np.asarray(den_blocks, dtype=float)
    if num.shape != den.shape or num.ndim != 1:
        raise ValueError("need matching 1-d block tallies")
    b = len(num)
    ns, ds = num.sum(), den.sum()
    if ds <= 0:
        raise InsufficientData("denominator never observed")
    est = ns / ds
    if b < 2:
        return est, float("nan")
    loo = (ns - num) / (ds - den)
    return est, float(np.sqrt((b - 1) / b * np.sum((loo - loo.mean()) ** 2)))
