"""Displacement histograms and the two-point estimators built on them.

Endpoint mode implements the ratio estimator

    g~(z) = P(unwrapped endpoint = z) / P(walk length = 0),

with errors from a block jackknife of the ratio.  Visit mode accumulates
per-sample visit counts (expected visits for plain random walks, 0/1 visit
indicators for self-avoiding ones) with plain blocking errors.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

import numpy as np

from .accumulators import InsufficientData

Site = tuple[int, ...]

ENDPOINT = "endpoint"
VISIT = "visit"


class TwoPointHistogram:
    """Tallies per displacement, chunked into blocks of samples."""

    def __init__(self, mode: str, block_samples: int = 1024):
        if mode not in (ENDPOINT, VISIT):
            raise ValueError(f"unknown mode {mode!r}")
        if block_samples < 1:
            raise ValueError("block size must be >= 1")
        self.mode = mode
        self.block_samples = block_samples
        self.counts: dict[Site, int] = {}
        self.normalizer = 0  # zero-length events (endpoint) or samples (visit)
        self.n_samples = 0
        self._blocks: list[tuple[dict[Site, int], int]] = []
        self._cur: dict[Site, int] = {}
        self._cur_norm = 0
        self._cur_n = 0

    def _bump(self, z: Site, w: int) -> None:
        self.counts[z] = self.counts.get(z, 0) + w
        self._cur[z] = self._cur.get(z, 0) + w

    def _close_sample(self) -> None:
        self.n_samples += 1
        self._cur_n += 1
        if self._cur_n == self.block_samples:
            self._blocks.append((self._cur, self._cur_norm))
            self._cur = {}
            self._cur_norm = 0
            self._cur_n = 0

    def record_endpoint(self, z: Site, zero_length: bool) -> None:
        if self.mode != ENDPOINT:
            raise ValueError("endpoint recording on a visit-mode histogram")
        self._bump(z, 1)
        if zero_length:
            self.normalizer += 1
            self._cur_norm += 1
        self._close_sample()

    def record_visits(self, sites: Iterable[Site]) -> None:
        """One sample's visited displacements (with multiplicity)."""
        if self.mode != VISIT:
            raise ValueError("visit recording on an endpoint-mode histogram")
        for z in sites:
            self._bump(z, 1)
        self.normalizer += 1
        self._cur_norm += 1
        self._close_sample()

    def merge(self, other: "TwoPointHistogram") -> "TwoPointHistogram":
        if (self.mode, self.block_samples) != (other.mode, other.block_samples):
            raise ValueError("histogram layouts differ")
        out = TwoPointHistogram(self.mode, self.block_samples)
        out.counts = dict(self.counts)
        for z, c in other.counts.items():
            out.counts[z] = out.counts.get(z, 0) + c
        out.normalizer = self.normalizer + other.normalizer
        out.n_samples = self.n_samples + other.n_samples
        out._blocks = self._blocks + other._blocks
        return out

    # -- estimators ------------------------------------------------------------
    def estimates(self) -> dict[Site, tuple[float, float]]:
        if self.mode == ENDPOINT:
            return self._ratio_estimates()
        return self._visit_estimates()

    def _ratio_estimates(self) -> dict[Site, tuple[float, float]]:
        if self.normalizer == 0:
            raise InsufficientData("no zero-length walks observed; ratio undefined")
        total_norm = self.normalizer
        nb = len(self._blocks)
        out: dict[Site, tuple[float, float]] = {}
        if nb >= 2:
            norms = np.array([b[1] for b in self._blocks], dtype=float)
            norm_sum = norms.sum()
        for z in sorted(self.counts):
            total = self.counts[z]
            est = total / total_norm
            err = math.nan
            if nb >= 2 and norm_sum > 0:
                nums = np.array([b[0].get(z, 0) for b in self._blocks], dtype=float)
                num_sum = nums.sum()
                denom = norm_sum - norms
                ok = denom > 0
                if ok.all():
                    loo = (num_sum - nums) / denom
                    err = math.sqrt((nb - 1) / nb * float(((loo - loo.mean()) ** 2).sum()))
            out[z] = (est, err)
        return out

    def endpoint_law(self) -> dict[Site, tuple[float, float]]:
        """P(endpoint = z) with blocking errors (endpoint mode)."""
        if self.mode != ENDPOINT:
            raise ValueError("endpoint law needs an endpoint-mode histogram")
        if self.n_samples == 0:
            raise InsufficientData("no samples recorded")
        nb = len(self._blocks)
        out: dict[Site, tuple[float, float]] = {}
        for z in sorted(self.counts):
            est = self.counts[z] / self.n_samples
            err = math.nan
            if nb >= 2:
                per_block = (
                    np.array([b[0].get(z, 0) for b in self._blocks], dtype=float)
                    / self.block_samples
                )
                err = float(per_block.std(ddof=1) / math.sqrt(nb))
            out[z] = (est, err)
        return out

    def _visit_estimates(self) -> dict[Site, tuple[float, float]]:
        if self.normalizer == 0:
            raise InsufficientData("no samples recorded")
        nb = len(self._blocks)
        out: dict[Site, tuple[float, float]] = {}
        if nb >= 2:
            sizes = np.array([max(b[1], 1) for b in self._blocks], dtype=float)
        for z in sorted(self.counts):
            est = self.counts[z] / self.normalizer
            err = math.nan
            if nb >= 2:
                per_block = np.array([b[0].get(z, 0) for b in self._blocks], dtype=float) / sizes
                err = float(per_block.std(ddof=1) / math.sqrt(nb))
            out[z] = (est, err)
        return out


def unwrapped_two_point(hist: TwoPointHistogram) -> dict[Site, tuple[float, float]]:
    """Ratio estimator of the unwrapped two-point function (endpoint mode)."""
    if hist.mode != ENDPOINT:
        raise ValueError("ratio estimator needs an endpoint-mode histogram")
    return hist.estimates()


def rllerw_visit_two_point(hist: TwoPointHistogram) -> dict[Site, tuple[float, float]]:
    """Visit-probability estimator P(z in unwrapped path) (visit mode)."""
    if hist.mode != VISIT:
        raise ValueError("visit estimator needs a visit-mode histogram")
    return hist.estimates()


def radial_profile(
    source: TwoPointHistogram | Mapping[Site, tuple[float, float]],
    d: int,
    L: int,
    axis: int = 0,
    shell_average: bool = False,
) -> list[tuple[float, float, float]]:
    """(xi, ||z||^(d-2) g~(z), stderr) rows from two-point estimates.

    xi = ||z|| / L^(d/4).  The default keeps on-axis displacements z = k e_axis
    only, matching the standard construction z_L = floor(L^(d/4) xi) e_1;
    shell averaging over equal ||z|| is available instead.
    """
    if d < 3:
        raise ValueError("the scaled profile needs d >= 3")
    est = source.estimates() if isinstance(source, TwoPointHistogram) else source
    scale = L ** (d / 4.0)
    rows: list[tuple[float, float, float]] = []
    if not shell_average:
        for z, (val, err) in sorted(est.items()):
            if z[axis] <= 0 or any(c != 0 for i, c in enumerate(z) if i != axis):
                continue
            r = float(z[axis])
            rows.append((r / scale, r ** (d - 2) * val, r ** (d - 2) * (err if err == err else 0.0)))
        return rows
    shells: dict[float, list[tuple[float, float]]] = {}
    for z, (val, err) in est.items():
        r = math.sqrt(sum(c * c for c in z))
        if r > 0:
            shells.setdefault(round(r, 9), []).append((val, err))
    for r, entries in sorted(shells.items()):
        vals = np.array([v for v, _ in entries])
        errs = np.array([e if e == e else 0.0 for _, e in entries])
        rows.append(
            (
                r / scale,
                r ** (d - 2) * float(vals.mean()),
                r ** (d - 2) * float(np.sqrt((errs**2).sum()) / len(errs)),
            )
        )
    return rows
