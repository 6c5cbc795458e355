"""Per-run accumulator bundle fed one walk sample at a time."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lattice import LatticeWalk, winding_number
from .accumulators import ECDFAccumulator, MomentAccumulator
from .twopoint import ENDPOINT, VISIT, TwoPointHistogram

Site = tuple[int, ...]


@dataclass
class RunAccumulators:
    """Streams a sampler's output into length/winding/two-point statistics.

    visit_radius bounds the tracked window of unwrapped visits (inf-norm);
    set track_visits for ensembles whose two-point function is a visit count
    (random-length walks) rather than an endpoint ratio.
    """

    winding_axis: int = 0
    block_size: int = 64
    visit_radius: int = 12
    track_visits: bool = False

    length: MomentAccumulator = field(init=False)
    winding: MomentAccumulator = field(init=False)
    ecdf: ECDFAccumulator = field(init=False)
    torus_end: TwoPointHistogram = field(init=False)
    unwrapped_end: TwoPointHistogram = field(init=False)
    visits: TwoPointHistogram | None = field(init=False)

    def __post_init__(self) -> None:
        self.length = MomentAccumulator(self.block_size)
        self.winding = MomentAccumulator(self.block_size)
        self.ecdf = ECDFAccumulator()
        self.torus_end = TwoPointHistogram(ENDPOINT, self.block_size)
        self.unwrapped_end = TwoPointHistogram(ENDPOINT, self.block_size)
        self.visits = TwoPointHistogram(VISIT, self.block_size) if self.track_visits else None

    def record_walk(self, walk: LatticeWalk) -> None:
        """O(1) update of all scalar/endpoint statistics from one sample."""
        n = walk.length
        self.length.add(n)
        self.ecdf.add(n)
        self.winding.add(winding_number(walk, self.winding_axis))
        zero = n == 0
        self.torus_end.record_endpoint(walk.end_torus, zero)
        self.unwrapped_end.record_endpoint(walk.end_z, zero)
        if self.visits is not None:
            r = self.visit_radius
            self.visits.record_visits(
                z for z in walk.z_sites if all(-r <= c <= r for c in z)
            )

    def merge(self, other: "RunAccumulators") -> "RunAccumulators":
        out = RunAccumulators(
            winding_axis=self.winding_axis,
            block_size=self.block_size,
            visit_radius=self.visit_radius,
            track_visits=self.track_visits,
        )
        out.length = self.length.merge(other.length)
        out.winding = self.winding.merge(other.winding)
        out.ecdf = self.ecdf.merge(other.ecdf)
        out.torus_end = self.torus_end.merge(other.torus_end)
        out.unwrapped_end = self.unwrapped_end.merge(other.unwrapped_end)
        if self.visits is not None and other.visits is not None:
            out.visits = self.visits.merge(other.visits)
        return out

    @property
    def n_samples(self) -> int:
        return self.length.count


def record_walk(walk: LatticeWalk, accs: RunAccumulators) -> None:
    accs.record_walk(walk)
