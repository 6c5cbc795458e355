"""Worm chain on sourced high-temperature edge configurations.

States are edge subsets A whose odd-degree vertices are either empty or
{root, head}; the stationary law weights A by tanh(beta)^|A|.  One move:
the head (the root when there are no sources) picks a uniformly random
incident edge, and the toggle is Metropolis-accepted with min(1, t^{+-1}).

The torus with L = 2 is treated as a multigraph: the two parallel edges
between neighbouring sites are distinct, keyed by (site, axis) with `site`
the endpoint whose +axis step crosses the edge.
"""

from __future__ import annotations

from typing import Hashable, Sequence

import numpy as np

from ..lattice import LatticeWalk, TorusSpec
from ..rng import RandomBlocks

# incidence entry: (edge_key, other_vertex, axis, sign); axis/sign are None
# for graphs without torus step structure
Incident = tuple[Hashable, Hashable, int | None, int | None]


class WormGraph:
    """Finite regular multigraph with a root, as seen by the worm chain."""

    def __init__(
        self,
        incidence: dict[Hashable, Sequence[Incident]],
        root: Hashable,
        spec: TorusSpec | None = None,
    ):
        degrees = {len(v) for v in incidence.values()}
        if len(degrees) != 1:
            raise ValueError(f"worm moves need a regular graph, found degrees {sorted(degrees)}")
        if root not in incidence:
            raise ValueError("root is not a vertex")
        self.incidence = {v: tuple(entries) for v, entries in incidence.items()}
        self.root = root
        self.spec = spec
        self.degree = degrees.pop()

    @property
    def vertices(self) -> list:
        return sorted(self.incidence)

    @property
    def edges(self) -> list:
        return sorted({key for entries in self.incidence.values() for key, *_ in entries})

    @classmethod
    def from_torus(cls, spec: TorusSpec) -> "WormGraph":
        if spec.volume > 10**6:
            raise ValueError(f"torus with {spec.volume} sites is too large to materialize")
        incidence: dict[Hashable, list[Incident]] = {}
        for site in spec.sites():
            entries: list[Incident] = []
            for axis in range(spec.d):
                up = spec.wrap_site(site[:axis] + (site[axis] + 1,) + site[axis + 1 :])
                down = spec.wrap_site(site[:axis] + (site[axis] - 1,) + site[axis + 1 :])
                entries.append(((site, axis), up, axis, 1))
                entries.append(((down, axis), down, axis, -1))
            incidence[site] = entries
        return cls(incidence, root=spec.origin, spec=spec)

    @classmethod
    def cycle(cls, n: int, root: int = 0) -> "WormGraph":
        """Simple n-cycle on vertices 0..n-1."""
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        incidence = {
            i: [((i, i_next := (i + 1) % n), i_next, None, None), (((i - 1) % n, i), (i - 1) % n, None, None)]
            for i in range(n)
        }
        return cls(incidence, root=root)


def compute_sources(occupied: set, graph: WormGraph) -> set:
    """Odd-degree vertices of (V, occupied); the audit view of the sources."""
    odd: set = set()
    for v, entries in graph.incidence.items():
        deg = sum(1 for key, *_ in entries if key in occupied)
        if deg % 2:
            odd.add(v)
    return odd


class WormChain:
    """Single-head worm with the tail pinned at the root."""

    def __init__(self, graph: WormGraph, tanh_beta: float, rng: np.random.Generator | RandomBlocks):
        if not 0.0 < tanh_beta < 1.0:
            raise ValueError("tanh(beta) must lie in (0, 1)")
        self.graph = graph
        self.t = tanh_beta
        self._blocks = rng if isinstance(rng, RandomBlocks) else RandomBlocks(rng)
        self.occupied: set = set()
        self.head: Hashable = graph.root
        self.n_steps = 0
        self.n_accepted = 0

    @property
    def n_edges(self) -> int:
        return len(self.occupied)

    @property
    def sources(self) -> set:
        """{} when the head sits on the root, else {root, head}."""
        return set() if self.head == self.graph.root else {self.graph.root, self.head}

    @property
    def accept_fraction(self) -> float:
        return self.n_accepted / self.n_steps if self.n_steps else 0.0

    def audit(self) -> None:
        """Check the source invariant against the actual edge parities."""
        odd = compute_sources(self.occupied, self.graph)
        if odd != self.sources:
            raise AssertionError(f"source invariant broken: odd={odd}, head={self.head}")

    def advance(self, n: int) -> None:
        incidence = self.graph.incidence
        degree = self.graph.degree
        t = self.t
        occ = self.occupied
        head = self.head
        blocks = self._blocks
        uniform, integer = blocks.uniform, blocks.integer
        accepted = 0
        for _ in range(n):
            key, other, _, _ = incidence[head][integer(degree)]
            if key in occ:
                occ.discard(key)  # removal: min(1, 1/t) = 1 for t < 1
                head = other
                accepted += 1
            elif uniform() < t:
                occ.add(key)
                head = other
                accepted += 1
        self.head = head
        self.n_steps += n
        self.n_accepted += accepted


def extract_trail(occupied: set, graph: WormGraph, source: Hashable | None):
    """Order-greedy edge-self-avoiding trail from the root to `source`.

    From each vertex the walk takes the smallest untraversed occupied edge,
    ordering candidates by (neighbour, edge key).  `source` is the non-root
    odd vertex, or None for a sourceless configuration (zero-length trail).
    Returns (vertex sequence, step sequence of (axis, sign) or Nones).
    """
    root = graph.root
    if source is None:
        return [root], []
    vertices = [root]
    trail_steps: list[tuple[int | None, int | None]] = []
    used: set = set()
    incidence = graph.incidence
    at = root
    while True:
        best = None
        for key, other, axis, sign in incidence[at]:
            if key in occupied and key not in used:
                cand = (other, key, axis, sign)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None:
            break
        other, key, axis, sign = best
        used.add(key)
        vertices.append(other)
        trail_steps.append((axis, sign))
        at = other
    if at != source:
        raise AssertionError(
            f"trail stalled at {at} instead of the source {source}; configuration invalid"
        )
    return vertices, trail_steps


def extract_ising_walk(
    occupied: set, graph: WormGraph, source: Hashable | None
) -> LatticeWalk:
    """Trail extraction on the torus, returned as a walk with its Z^d lift."""
    if graph.spec is None:
        raise ValueError("ising-walk extraction needs a torus-backed graph")
    _, steps = extract_trail(occupied, graph, source)
    walk = LatticeWalk(spec=graph.spec)
    for axis, sign in steps:
        walk.append(axis, sign)
    if source is not None and walk.end_torus != source:
        raise AssertionError("trail endpoint does not match the source")
    return walk
