"""Direct samplers: random-length random walk and its loop-erased variant."""

from __future__ import annotations

import numpy as np

from ..lattice import LatticeWalk, TorusSpec, unwrap
from ..rng import RandomBlocks
from .laws import LengthLaw


def rlrw_sample(
    law: LengthLaw,
    spec: TorusSpec,
    rng: np.random.Generator | RandomBlocks,
) -> tuple[LatticeWalk, LatticeWalk]:
    """Draw N from `law`, take N uniform unit steps on the torus.

    Returns (torus walk, its Z^d lift); the lift is maintained incrementally,
    never by re-traversal.
    """
    blocks = rng if isinstance(rng, RandomBlocks) else RandomBlocks(rng)
    n = law.sample(blocks.generator)
    d = spec.d
    walk = LatticeWalk(spec=spec)
    for _ in range(n):
        r = blocks.integer(2 * d)
        walk.append(r >> 1, 1 - ((r & 1) << 1))
    return walk, unwrap(walk)


def rllerw_sample(
    law: LengthLaw,
    spec: TorusSpec,
    rng: np.random.Generator | RandomBlocks,
    step_cap: int | None = None,
) -> LatticeWalk:
    """Loop-erased walk stopped when the erased path first has length N.

    Runs the wrapped simple random walk, keeping its chronological loop
    erasure: revisiting a site of the current erased path truncates the path
    back to that site.  The law must be bounded by the torus volume; the walk
    cannot self-avoid for longer than volume - 1 steps.
    """
    cap = law.max_length
    if cap is None or cap > spec.volume:
        raise ValueError(f"length law must be bounded by the torus volume {spec.volume}")
    blocks = rng if isinstance(rng, RandomBlocks) else RandomBlocks(rng)
    n = law.sample(blocks.generator)
    if n > spec.volume - 1:
        raise ValueError(
            f"drawn length {n} exceeds the longest self-avoiding walk on the torus "
            f"({spec.volume - 1} steps); loop erasure cannot terminate"
        )
    if step_cap is None:
        step_cap = 10_000 + 500 * spec.volume

    d = spec.d
    walk = LatticeWalk(spec=spec)
    index: dict[tuple[int, ...], int] = {spec.origin: 0}
    tsites = walk.torus_sites
    steps_taken = 0
    while walk.length < n:
        if steps_taken >= step_cap:
            raise RuntimeError(
                f"loop erasure did not reach length {n} within {step_cap} steps "
                f"(erased length so far {walk.length}); raise step_cap if this is expected"
            )
        steps_taken += 1
        r = blocks.integer(2 * d)
        axis, sign = r >> 1, 1 - ((r & 1) << 1)
        target = walk.step_target(axis, sign)
        hit = index.get(target)
        if hit is None:
            walk.append(axis, sign)
            index[target] = walk.length
        else:
            for pos in range(hit + 1, walk.length + 1):
                del index[tsites[pos]]
            walk.truncate(hit)
    return walk
