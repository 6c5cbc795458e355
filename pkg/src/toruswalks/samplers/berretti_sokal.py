"""Berretti-Sokal chain for the variable-length SAW ensemble on the torus.

The stationary law weights a rooted self-avoiding walk omega by J^|omega|.
Proposal mix: with probability 1/2 append a uniformly random unit step
(rejected if it violates self-avoidance), with probability 1/2 delete the
last step.  Detailed balance then fixes the acceptance probabilities
min(1, 2dJ) for appends and min(1, 1/(2dJ)) for deletions.

The lifted variant carries a grow/shrink mode: grow mode only proposes
appends, shrink mode only deletions, and any rejection flips the mode.
This satisfies skew detailed balance and leaves the same marginal invariant,
which is how it is validated (exact stationary distribution on tiny tori).
"""

from __future__ import annotations

import numpy as np

from ..lattice import LatticeWalk, TorusSpec
from ..rng import RandomBlocks


def append_accept_prob(fugacity, d: int):
    """Acceptance for appending one step; exact under Fraction inputs."""
    a = 2 * d * fugacity
    return a if a < 1 else 1

def delete_accept_prob(fugacity, d: int):
    """Acceptance for deleting the last step."""
    a = 1 / (2 * d * fugacity)
    return a if a < 1 else 1


class BerrettiSokalChain:
    """Markov chain over rooted torus SAWs, stationary for J^|walk|."""

    def __init__(
        self,
        spec: TorusSpec,
        fugacity: float,
        rng: np.random.Generator | RandomBlocks,
        lifted: bool = False,
    ):
        if fugacity <= 0:
            raise ValueError("fugacity must be positive")
        self.spec = spec
        self.fugacity = fugacity
        self.lifted = lifted
        self._blocks = rng if isinstance(rng, RandomBlocks) else RandomBlocks(rng)
        d = spec.d
        self._acc_app = float(append_accept_prob(fugacity, d))
        self._acc_del = float(delete_accept_prob(fugacity, d))
        origin = spec.origin
        self._tsites: list[tuple[int, ...]] = [origin]
        self._zsites: list[tuple[int, ...]] = [origin]
        self._steps: list[tuple[int, int]] = []
        self._occupied: set[tuple[int, ...]] = {origin}
        self.mode = 1  # grow; only meaningful when lifted
        self.n_steps = 0
        self.n_accepted = 0

    # -- state access -------------------------------------------------------
    @property
    def length(self) -> int:
        return len(self._steps)

    @property
    def end_torus(self) -> tuple[int, ...]:
        return self._tsites[-1]

    @property
    def end_z(self) -> tuple[int, ...]:
        return self._zsites[-1]

    @property
    def accept_fraction(self) -> float:
        return self.n_accepted / self.n_steps if self.n_steps else 0.0

    def walk(self) -> LatticeWalk:
        """Snapshot of the current walk."""
        return LatticeWalk._adopt(
            self.spec, list(self._steps), list(self._zsites), list(self._tsites)
        )

    # -- dynamics -------------------------------------------------------------
    def advance(self, n: int) -> None:
        """Run n transitions."""
        spec = self.spec
        d = spec.d
        two_d = 2 * d
        lo, hi, L1 = spec.lo, spec.hi, 1 - spec.L
        acc_app, acc_del = self._acc_app, self._acc_del
        tsites, zsites, steps, occ = self._tsites, self._zsites, self._steps, self._occupied
        blocks = self._blocks
        uniform, integer = blocks.uniform, blocks.integer
        lifted = self.lifted
        mode = self.mode
        accepted = 0

        for _ in range(n):
            grow = (mode == 1) if lifted else (uniform() < 0.5)
            if grow:
                r = integer(two_d)
                axis, sign = r >> 1, 1 - ((r & 1) << 1)
                t = tsites[-1]
                c = t[axis] + sign
                if not lo <= c <= hi:
                    c = t[axis] + L1 * sign
                target = t[:axis] + (c,) + t[axis + 1 :]
                if target not in occ and (acc_app >= 1.0 or uniform() < acc_app):
                    tsites.append(target)
                    occ.add(target)
                    z = zsites[-1]
                    zsites.append(z[:axis] + (z[axis] + sign,) + z[axis + 1 :])
                    steps.append((axis, sign))
                    accepted += 1
                elif lifted:
                    mode = -1
            else:
                if steps and (acc_del >= 1.0 or uniform() < acc_del):
                    occ.discard(tsites.pop())
                    zsites.pop()
                    steps.pop()
                    accepted += 1
                elif lifted:
                    mode = 1

        self.mode = mode
        self.n_steps += n
        self.n_accepted += accepted
