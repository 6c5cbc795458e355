"""Exhaustive enumeration of rooted self-avoiding walks on tiny tori.

Weights are kept as integer counts per (observable, length), so any quantity
can be evaluated exactly at rational fugacity afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..lattice import TorusSpec

Number = Union[float, Fraction]

# (d, max L) feasible for exhaustive enumeration; L = 2 is excluded because
# parallel edges make site-sequence walks ambiguous there
_GUARDS = {1: 9, 2: 4}


@dataclass
class SawEnsemble:
    """Counts of rooted torus SAWs indexed by length and endpoints."""

    spec: TorusSpec
    length_counts: dict[int, int]
    torus_end_counts: dict[tuple[tuple[int, ...], int], int]
    z_end_counts: dict[tuple[tuple[int, ...], int], int]
    walks: list[tuple[tuple[int, int], ...]] | None = None

    @property
    def n_walks(self) -> int:
        return sum(self.length_counts.values())

    def partition(self, fugacity: Number) -> Number:
        return sum(c * fugacity**n for n, c in sorted(self.length_counts.items()))

    def length_law(self, fugacity: Number) -> dict[int, Number]:
        z = self.partition(fugacity)
        return {n: c * fugacity**n / z for n, c in sorted(self.length_counts.items())}

    def g_torus(self, fugacity: Number) -> dict[tuple[int, ...], Number]:
        """Unnormalized two-point function: total weight by torus endpoint."""
        out: dict[tuple[int, ...], Number] = {}
        for (x, n), c in self.torus_end_counts.items():
            out[x] = out.get(x, 0) + c * fugacity**n
        return out

    def g_tilde(self, fugacity: Number) -> dict[tuple[int, ...], Number]:
        """Unnormalized unwrapped two-point function, keyed by Z^d endpoint."""
        out: dict[tuple[int, ...], Number] = {}
        for (z, n), c in self.z_end_counts.items():
            out[z] = out.get(z, 0) + c * fugacity**n
        return out

    def endpoint_law_z(self, fugacity: Number) -> dict[tuple[int, ...], Number]:
        z = self.partition(fugacity)
        return {k: v / z for k, v in self.g_tilde(fugacity).items()}


def enumerate_saw(spec: TorusSpec, collect_walks: bool = False) -> SawEnsemble:
    """Depth-first enumeration of every rooted SAW on the torus."""
    max_l = _GUARDS.get(spec.d)
    if max_l is None or spec.L > max_l or spec.L < 3:
        est = 2 * spec.d * (2 * spec.d - 1) ** max(0, spec.volume - 2)
        raise ValueError(
            f"SAW enumeration guarded to d in {sorted(_GUARDS)} with 3 <= L <= {_GUARDS};"
            f" requested d={spec.d}, L={spec.L} (roughly {est:.1e} walks)"
        )
    d = spec.d
    lo, hi, L1 = spec.lo, spec.hi, 1 - spec.L
    dirs = [(axis, sign) for axis in range(d) for sign in (1, -1)]

    length_counts: dict[int, int] = {}
    torus_end_counts: dict[tuple[tuple[int, ...], int], int] = {}
    z_end_counts: dict[tuple[tuple[int, ...], int], int] = {}
    walks: list[tuple[tuple[int, int], ...]] | None = [] if collect_walks else None

    origin = spec.origin
    steps: list[tuple[int, int]] = []
    tpath = [origin]
    zpath = [origin]
    occupied = {origin}

    def visit() -> None:
        n = len(steps)
        length_counts[n] = length_counts.get(n, 0) + 1
        tk = (tpath[-1], n)
        torus_end_counts[tk] = torus_end_counts.get(tk, 0) + 1
        zk = (zpath[-1], n)
        z_end_counts[zk] = z_end_counts.get(zk, 0) + 1
        if walks is not None:
            walks.append(tuple(steps))

    def dfs() -> None:
        visit()
        t = tpath[-1]
        z = zpath[-1]
        for axis, sign in dirs:
            c = t[axis] + sign
            if not lo <= c <= hi:
                c = t[axis] + L1 * sign
            target = t[:axis] + (c,) + t[axis + 1 :]
            if target in occupied:
                continue
            occupied.add(target)
            tpath.append(target)
            zpath.append(z[:axis] + (z[axis] + sign,) + z[axis + 1 :])
            steps.append((axis, sign))
            dfs()
            steps.pop()
            zpath.pop()
            occupied.discard(tpath.pop())

    dfs()
    return SawEnsemble(
        spec=spec,
        length_counts=length_counts,
        torus_end_counts=torus_end_counts,
        z_end_counts=z_end_counts,
        walks=walks,
    )
