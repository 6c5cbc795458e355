"""Exact absorption law of the chronological loop-erasure chain.

The state is the current erased path; one simple-random-walk step either
extends it or truncates it back to an earlier site.  On a small torus with a
small target length the absorbing chain is solved exactly with rational
arithmetic, giving the full law of the erased walk, including its Z^d lift
(states carry both the torus path and its unwrapped image, which differ as
state labels only on the L = 2 multigraph where wrapping is not injective).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ..lattice import TorusSpec

Path = tuple[tuple[int, ...], ...]
State = tuple[Path, Path]  # (torus path, unwrapped path)

_MAX_STATES = 4000


def _step(spec: TorusSpec, t: tuple[int, ...], axis: int, sign: int) -> tuple[int, ...]:
    c = t[axis] + sign
    if not spec.lo <= c <= spec.hi:
        c = t[axis] + (1 - spec.L) * sign
    return t[:axis] + (c,) + t[axis + 1 :]


def _transitions(spec: TorusSpec, state: State) -> Iterable[State]:
    """The 2d equally likely successor states (with multiplicity)."""
    tpath, zpath = state
    t, z = tpath[-1], zpath[-1]
    for axis in range(spec.d):
        for sign in (1, -1):
            tt = _step(spec, t, axis, sign)
            zz = z[:axis] + (z[axis] + sign,) + z[axis + 1 :]
            if tt in tpath:
                idx = tpath.index(tt)
                yield (tpath[: idx + 1], zpath[: idx + 1])
            else:
                yield (tpath + (tt,), zpath + (zz,))


def rllerw_absorption(spec: TorusSpec, n: int) -> dict[State, Fraction]:
    """Exact absorption law over erased paths of length exactly n."""
    if n > spec.volume - 1:
        raise ValueError(f"no self-avoiding path of length {n} on {spec.volume} sites")
    origin = spec.origin
    start: State = ((origin,), (origin,))
    if n == 0:
        return {start: Fraction(1)}

    # reachable transient states (erased length < n) and their transitions
    transient: dict[State, int] = {start: 0}
    rows: list[dict[int, Fraction]] = []  # transient -> transient
    absorb_rows: list[dict[State, Fraction]] = []  # transient -> absorbing
    frontier = [start]
    p = Fraction(1, 2 * spec.d)
    while frontier:
        nxt = []
        for s in frontier:
            row: dict[int, Fraction] = {}
            arow: dict[State, Fraction] = {}
            for target in _transitions(spec, s):
                if len(target[0]) - 1 == n:
                    arow[target] = arow.get(target, Fraction(0)) + p
                else:
                    j = transient.get(target)
                    if j is None:
                        j = transient[target] = len(transient)
                        if j >= _MAX_STATES:
                            raise ValueError(
                                f"more than {_MAX_STATES} transient states; guarded"
                            )
                        nxt.append(target)
                    row[j] = row.get(j, Fraction(0)) + p
            rows.append(row)
            absorb_rows.append(arow)
        frontier = nxt

    # expected visits u solve u^T (I - Q) = e_start^T, i.e. (I - Q^T) u = e0
    m = len(transient)
    a = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        a[i][i] += 1
        for j, q in rows[i].items():
            a[j][i] -= q  # transpose
    rhs = [Fraction(0)] * m
    rhs[0] = Fraction(1)
    u = _solve_fraction(a, rhs)

    out: dict[State, Fraction] = {}
    for i in range(m):
        if u[i] == 0:
            continue
        for target, q in absorb_rows[i].items():
            out[target] = out.get(target, Fraction(0)) + u[i] * q
    assert sum(out.values()) == 1
    return out


def _solve_fraction(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination with exact rationals."""
    m = len(a)
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        b[col] *= inv
        for r in range(m):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                b[r] -= f * b[col]
    return b


@dataclass
class RllerwExact:
    """Law of the erased walk: absorption mixed over the length law."""

    spec: TorusSpec
    absorption: dict[State, Fraction]

    @classmethod
    def fixed_length(cls, spec: TorusSpec, n: int) -> "RllerwExact":
        return cls(spec, rllerw_absorption(spec, n))

    @classmethod
    def from_pmf(cls, spec: TorusSpec, pmf: Mapping[int, Fraction]) -> "RllerwExact":
        total = sum(pmf.values())
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
        mixed: dict[State, Fraction] = {}
        for n, w in sorted(pmf.items()):
            if w == 0:
                continue
            for state, q in rllerw_absorption(spec, n).items():
                mixed[state] = mixed.get(state, Fraction(0)) + w * q
        return cls(spec, mixed)

    def endpoint_torus(self) -> dict[tuple[int, ...], Fraction]:
        out: dict[tuple[int, ...], Fraction] = {}
        for (tpath, _), q in self.absorption.items():
            out[tpath[-1]] = out.get(tpath[-1], Fraction(0)) + q
        return out

    def endpoint_z(self) -> dict[tuple[int, ...], Fraction]:
        out: dict[tuple[int, ...], Fraction] = {}
        for (_, zpath), q in self.absorption.items():
            out[zpath[-1]] = out.get(zpath[-1], Fraction(0)) + q
        return out

    def visit_prob_torus(self) -> dict[tuple[int, ...], Fraction]:
        """P(x in erased path)."""
        out: dict[tuple[int, ...], Fraction] = {}
        for (tpath, _), q in self.absorption.items():
            for x in tpath:
                out[x] = out.get(x, Fraction(0)) + q
        return out

    def visit_prob_z(self) -> dict[tuple[int, ...], Fraction]:
        """P(z in the unwrapped erased path)."""
        out: dict[tuple[int, ...], Fraction] = {}
        for (_, zpath), q in self.absorption.items():
            for z in zpath:
                out[z] = out.get(z, Fraction(0)) + q
        return out

    def expected_visits_torus(self) -> dict[tuple[int, ...], Fraction]:
        """E sum_n 1(L_n = x); equals visit probability (paths self-avoid)."""
        return self.visit_prob_torus()

    def prefix_prob(self, tpath: Path) -> Fraction:
        """P(erased walk extends the torus walk eta), the RLLERW walk weight."""
        k = len(tpath)
        return sum(
            (q for (tp, _), q in self.absorption.items() if tp[:k] == tpath),
            Fraction(0),
        )

    def prefix_prob_z(self, zpath: Path) -> Fraction:
        k = len(zpath)
        return sum(
            (q for (_, zp), q in self.absorption.items() if zp[:k] == zpath),
            Fraction(0),
        )


def enumerate_sa_paths(spec: TorusSpec, max_len: int) -> list[State]:
    """All rooted self-avoiding (torus path, unwrapped path) pairs, len <= max_len.

    On L >= 3 tori the two components determine each other; on the L = 2
    multigraph distinct lifts of the same torus path appear separately.
    """
    origin = spec.origin
    out: list[State] = []
    stack: list[State] = [((origin,), (origin,))]
    while stack:
        state = stack.pop()
        out.append(state)
        if len(state[0]) - 1 < max_len:
            tpath = state[0]
            for target in _transitions(spec, state):
                if len(target[0]) == len(tpath) + 1:
                    stack.append(target)
    return out
