"""Discrete-torus geometry and rooted lattice walks.

The torus with period L identifies vertex coordinates with the integers in
[-L/2, L/2) along each axis.  A walk is stored as its sequence of unit steps
together with incrementally maintained site sequences, so that wrapping a
Z^d walk onto the torus and lifting it back are cheap, and winding numbers
can be read off the cached unwrapped endpoint in O(1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Malformed walk or site sequence."""


@dataclass(frozen=True)
class TorusSpec:
    """Hypercubic torus: dimension d and period L (sites per axis)."""

    d: int
    L: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.L < 2:
            raise ValueError(f"period must be >= 2, got {self.L}")

    @property
    def lo(self) -> int:
        """Smallest coordinate, -floor(L/2)."""
        return -(self.L // 2)

    @property
    def hi(self) -> int:
        """Largest coordinate (inclusive)."""
        return self.L - 1 - self.L // 2

    @property
    def volume(self) -> int:
        return self.L**self.d

    @property
    def origin(self) -> tuple[int, ...]:
        return (0,) * self.d

    def contains(self, site: Sequence[int]) -> bool:
        lo, hi = self.lo, self.hi
        return len(site) == self.d and all(lo <= c <= hi for c in site)

    def wrap_site(self, site: Sequence[int]) -> tuple[int, ...]:
        """Reduce an arbitrary Z^d point into the fundamental domain."""
        L, lo = self.L, self.lo
        return tuple((c - lo) % L + lo for c in site)

    def sites(self) -> list[tuple[int, ...]]:
        """All vertices, lexicographically ordered."""
        out: list[tuple[int, ...]] = [()]
        for _ in range(self.d):
            out = [s + (c,) for s in out for c in range(self.lo, self.hi + 1)]
        return sorted(out)


def parity(n: int, z: Sequence[int]) -> bool:
    """True iff n + ||z||_1 is even (reachability parity of an n-step walk)."""
    return (n + sum(abs(c) for c in z)) % 2 == 0


class LatticeWalk:
    """Rooted walk on Z^d (spec=None) or on a torus (spec=TorusSpec).

    Mutable: samplers append/pop/truncate in O(1) amortized.  The step
    sequence uses unit steps (axis, sign); torus site sequences follow the
    two-case wrap rule, so the Z^d lift is always available alongside.
    """

    __slots__ = ("spec", "_steps", "_tsites", "_zsites")

    def __init__(self, d: int | None = None, spec: TorusSpec | None = None):
        if spec is None and d is None:
            raise ValueError("need a dimension or a torus spec")
        self.spec = spec
        dim = spec.d if spec is not None else int(d)  # type: ignore[arg-type]
        origin = (0,) * dim
        self._steps: list[tuple[int, int]] = []
        self._zsites: list[tuple[int, ...]] = [origin]
        self._tsites: list[tuple[int, ...]] | None = [origin] if spec is not None else None

    # -- construction -----------------------------------------------------
    @classmethod
    def from_steps(
        cls, steps: Iterable[tuple[int, int]], d: int | None = None, spec: TorusSpec | None = None
    ) -> "LatticeWalk":
        w = cls(d=d, spec=spec)
        for axis, sign in steps:
            w.append(axis, sign)
        return w

    @classmethod
    def from_sites(
        cls, sites: Sequence[Sequence[int]], spec: TorusSpec | None = None
    ) -> "LatticeWalk":
        """Rebuild a walk from its site sequence, inferring the unit steps.

        On the torus, a displacement of +-(L-1) along one axis is read as the
        wrap of the opposite unit step.  For L = 2 both interpretations give a
        unit displacement; the direct (non-wrapping) step is chosen.
        """
        if not sites:
            raise LatticeError("empty site sequence")
        first = tuple(sites[0])
        if any(c != 0 for c in first):
            raise LatticeError(f"walk must be rooted at the origin, got {first}")
        d = spec.d if spec is not None else len(first)
        w = cls(d=d, spec=spec)
        for i in range(1, len(sites)):
            prev, cur = tuple(sites[i - 1]), tuple(sites[i])
            if len(cur) != d:
                raise LatticeError(f"site {cur} has wrong dimension")
            diffs = [(a, cur[a] - prev[a]) for a in range(d) if cur[a] != prev[a]]
            if len(diffs) != 1:
                raise LatticeError(f"sites {prev} -> {cur}: not a single-axis step")
            axis, delta = diffs[0]
            if abs(delta) == 1:
                sign = delta
            elif spec is not None and abs(delta) == spec.L - 1:
                sign = -1 if delta > 0 else 1
            else:
                raise LatticeError(f"sites {prev} -> {cur}: displacement {delta} is not a unit step")
            w.append(axis, sign)
            expect = w._tsites[-1] if spec is not None else w._zsites[-1]
            if expect != cur:
                raise LatticeError(f"site {cur} is outside the torus domain")
        return w

    @classmethod
    def _adopt(
        cls,
        spec: TorusSpec | None,
        steps: list[tuple[int, int]],
        zsites: list[tuple[int, ...]],
        tsites: list[tuple[int, ...]] | None,
    ) -> "LatticeWalk":
        """Wrap pre-validated internals without copying (sampler fast path)."""
        w = cls.__new__(cls)
        w.spec = spec
        w._steps = steps
        w._zsites = zsites
        w._tsites = tsites
        return w

    # -- basic accessors ---------------------------------------------------
    @property
    def d(self) -> int:
        return len(self._zsites[0])

    @property
    def length(self) -> int:
        return len(self._steps)

    @property
    def steps(self) -> list[tuple[int, int]]:
        return list(self._steps)

    @property
    def end_z(self) -> tuple[int, ...]:
        """Endpoint of the Z^d lift."""
        return self._zsites[-1]

    @property
    def end_torus(self) -> tuple[int, ...]:
        if self._tsites is None:
            raise LatticeError("not a torus walk")
        return self._tsites[-1]

    @property
    def z_sites(self) -> list[tuple[int, ...]]:
        """Site sequence of the Z^d lift (do not mutate)."""
        return self._zsites

    @property
    def torus_sites(self) -> list[tuple[int, ...]]:
        """Torus site sequence (do not mutate)."""
        if self._tsites is None:
            raise LatticeError("not a torus walk")
        return self._tsites

    def sites(self) -> list[tuple[int, ...]]:
        """Site sequence in the walk's own space."""
        return list(self._tsites if self._tsites is not None else self._zsites)

    def __len__(self) -> int:
        return len(self._steps)

    def __repr__(self) -> str:
        space = f"T(L={self.spec.L})" if self.spec is not None else "Z"
        return f"LatticeWalk({space}^{self.d}, length={self.length})"

    # -- mutation ----------------------------------------------------------
    def step_target(self, axis: int, sign: int) -> tuple[int, ...]:
        """Site this step would land on (torus rule applied when wrapped)."""
        if self._tsites is not None:
            t = self._tsites[-1]
            spec = self.spec
            c = t[axis] + sign
            if not (spec.lo <= c <= spec.hi):  # type: ignore[union-attr]
                c = t[axis] + (1 - spec.L) * sign  # type: ignore[union-attr]
            return t[:axis] + (c,) + t[axis + 1 :]
        z = self._zsites[-1]
        return z[:axis] + (z[axis] + sign,) + z[axis + 1 :]

    def append(self, axis: int, sign: int) -> tuple[int, ...]:
        """Take one unit step; returns the new site in the walk's space."""
        z = self._zsites[-1]
        self._zsites.append(z[:axis] + (z[axis] + sign,) + z[axis + 1 :])
        self._steps.append((axis, sign))
        if self._tsites is None:
            return self._zsites[-1]
        t = self.step_target(axis, sign)
        # step_target used the pre-append torus endpoint, still valid here
        self._tsites.append(t)
        return t

    def pop(self) -> None:
        if not self._steps:
            raise LatticeError("cannot pop from a zero-length walk")
        self._steps.pop()
        self._zsites.pop()
        if self._tsites is not None:
            self._tsites.pop()

    def truncate(self, length: int) -> None:
        """Keep only the first `length` steps."""
        if not 0 <= length <= self.length:
            raise LatticeError(f"cannot truncate length-{self.length} walk to {length}")
        del self._steps[length:]
        del self._zsites[length + 1 :]
        if self._tsites is not None:
            del self._tsites[length + 1 :]

    def copy(self) -> "LatticeWalk":
        return LatticeWalk._adopt(
            self.spec,
            list(self._steps),
            list(self._zsites),
            list(self._tsites) if self._tsites is not None else None,
        )


def wrap(zwalk: LatticeWalk, spec: TorusSpec) -> LatticeWalk:
    """Wrap a Z^d walk onto the torus (total; preserves length and steps)."""
    if zwalk.spec is not None:
        raise LatticeError("input already lives on a torus")
    if zwalk.d != spec.d:
        raise LatticeError(f"walk dimension {zwalk.d} != torus dimension {spec.d}")
    out = LatticeWalk(spec=spec)
    for axis, sign in zwalk._steps:
        out.append(axis, sign)
    return out


def unwrap(twalk: LatticeWalk) -> LatticeWalk:
    """Lift a torus walk back to Z^d (inverse of `wrap`)."""
    if twalk.spec is None:
        raise LatticeError("input is already a Z^d walk")
    return LatticeWalk._adopt(None, list(twalk._steps), list(twalk._zsites), None)


def winding_number(twalk: LatticeWalk, axis: int = 0) -> int:
    """floor(|unwrapped endpoint coordinate| / L) along the given axis."""
    if twalk.spec is None:
        raise LatticeError("winding number is defined for torus walks")
    if not 0 <= axis < twalk.d:
        raise LatticeError(f"axis {axis} out of range for d={twalk.d}")
    return abs(twalk.end_z[axis]) // twalk.spec.L
