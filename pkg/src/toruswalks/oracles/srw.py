"""Exact simple-random-walk kernels and the random-length two-point oracle.

Three independent routes to p_n(z) = P(S_n = z):

* dense box convolution (`srw_convolve`), exact up to tracked leaked mass;
* an on-axis evaluator (`srw_onaxis_pn`) summing binomial allocations over
  the step counts per axis, which reaches n in the tens of thousands where
  a dense d >= 4 box is hopeless;
* exact rational convolution on tiny instances (`exact_visit_counts`).

The random-length oracle sums P(N >= n) p_n(z) with a rigorous truncation
bound: pointwise deficit of the truncated kernel is at most the leaked mass,
and the tail beyond n_max is bounded by the law's survival sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.special import gammaln

from ..lattice import TorusSpec
from ..samplers.laws import LengthLaw

_MEMORY_LIMIT_BYTES = 1 << 30


def _shift_sum(arr: np.ndarray) -> np.ndarray:
    """Sum of the 2d unit shifts of arr with absorbing (zero) boundary."""
    out = np.zeros_like(arr)
    d = arr.ndim
    for axis in range(d):
        src_lo = tuple(slice(None) if a != axis else slice(1, None) for a in range(d))
        dst_lo = tuple(slice(None) if a != axis else slice(0, -1) for a in range(d))
        out[dst_lo] += arr[src_lo]
        out[src_lo] += arr[dst_lo]
    return out


@dataclass
class SrwKernelTable:
    """p_n(z) for ||z||_inf <= radius and 0 <= n <= n_max, with leak tracking."""

    d: int
    n_max: int
    radius: int
    tables: list[np.ndarray]
    leaked: np.ndarray  # leaked[n] = 1 - sum_z p_n(z), nonnegative and monotone

    def p(self, n: int, z: Sequence[int]) -> float:
        if not 0 <= n <= self.n_max:
            raise ValueError(f"n={n} outside [0, {self.n_max}]")
        if any(abs(c) > self.radius for c in z):
            raise ValueError(f"{tuple(z)} outside the box of radius {self.radius}")
        idx = tuple(c + self.radius for c in z)
        return float(self.tables[n][idx])

    def p_series(self, z: Sequence[int]) -> np.ndarray:
        idx = tuple(c + self.radius for c in z)
        return np.array([t[idx] for t in self.tables])


def srw_convolve(d: int, n_max: int, radius: int) -> SrwKernelTable:
    """Dense kernel table via p_{n+1}(z) = (1/2d) sum over unit shifts."""
    side = 2 * radius + 1
    est = (n_max + 1) * side**d * 8
    if est > _MEMORY_LIMIT_BYTES:
        raise ValueError(
            f"kernel table would need ~{est / 1e9:.1f} GB "
            f"({n_max + 1} x {side}^{d} doubles); shrink n_max or radius"
        )
    cur = np.zeros((side,) * d)
    cur[(radius,) * d] = 1.0
    tables = [cur.copy()]
    leaked = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        cur = _shift_sum(cur) / (2 * d)
        tables.append(cur.copy())
        leaked[n] = max(0.0, 1.0 - cur.sum())
    return SrwKernelTable(d=d, n_max=n_max, radius=radius, tables=tables, leaked=leaked)


# -- on-axis kernel for large n --------------------------------------------

def srw_return_probs(d: int, n_max: int) -> np.ndarray:
    """q[s] = P(S_s = 0) for the d-dimensional SRW, s = 0..n_max.

    Built by conditioning on the number of steps taken along the first axis,
    recursively in the dimension.
    """
    if d < 0:
        raise ValueError("dimension must be non-negative")
    q = np.zeros(n_max + 1)
    q[0] = 1.0
    if d == 0:
        return q
    lg = gammaln(np.arange(n_max + 2))

    def log_binom(n, k):
        return lg[n + 1] - lg[k + 1] - lg[n - k + 1]

    s_even = np.arange(0, n_max + 1, 2)
    if d == 1:
        q[s_even] = np.exp(log_binom(s_even, s_even // 2) - s_even * math.log(2.0))
        return q
    q_prev = srw_return_probs(d - 1, n_max)
    log_p, log_1mp = math.log(1.0 / d), math.log((d - 1.0) / d)
    for s in range(2, n_max + 1, 2):
        b = np.arange(0, s + 1, 2)
        w = np.exp(
            log_binom(s, b)
            + b * (log_p - math.log(2.0))
            + (s - b) * log_1mp
            + log_binom(b, b // 2)
        )
        q[s] = float(w @ q_prev[s - b])
    q[0] = 1.0
    return q


def srw_onaxis_pn(d: int, m: int, n_max: int, q_rest: np.ndarray | None = None) -> np.ndarray:
    """p_n(m * e_1) for n = 0..n_max, exact to double-precision roundoff.

    Conditions on the number a of steps along the first axis: a binomial
    allocation times the 1D point probability times the (d-1)-dimensional
    return probability of the remaining steps.
    """
    m = abs(int(m))
    if q_rest is None:
        q_rest = srw_return_probs(d - 1, n_max)
    out = np.zeros(n_max + 1)
    lg = gammaln(np.arange(n_max + 2))

    def log_binom(n, k):
        return lg[n + 1] - lg[k + 1] - lg[n - k + 1]

    if d == 1:
        for n in range(m, n_max + 1):
            if (n + m) % 2 == 0:
                out[n] = math.exp(log_binom(n, (n + m) // 2) - n * math.log(2.0))
        if m == 0:
            out[0] = 1.0
        return out
    log_p, log_1mp = math.log(1.0 / d), math.log((d - 1.0) / d)
    start = m if m > 0 else 0
    for n in range(start, n_max + 1):
        if (n + m) % 2:
            continue
        a = np.arange(m, n + 1, 2)
        w = np.exp(
            log_binom(n, a)
            + a * (log_p - math.log(2.0))
            + (n - a) * log_1mp
            + log_binom(a, (a + m) // 2)
        )
        out[n] = float(w @ q_rest[n - a])
    if m == 0:
        out[0] = 1.0
    return out


def lattice_green_fourier(d: int, p: float, z: Sequence[int], grid: int = 64) -> float:
    """sum_n p^n p_n(z) by trapezoid rule on the Brillouin zone.

    The integrand is smooth and periodic for p < 1, so the tensor trapezoid
    rule converges geometrically in the grid size.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("mass parameter must lie in (0, 1)")
    k = -math.pi + 2.0 * math.pi * np.arange(grid) / grid
    shape_one = [1] * d
    lam = np.zeros((grid,) * d)
    phase = np.ones((grid,) * d, dtype=complex)
    for axis in range(d):
        shape = list(shape_one)
        shape[axis] = grid
        lam = lam + np.cos(k).reshape(shape)
        phase = phase * np.exp(-1j * k * z[axis]).reshape(shape)
    lam /= d
    val = (phase / (1.0 - p * lam)).real.mean()
    return float(val)


# -- exact rational kernels (tiny instances) ---------------------------------

def exact_kernel_series(
    d: int, n_max: int, spec: TorusSpec | None = None
) -> list[dict[tuple[int, ...], Fraction]]:
    """p_n as exact Fractions, n = 0..n_max, on Z^d or on a torus.

    Torus steps collapse parallel directions (L = 2) naturally: each of the
    2d directions carries probability 1/2d onto its wrapped target.
    """
    origin = (0,) * d
    cur: dict[tuple[int, ...], Fraction] = {origin: Fraction(1)}
    series = [dict(cur)]
    step_prob = Fraction(1, 2 * d)
    for _ in range(n_max):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for site, mass in cur.items():
            for axis in range(d):
                for sign in (1, -1):
                    tgt = site[:axis] + (site[axis] + sign,) + site[axis + 1 :]
                    if spec is not None:
                        tgt = spec.wrap_site(tgt)
                    nxt[tgt] = nxt.get(tgt, Fraction(0)) + mass * step_prob
        cur = nxt
        series.append(dict(cur))
    return series


def exact_visit_counts(
    survivals: Sequence[Fraction], d: int, spec: TorusSpec | None = None
) -> dict[tuple[int, ...], Fraction]:
    """Expected visits sum_n P(N >= n) p_n(x), exact, for bounded laws."""
    n_max = len(survivals) - 1
    series = exact_kernel_series(d, n_max, spec)
    out: dict[tuple[int, ...], Fraction] = {}
    for n, table in enumerate(series):
        s = Fraction(survivals[n])
        if s == 0:
            continue
        for site, mass in table.items():
            out[site] = out.get(site, Fraction(0)) + s * mass
    return out


# -- random-length two-point oracle ------------------------------------------

class OracleValue(NamedTuple):
    value: float
    truncation_bound: float


def oracle_rlrw_two_point(law: LengthLaw, z: Sequence[int], table: SrwKernelTable) -> OracleValue:
    """sum_n P(N >= n) p_n(z) from a kernel table, with rigorous error bound."""
    surv = np.array([law.survival(n) for n in range(table.n_max + 1)])
    value = float(surv @ table.p_series(z))
    bound = float(surv @ table.leaked) + float(law.survival_sum_beyond(table.n_max))
    return OracleValue(value, bound)


def oracle_rlrw_two_point_map(
    law: LengthLaw, d: int, n_max: int, radius: int
) -> tuple[dict[tuple[int, ...], float], float]:
    """Streaming variant over the whole box: two live buffers, no history.

    Returns ({z: expected visits}, truncation bound); the bound covers both
    the box leakage and the n > n_max tail, so it applies to every z.
    """
    side = 2 * radius + 1
    if 3 * side**d * 8 > _MEMORY_LIMIT_BYTES:
        raise ValueError(f"box {side}^{d} too large; shrink the radius")
    cur = np.zeros((side,) * d)
    cur[(radius,) * d] = 1.0
    acc = cur.copy()  # survival(0) = 1
    leak_bound = 0.0
    for n in range(1, n_max + 1):
        s = float(law.survival(n))
        cur = _shift_sum(cur) / (2 * d)
        if s == 0.0:
            break
        acc += s * cur
        leak_bound += s * max(0.0, 1.0 - float(cur.sum()))
    bound = leak_bound + float(law.survival_sum_beyond(n_max))
    out: dict[tuple[int, ...], float] = {}
    nz = np.argwhere(acc > 0.0)
    for idx in nz:
        out[tuple(int(c) - radius for c in idx)] = float(acc[tuple(idx)])
    return out, bound


def iter_walks(d: int, max_len: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """All step sequences of length 0..max_len (definition-level sums)."""
    dirs = [(axis, sign) for axis in range(d) for sign in (1, -1)]
    stack: list[tuple[tuple[int, int], ...]] = [()]
    while stack:
        w = stack.pop()
        yield w
        if len(w) < max_len:
            stack.extend(w + (step,) for step in dirs)
