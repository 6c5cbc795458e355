"""Closed-form limit laws and quadrature for walk two-point asymptotics.

Central objects:

* the half-normal law of |X| and its standardized version F, the universal
  limit of critical walk-length distributions;
* the scaled two-point limit for a walk of random length: with the length
  over a_L converging in law to G and xi the ratio ||z||/sqrt(a_L),

      lim ||z||^(d-2) g(z) =
          (d / 2 pi^(d/2)) Int_0^inf s^(d/2-2) e^(-s) [1 - G(d xi^2 / 2s)] ds

  together with its half-normal specialization H_d(alpha, beta, gamma; xi);
* the Gaussian kernel pbar_n approximating the walk kernel p_n, with the
  absolute-difference sums that control the error terms.

The integrand has an integrable s^(d/2-2) endpoint singularity for d = 3;
the engine splits at s = 1 and substitutes s = t^2 on (0, 1], which removes
the singularity for every d >= 3, then integrates the exponential tail on
[1, inf).  G is only evaluated pointwise, so step CDFs are fine.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

HALF_NORMAL_MEAN = math.sqrt(2.0 / math.pi)
HALF_NORMAL_STD = math.sqrt(1.0 - 2.0 / math.pi)


def half_normal_cdf(x):
    """P(|X| <= x) for standard normal X; zero for x <= 0."""
    x = np.asarray(x, dtype=float)
    out = np.where(x > 0, erf(x / math.sqrt(2.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def standardized_F(x):
    """CDF of (|X| - E|X|) / sd(|X|)."""
    x = np.asarray(x, dtype=float)
    out = half_normal_cdf(x * HALF_NORMAL_STD + HALF_NORMAL_MEAN)
    return float(out) if np.ndim(out) == 0 else out


def phi_constant() -> float:
    """Limiting mean-over-sd ratio of critical walk lengths, sqrt(2/(pi-2))."""
    return math.sqrt(2.0 / (math.pi - 2.0))


def srw_green_constant(d: int) -> float:
    """(d / 2 pi^(d/2)) Gamma(d/2 - 1): the xi -> 0 (simple-random-walk) limit."""
    if d < 3:
        raise ValueError("the massless-walk constant needs d >= 3")
    return d / (2.0 * math.pi ** (d / 2.0)) * math.gamma(d / 2.0 - 1.0)


class QuadratureWarning(UserWarning):
    pass


def _scaled_tail_integral(d: int, tail: Callable[[float], float], tol: float) -> float:
    """Int_0^inf s^(d/2-2) e^(-s) tail(s) ds for tail bounded in [0, 1]."""
    a = d / 2.0 - 2.0

    def inner(t: float) -> float:
        return 2.0 * t ** (d - 3) * math.exp(-t * t) * tail(t * t)

    def outer(s: float) -> float:
        return s**a * math.exp(-s) * tail(s)

    v1, e1 = quad(inner, 0.0, 1.0, epsabs=tol / 2, epsrel=0.0, limit=500)
    v2, e2 = quad(outer, 1.0, math.inf, epsabs=tol / 2, epsrel=0.0, limit=500)
    if e1 + e2 > tol:
        warnings.warn(
            f"quadrature reached absolute error {e1 + e2:.2e} > requested {tol:.2e}",
            QuadratureWarning,
        )
    return v1 + v2


def prop1_rhs(
    G: Callable[[float], float], d: int, xi: float, tol: float = 1e-9
) -> float:
    """Scaled two-point limit for length law G at spatial ratio xi in (0, inf].

    xi = inf is handled symbolically: the integrand collapses to the constant
    1 - G(inf), giving zero whenever G has all its mass at finite values.
    """
    if d < 3 or d != int(d):
        raise ValueError("d must be an integer >= 3")
    prefactor = d / (2.0 * math.pi ** (d / 2.0))
    if math.isinf(xi):
        g_inf = float(G(1e300))
        return prefactor * math.gamma(d / 2.0 - 1.0) * (1.0 - g_inf)
    if not xi > 0:
        raise ValueError("xi must be positive (or inf)")
    c = d * xi * xi / 2.0

    def tail(s: float) -> float:
        return 1.0 - float(G(c / s))

    return prefactor * _scaled_tail_integral(d, tail, tol)


@dataclass(frozen=True)
class CollapseParams:
    """Amplitude alpha, inverse scale beta, shift gamma for the H_d overlay."""

    alpha: float
    beta: float
    gamma: float
    d: int

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.d < 3:
            raise ValueError("d must be >= 3")


def h_d(
    params: CollapseParams,
    xi: float,
    F: Callable[[float], float] | None = None,
    tol: float = 1e-9,
) -> float:
    """alpha (d/2 pi^(d/2)) Int s^(d/2-2) e^(-s) [1 - F(beta d xi^2/(2s) - gamma)] ds.

    F defaults to the standardized half-normal; a custom F supports the
    consistency check against the general-G path.
    """
    cdf = standardized_F if F is None else F
    d = params.d
    if math.isinf(xi):
        f_inf = float(cdf(1e300))
        return params.alpha * srw_green_constant(d) * (1.0 - f_inf)
    if not xi > 0:
        raise ValueError("xi must be positive (or inf)")
    c = params.beta * d * xi * xi / 2.0
    gamma = params.gamma

    def tail(s: float) -> float:
        return 1.0 - float(cdf(c / s - gamma))

    prefactor = params.alpha * d / (2.0 * math.pi ** (d / 2.0))
    return prefactor * _scaled_tail_integral(d, tail, tol)


def gaussian_pbar(n: int, z: Sequence[int], d: int):
    """Local-CLT Gaussian kernel 2 (d/2 pi n)^(d/2) exp(-d ||z||^2 / 2n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z2 = float(sum(c * c for c in z))
    return 2.0 * (d / (2.0 * math.pi * n)) ** (d / 2.0) * math.exp(-d * z2 / (2.0 * n))


def _pbar_series(z2: float, d: int, n_max: int) -> np.ndarray:
    n = np.arange(1, n_max + 1, dtype=float)
    return 2.0 * (d / (2.0 * math.pi * n)) ** (d / 2.0) * np.exp(-d * z2 / (2.0 * n))


@dataclass
class LemmaSums:
    """Partial sums quantifying the Gaussian approximation of the kernel."""

    z: tuple[int, ...]
    z_norm: float
    d: int
    n_max: int
    eps: float
    split_a: int  # ceil(||z||)^(2 - 2 eps / d), the proof's small/large-n split
    sum_p_pbar: float  # sum over parity-matched n of |p_n - pbar_n|
    sum_pbar_diff: float  # sum over all n of |pbar_n - pbar_{n+1}|
    head_p_pbar: float  # the same sums restricted to n <= split_a
    head_pbar_diff: float
    tail_scale: float  # (2/d) a^(-d/2), the analytic tail envelope


def lemma_sums(
    pn: Sequence[float], z: Sequence[int], d: int, eps: float = 0.5
) -> LemmaSums:
    """Evaluate the kernel-difference sums from a precomputed p_n series.

    `pn[n]` must be P(S_n = z) for n = 0..n_max (an oracle kernel).  The
    first sum runs over parity-compatible n only, matching how the Gaussian
    approximation enters the two-point decomposition (at incompatible parity
    p_n vanishes identically and pbar is not meant as its approximation).
    """
    z = tuple(int(c) for c in z)
    pn = np.asarray(pn, dtype=float)
    n_max = len(pn) - 1
    z1 = sum(abs(c) for c in z)
    z2 = float(sum(c * c for c in z))
    z_norm = math.sqrt(z2)
    pbar = _pbar_series(z2, d, n_max + 1)  # indices 0.. -> n = 1..n_max+1

    n = np.arange(1, n_max + 1)
    matched = (n + z1) % 2 == 0
    diff = np.abs(pn[1:] - pbar[:-1])
    sum_p_pbar = float(diff[matched].sum())
    pbar_diff = np.abs(np.diff(pbar))
    sum_pbar_diff = float(pbar_diff.sum())

    a = max(1, math.ceil(z_norm) ** (2.0 - 2.0 * eps / d))
    a = int(a)
    head_mask = n <= a
    return LemmaSums(
        z=z,
        z_norm=z_norm,
        d=d,
        n_max=n_max,
        eps=eps,
        split_a=a,
        sum_p_pbar=sum_p_pbar,
        sum_pbar_diff=sum_pbar_diff,
        head_p_pbar=float(diff[matched & head_mask].sum()),
        head_pbar_diff=float(pbar_diff[head_mask].sum()),
        tail_scale=(2.0 / d) * a ** (-d / 2.0),
    )
