"""Weighted power-law fits of finite-size scaling series."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ScalingPoint = tuple[float, float, float]  # (L, estimate, stderr)


@dataclass
class PowerLawFit:
    exponent: float
    exponent_err: float
    amplitude: float
    amplitude_err: float
    chi2_dof: float
    n_points: int
    l_min: float


def fit_power_law(series: Sequence[ScalingPoint]) -> PowerLawFit:
    """Weighted least squares of log(estimate) on log(L).

    Non-positive estimates cannot enter the log fit and are dropped with a
    warning; at least three usable sizes are required.
    """
    usable = [(L, y, e) for L, y, e in series if y > 0]
    dropped = len(series) - len(usable)
    if dropped:
        warnings.warn(f"dropped {dropped} non-positive estimates from power-law fit")
    if len(usable) < 3:
        raise ValueError(f"power-law fit needs >= 3 usable sizes, got {len(usable)}")
    L = np.array([p[0] for p in usable])
    y = np.array([p[1] for p in usable])
    err = np.array([p[2] for p in usable])
    if np.any(err <= 0):
        raise ValueError("every point needs a positive stderr")

    x = np.log(L)
    ylog = np.log(y)
    w = (y / err) ** 2  # delta log y = err / y
    design = np.stack([np.ones_like(x), x], axis=1)
    xtwx = design.T @ (design * w[:, None])
    beta = np.linalg.solve(xtwx, design.T @ (w * ylog))
    cov = np.linalg.inv(xtwx)
    resid = ylog - design @ beta
    chi2 = float(np.sum(w * resid**2))
    dof = max(1, len(usable) - 2)
    return PowerLawFit(
        exponent=float(beta[1]),
        exponent_err=math.sqrt(float(cov[1, 1])),
        amplitude=math.exp(float(beta[0])),
        amplitude_err=math.exp(float(beta[0])) * math.sqrt(float(cov[0, 0])),
        chi2_dof=chi2 / dof,
        n_points=len(usable),
        l_min=float(L.min()),
    )


def fit_power_law_sweep(series: Sequence[ScalingPoint]) -> list[PowerLawFit]:
    """Fits over increasing lower-size cutoffs, largest window first."""
    pts = sorted(series)
    fits = []
    for start in range(0, len(pts) - 2):
        fits.append(fit_power_law(pts[start:]))
    return fits
