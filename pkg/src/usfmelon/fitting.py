"""Power-law fits for decay sweeps.

The probabilities decay as C * r^(-p); fitting ln(value) against ln(r) by
least squares recovers the amplitude and the exponent together with the
standard error of the exponent, which is what the sweep commands and the
exponent tests consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["FitReport", "fit_exponent"]


@dataclass(frozen=True)
class FitReport:
    amplitude: float
    exponent: float
    stderr_exponent: float
    r_min: float
    r_max: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "C": self.amplitude,
            "p": self.exponent,
            "stderr_p": self.stderr_exponent,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "n_points": self.n_points,
        }


def fit_exponent(points: Sequence[tuple[float, float]]) -> FitReport:
    """Least-squares fit of ln(value) = ln(C) - p * ln(r).

    Needs at least 4 points with distinct r and strictly positive values.
    """
    if len(points) < 4:
        raise ValueError("need at least 4 points to fit")
    rs = [float(r) for r, _ in points]
    vals = [float(v) for _, v in points]
    if len(set(rs)) != len(rs):
        raise ValueError("r values must be distinct")
    if any(v <= 0 for v in vals):
        raise ValueError("values must be strictly positive")
    x = np.log(rs)
    y = np.log(vals)
    n = len(x)
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    slope = float(((x - xbar) * (y - y.mean())).sum() / sxx)
    intercept = float(y.mean() - slope * xbar)
    residuals = y - (intercept + slope * x)
    if n > 2:
        s2 = float((residuals**2).sum()) / (n - 2)
    else:
        s2 = 0.0
    stderr = math.sqrt(s2 / sxx)
    return FitReport(
        amplitude=math.exp(intercept),
        exponent=-slope,
        stderr_exponent=stderr,
        r_min=min(rs),
        r_max=max(rs),
        n_points=n,
    )
