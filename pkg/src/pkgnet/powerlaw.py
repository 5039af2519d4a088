"""Log-log regression fits of degree distributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import FitError
from .metrics import DegreeHistogram

METHODS = ("frequency", "ccdf")


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    slope: float
    intercept: float
    r_squared: float
    points_used: int
    k_min: int
    method: str
    excluded_zero_degree: int


def _counts(hist: DegreeHistogram | Mapping[int, int]) -> dict[int, int]:
    return dict(hist.counts if isinstance(hist, DegreeHistogram) else hist)


def ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Ordinary least squares ``y = intercept + slope * x``; returns (slope, intercept, r2)."""
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise FitError("all points share one degree; slope undefined")
    slope = float(dx @ dy) / sxx
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    ss_res = float(resid @ resid)
    ss_tot = float(dy @ dy)
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return slope, intercept, r2


def fit_power_law(
    hist: DegreeHistogram | Mapping[int, int],
    k_min: int = 1,
    method: str = "frequency",
) -> PowerLawFit:
    """Estimate ``alpha`` in ``P(k) ~ k^-alpha`` by least squares in log-log space.

    ``frequency`` regresses log(count) on log(degree). ``ccdf`` regresses the
    log of the fraction of vertices with degree >= k; its slope is shifted by
    one so both methods estimate the same density exponent. Degree 0 is never
    fitted.
    """
    if method not in METHODS:
        raise ValueError(f"unknown fit method: {method!r}")
    counts = _counts(hist)
    lo = max(int(k_min), 1)
    usable = sorted((k, c) for k, c in counts.items() if k >= lo and c > 0)
    if len(usable) < 3:
        raise FitError(f"need at least 3 distinct degrees >= {lo} with nonzero counts, got {len(usable)}")
    degrees = np.array([k for k, _ in usable], dtype=np.float64)
    freq = np.array([c for _, c in usable], dtype=np.float64)

    if method == "frequency":
        y = np.log(freq)
    else:
        tail = np.cumsum(freq[::-1])[::-1]
        y = np.log(tail / tail[0])
    slope, intercept, r2 = ols(np.log(degrees), y)
    alpha = abs(slope) + (1.0 if method == "ccdf" else 0.0)
    return PowerLawFit(
        alpha=alpha,
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        points_used=len(usable),
        k_min=lo,
        method=method,
        excluded_zero_degree=counts.get(0, 0),
    )


def ccdf(hist: DegreeHistogram | Mapping[int, int]) -> list[tuple[int, float]]:
    """Fraction of degree >= 1 vertices with degree >= k, at each observed k."""
    pairs = emit_scatter(hist)
    total = sum(c for _, c in pairs)
    out = []
    remaining = total
    for k, c in pairs:
        out.append((k, remaining / total))
        remaining -= c
    return out


def emit_scatter(hist: DegreeHistogram | Mapping[int, int]) -> list[tuple[int, int]]:
    """``(degree, count)`` pairs for degree >= 1, ascending."""
    return sorted((k, c) for k, c in _counts(hist).items() if k >= 1 and c > 0)
