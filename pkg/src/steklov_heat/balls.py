"""Steklov spectra of Euclidean balls: heat traces, asymptotic fits, Weyl counts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .geometry.pointwise import CurvatureData, pointwise_invariants, sphere_area

SERIES_RTOL = 1e-18
CLOSED_FORM_RTOL = 1e-12
MAX_CONDITION = 1e12


class IllConditionedGridError(ValueError):
    pass


def steklov_multiplicity(n: int, k: int) -> int:
    """Multiplicity of the eigenvalue k on the unit n-ball (harmonic polynomials of degree k)."""
    if n < 2 or k < 0:
        raise ValueError(f"need n >= 2 and k >= 0, got n={n}, k={k}")
    if k == 0:
        return 1
    return (2 * k + n - 2) * math.factorial(k + n - 3) // (math.factorial(k) * math.factorial(n - 2))


@dataclass
class BallSpectrum:
    """Prefix of the spectrum: eigenvalue k (times 1/radius) with multiplicity m_k."""

    n: int
    levels: int
    radius: float = 1.0
    multiplicities: List[int] = field(init=False)

    def __post_init__(self):
        self.multiplicities = [steklov_multiplicity(self.n, k) for k in range(self.levels + 1)]

    def eigenvalue(self, k: int) -> float:
        return k / self.radius

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "radius": self.radius,
            "eigenvalues": [self.eigenvalue(k) for k in range(self.levels + 1)],
            "multiplicities": self.multiplicities,
        }


def heat_trace_closed_form(n: int, t: float) -> Optional[float]:
    """Closed forms for n = 3, 4, written with expm1 to stay accurate for small t."""
    if n == 3:
        d = -math.expm1(-t)
        return (2 - d) / (d * d)
    if n == 4:
        d = math.expm1(t)
        return (1 + d) ** 2 * (2 + d) / d**3
    return None


def _multiplicities(n: int, k: np.ndarray) -> np.ndarray:
    """m_k as floats: (2k + n - 2)/(n - 2)! * (k + 1)...(k + n - 3), with m_0 = 1."""
    if n == 2:
        return np.where(k == 0, 1.0, 2.0)
    out = (2 * k + n - 2) / math.factorial(n - 2)
    for j in range(1, n - 2):
        out = out * (k + j)
    return out


def heat_trace_series(n: int, t: float, radius: float = 1.0) -> float:
    """sum_k m_k exp(-k t / radius), truncated once a term is below 1e-18 of the running sum."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    s = t / radius
    peak = (n - 2) / s  # terms decrease beyond this index
    block = max(256, int(8 / s))
    parts: List[float] = []
    start = 0
    while True:
        k = np.arange(start, start + block, dtype=float)
        terms = _multiplicities(n, k) * np.exp(-k * s)
        total = math.fsum(parts) + math.fsum(terms)
        cut = np.nonzero((terms < SERIES_RTOL * total) & (k > peak))[0]
        if len(cut):
            parts.append(math.fsum(terms[: cut[0] + 1]))
            return math.fsum(parts)
        parts.append(math.fsum(terms))
        start += block


def heat_trace(n: int, t: float, radius: float = 1.0) -> float:
    """Tr exp(-t DtN) on the ball of the given radius.

    For n = 3, 4 on the unit ball the series is checked against the closed form.
    """
    value = heat_trace_series(n, t, radius)
    if radius == 1.0:
        closed = heat_trace_closed_form(n, t)
        if closed is not None and abs(value - closed) > CLOSED_FORM_RTOL * abs(closed):
            raise ArithmeticError(f"series {value!r} disagrees with closed form {closed!r} at t={t}")
    return value


@dataclass
class FitResult:
    n: int
    coefficients: List[float]  # c0, c1, c2
    guard: float  # cubic guard coefficient
    residual_norm: float
    condition_number: float
    grid: List[float]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "fitted": self.coefficients,
            "guard": self.guard,
            "residual_norm": self.residual_norm,
            "condition_number": self.condition_number,
            "grid": self.grid,
        }


def log_grid(t_min: float = 1e-3, t_max: float = 1e-1, points: int = 24) -> List[float]:
    return list(np.geomspace(t_min, t_max, points))


def fit_heat_invariants(n: int, grid: Optional[Sequence[float]] = None) -> FitResult:
    """Least squares of t^{n-1} Tr exp(-t DtN) against c0 + c1 t + c2 t^2 + c3 t^3.

    The cubic coefficient only absorbs truncation bias and is not reported
    among the invariants.
    """
    grid = log_grid() if grid is None else list(grid)
    t = np.asarray(grid, dtype=float)
    if len(t) < 8:
        raise ValueError("the fit needs at least 8 grid points")
    if np.any(t <= 0) or np.any(t > 0.2):
        raise ValueError("grid points must lie in (0, 0.2]")
    A = np.vander(t, 4, increasing=True)
    cond = float(np.linalg.cond(A))
    if cond > MAX_CONDITION:
        raise IllConditionedGridError(
            f"design matrix condition number {cond:.3g} exceeds {MAX_CONDITION:.0e}; use a wider grid"
        )
    y = np.array([ti ** (n - 1) * heat_trace(n, ti) for ti in t])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = float(np.linalg.norm(A @ coef - y))
    return FitResult(n, [float(c) for c in coef[:3]], float(coef[3]), res, cond, [float(x) for x in t])


def ball_invariants(n: int, radius: float = 1.0) -> Dict[str, float]:
    """a_k of the n-ball from the pointwise densities integrated over its boundary sphere."""
    dens = pointwise_invariants(CurvatureData.sphere(n, radius))
    area = sphere_area(n, radius)
    out = {"a0": dens.a0x * area, "a1": dens.a1x * area}
    if dens.a2x is not None:
        out["a2"] = dens.a2x * area
    return out


@dataclass
class WeylPoint:
    n: int
    sigma: float
    count: int
    prediction: float
    residual: float

    @property
    def scaled_residual(self) -> float:
        """residual / sigma^{n-2}"""
        return self.residual / self.sigma ** (self.n - 2)

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "count": self.count,
            "prediction": self.prediction,
            "residual": self.residual,
            "scaled_residual": self.scaled_residual,
        }


def _half_integer_level(sigma) -> int:
    twice = Fraction(sigma) * 2
    if twice.denominator != 1 or twice.numerator % 2 != 1 or twice < 0:
        raise ValueError(f"sigma must be m + 1/2 with integer m >= 0, got {sigma}")
    return (twice.numerator - 1) // 2


def counting_function(n: int, m: int) -> int:
    """#{eigenvalues <= m + 1/2} with multiplicity on the unit ball."""
    return sum(steklov_multiplicity(n, k) for k in range(m + 1))


def weyl_residual(n: int, sigma: float) -> WeylPoint:
    """Exact count against a0/(n-1)! sigma^{n-1} + a1/(n-2)! sigma^{n-2}."""
    m = _half_integer_level(sigma)
    inv = ball_invariants(n)
    prediction = inv["a0"] / math.factorial(n - 1) * sigma ** (n - 1) + inv["a1"] / math.factorial(n - 2) * sigma ** (
        n - 2
    )
    count = counting_function(n, m)
    return WeylPoint(n, float(sigma), count, prediction, count - prediction)


def weyl_table(n: int, max_level: int) -> List[WeylPoint]:
    """Residuals at every sigma = m + 1/2, m = 0..max_level, with a running count."""
    inv = ball_invariants(n)
    c0 = inv["a0"] / math.factorial(n - 1)
    c1 = inv["a1"] / math.factorial(n - 2)
    out = []
    count = 0
    for m in range(max_level + 1):
        count += steklov_multiplicity(n, m)
        s = m + 0.5
        pred = c0 * s ** (n - 1) + c1 * s ** (n - 2)
        out.append(WeylPoint(n, s, count, pred, count - pred))
    return out
