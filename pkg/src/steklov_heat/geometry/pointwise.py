"""Pointwise densities a_0(x), a_1(x), a_2(x) in terms of mean and scalar curvatures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional


@dataclass(frozen=True)
class CurvatureData:
    """Curvature data at a boundary point; fields may be floats or equal-shape arrays.

    For n = 2 only ``H1`` is used. Surfaces in flat 3-space have ``R_Omega = 0``
    and ``R_M = 2 K_G``.
    """

    n: int
    H1: float
    H2: float = 0.0
    R_Omega: float = 0.0
    R_M: float = 0.0

    @classmethod
    def sphere(cls, n: int, radius: float = 1.0) -> "CurvatureData":
        """Round sphere of the given radius bounding a Euclidean ball."""
        k = 1.0 / radius
        return cls(n, H1=k, H2=k * k, R_Omega=0.0, R_M=(n - 1) * (n - 2) * k * k)


class PointwiseInvariants(NamedTuple):
    a0x: float
    a1x: float
    a2x: Optional[float]


def sphere_area(n: int, radius: float = 1.0) -> float:
    """Vol(S^{n-1}) * radius^{n-1}: boundary volume of the n-ball."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2) * radius ** (n - 1)


def density_prefactor(n: int) -> float:
    """V_n (2 pi)^{-(n-1)} with V_n = Vol(S^{n-2})."""
    vn = 2 * math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2)
    return vn / (2 * math.pi) ** (n - 1)


def pointwise_invariants(
    c: CurvatureData, sectional_curvature: Optional[float] = None, max_order: Optional[int] = None
) -> PointwiseInvariants:
    """Densities per unit boundary volume.

    ``max_order`` defaults to 2 for n >= 3 and 1 for n = 2; asking for a_2
    with n < 3 raises. With ``sectional_curvature`` the constant-curvature
    form is used, which needs only H1, R_M and K.
    """
    n = c.n
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if max_order is None:
        max_order = 2 if n >= 3 else 1
    if max_order >= 2 and n < 3:
        raise ValueError("a_2(x) is only local for n >= 3")
    pre = density_prefactor(n)
    g = math.gamma
    a0 = pre * g(n - 1) + 0.0 * c.H1  # broadcast to the shape of the data
    a1 = pre * (n - 2) * g(n - 1) / 2 * c.H1 if max_order >= 1 else None
    a2 = None
    if max_order >= 2:
        h1sq = (n - 1) * (n - 2) * (n * n - n - 4) / (n + 1) * c.H1 * c.H1
        if sectional_curvature is None:
            bracket = (
                h1sq
                - n * (n - 3) * (n - 2) / (n + 1) * c.H2
                + (n - 2) / (n - 1) * c.R_Omega
                - (n - 4) / (3 * (n - 1)) * c.R_M
            )
        else:
            bracket = (
                h1sq
                - 4 * (n * n - 3 * n - 1) / (3 * (n * n - 1)) * c.R_M
                + 2 * n * (n - 1) * (n - 2) / (n + 1) * sectional_curvature
            )
        a2 = pre * g(n - 2) / 8 * bracket
    return PointwiseInvariants(a0, a1, a2)
