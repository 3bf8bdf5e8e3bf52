"""Closed-form heat invariants a_0, a_1, a_2 rewritten in base curvature data."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict

from .curvature import (
    RIEM,
    CurvaturePolynomial,
    Poly,
    invariant_prefactor,
    lam,
    mjet,
    poly_add,
    poly_mul,
    riem,
)


def _tan(n):
    return range(1, n)


def sum_lambda(n: int) -> Poly:
    return {(lam(a),): Fraction(1) for a in _tan(n)}


def sum_lambda_sq(n: int) -> Poly:
    return {(lam(a), lam(a)): Fraction(1) for a in _tan(n)}


def mean_curvature(n: int) -> Poly:
    """H_1 = (1/(n-1)) sum lambda_a."""
    return {m: c / (n - 1) for m, c in sum_lambda(n).items()}


def mean_curvature_sq(n: int) -> Poly:
    h = mean_curvature(n)
    return poly_mul(h, h)


def second_mean_curvature(n: int) -> Poly:
    """H_2 = (1/((n-1)(n-2))) sum_{a != b} lambda_a lambda_b."""
    if n < 3:
        raise ValueError("H_2 needs n >= 3")
    out: Poly = {}
    for a in _tan(n):
        for b in _tan(n):
            if a != b:
                poly_add(out, {tuple(sorted((lam(a), lam(b)))): Fraction(1, (n - 1) * (n - 2))})
    return out


def boundary_scalar_curvature(n: int) -> Poly:
    """R_M = sum_{c,a} R_{caca}."""
    out: Poly = {}
    for c in _tan(n):
        for a in _tan(n):
            poly_add(out, riem(c, a, c, a))
    return out


def ambient_scalar_curvature(n: int) -> Poly:
    """R_Omega = R_M + 3 sum lambda^2 - sum M_aa - (sum lambda)^2 (Gauss-type identity at P)."""
    out = boundary_scalar_curvature(n)
    poly_add(out, sum_lambda_sq(n), 3)
    poly_add(out, {(mjet(a, a),): Fraction(1) for a in _tan(n)}, -1)
    sl = sum_lambda(n)
    poly_add(out, poly_mul(sl, sl), -1)
    return out


def a2_bracket_coefficients(n: int) -> Dict[str, Fraction]:
    """Coefficients of H1^2, H2, R_Omega, R_M inside a_2 = prefactor * Gamma(n-2)/8 * [...]."""
    return {
        "H1^2": Fraction((n - 1) * (n - 2) * (n * n - n - 4), n + 1),
        "H2": Fraction(-n * (n - 3) * (n - 2), n + 1),
        "R_Omega": Fraction(n - 2, n - 1),
        "R_M": Fraction(-(n - 4), 3 * (n - 1)),
    }


def a2_basis(n: int) -> Dict[str, Poly]:
    return {
        "H1^2": mean_curvature_sq(n),
        "H2": second_mean_curvature(n),
        "R_Omega": ambient_scalar_curvature(n),
        "R_M": boundary_scalar_curvature(n),
    }


def expected_invariant(n: int, k: int) -> CurvaturePolynomial:
    """a_k(P) from the closed formulas, expanded in lambda, R, M."""
    if k not in (0, 1, 2):
        raise ValueError(f"k must be 0, 1 or 2 (got {k})")
    if n < k + 1 or n < 2:
        raise ValueError(f"a_{k} is not local in dimension {n}")
    if k == 2 and n < 3:
        raise ValueError("a_2 needs n >= 3")
    pre = invariant_prefactor(n)
    if k == 0:
        return CurvaturePolynomial(n, {(): Fraction(factorial(n - 2))}, pre)
    if k == 1:
        scale = Fraction((n - 2) * factorial(n - 2), 2)
        return CurvaturePolynomial(n, {m: c * scale for m, c in mean_curvature(n).items()}, pre)
    scale = Fraction(factorial(n - 3), 8)
    body: Poly = {}
    basis = a2_basis(n)
    for name, c in a2_bracket_coefficients(n).items():
        poly_add(body, basis[name], c * scale)
    return CurvaturePolynomial(n, body, pre)


def regroup_a2(poly: CurvaturePolynomial) -> Dict[str, Fraction]:
    """Write a_2's body in the basis H1^2, H2, R_Omega, R_M.

    Coefficients are read off distinguishing monomials (M_11 only occurs in
    R_Omega, R_1212 only in R_Omega and R_M, ...) and the decomposition is then
    verified by re-expansion; a remainder raises ValueError.
    """
    n = poly.dim
    if n < 3:
        raise ValueError("a_2 needs n >= 3")
    d = n - 1
    c_omega = -poly.coefficient([mjet(1, 1)])
    # R_1212 and R_2121 both contribute to R_M
    c_rm = poly.coefficient([(RIEM, 1, 2, 1, 2)]) / 2 - c_omega
    # lambda_1^2: H1^2 gives 1/d^2, R_Omega gives 3 - 1
    c_h1 = (poly.coefficient([lam(1), lam(1)]) - 2 * c_omega) * d * d
    # lambda_1 lambda_2: H1^2 gives 2/d^2, H2 gives 2/(d(d-1)), R_Omega gives -2
    c_h2 = (poly.coefficient([lam(1), lam(2)]) - 2 * c_h1 / (d * d) + 2 * c_omega) * d * (d - 1) / 2
    out = {"H1^2": c_h1, "H2": c_h2, "R_Omega": c_omega, "R_M": c_rm}
    rebuilt: Poly = {}
    for name, b in a2_basis(n).items():
        poly_add(rebuilt, b, out[name])
    if CurvaturePolynomial(n, rebuilt, poly.prefactor) != poly:
        raise ValueError("a_2 is not in the span of H1^2, H2, R_Omega, R_M")
    return out
