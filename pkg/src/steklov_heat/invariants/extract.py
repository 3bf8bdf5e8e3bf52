"""From parametrix symbols to exact pointwise heat invariants a_k(P)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Dict, List, Tuple

from ..engine.algebra import INV_METRIC, LOG_VOL, METRIC, NORMAL, GaussianRational, JetIndeterminate, SymbolSum
from ..engine.recursion import dtn_symbols, parametrix_for_dimension
from .curvature import (
    LAMBDA,
    MIXED,
    CurvaturePolynomial,
    ExactScalar,
    Monomial,
    NotRealError,
    Poly,
    invariant_prefactor,
    lam,
    mixed,
    mjet,
    monomial_name,
    poly_add,
    poly_canonical,
    poly_mul,
    ric,
    ricci_to_riemann,
    riem,
)


class MalformedParametrixError(ValueError):
    pass


class UnsupportedDepthError(ValueError):
    pass


class DivergentMomentError(ValueError):
    pass


class InternalInconsistencyError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# contour integration


@dataclass(frozen=True)
class ContourReduced:
    """Resolvent-free symbol; the e^{-sqrt(Q)} weight and prefactor are implicit."""

    symbol: SymbolSum
    prefactor: ExactScalar


def contour_reduce(s: SymbolSum) -> ContourReduced:
    """Integrate ``e^{-lam} (sqrt(Q) - lam)^{-l}`` over the contour, term by term.

    Each resolvent power contributes ``1/(l-1)!``; the common factor
    ``i * (-2 pi i) / (2 pi)^n`` is recorded once as the prefactor
    ``(2 pi)^{-(n-1)}``.
    """
    acc = {}
    for (e, l, xi, jets), c in s.items():
        if l < 1:
            raise MalformedParametrixError(f"term without resolvent factor: e={e}, xi={xi}")
        key = (e, 0, xi, jets)
        v = c * Fraction(1, factorial(l - 1))
        old = acc.get(key)
        acc[key] = v if old is None else old + v
    n = s.dim
    return ContourReduced(SymbolSum(n, acc), ExactScalar(Fraction(1, 2 ** (n - 1)), -(n - 1)))


# ---------------------------------------------------------------------------
# evaluation at the base point


def _riem_sym(a, g, b, e, scale) -> Poly:
    """scale * (R_{a g b e} + R_{a e b g})."""
    out: Poly = {}
    poly_add(out, riem(a, g, b, e), scale)
    poly_add(out, riem(a, e, b, g), scale)
    return out


@lru_cache(maxsize=None)
def _jet_value(jet: JetIndeterminate, n: int) -> Tuple[Tuple[Monomial, Fraction], ...]:
    fam, a, b, derivs = jet
    w = len(derivs)
    tan = range(1, n)
    out: Poly = {}
    if w == 0:
        if fam != LOG_VOL and a == b:
            out = {(): Fraction(1)}
    elif w == 1:
        if derivs[0] == NORMAL:
            if fam == METRIC and a == b:
                out = {(lam(a),): Fraction(-2)}
            elif fam == INV_METRIC and a == b:
                out = {(lam(a),): Fraction(2)}
            elif fam == LOG_VOL:
                out = {(lam(c),): Fraction(-2) for c in tan}
    elif w == 2:
        d0, d1 = derivs
        if d0 != NORMAL:
            g, e = d0, d1
            if fam == INV_METRIC:
                out = _riem_sym(a, g, b, e, Fraction(1, 3))
            elif fam == METRIC:
                out = _riem_sym(a, g, b, e, Fraction(-1, 3))
            else:
                out = {(ric(g, e),): Fraction(-2, 3)}
        elif d1 == NORMAL:
            if fam == METRIC:
                out = {(mjet(a, b),): Fraction(1)}
            elif fam == INV_METRIC:
                out = {(mjet(a, b),): Fraction(-1)}
                if a == b:
                    out[(lam(a), lam(a))] = Fraction(8)
            else:
                out = {(mjet(c, c),): Fraction(1) for c in tan}
                for c in tan:
                    out[(lam(c), lam(c))] = Fraction(-4)
        else:
            out = {(mixed(fam, a, b, d1),): Fraction(1)}
    else:
        raise UnsupportedDepthError(f"jet {jet.label()} has weight {w}; only weights <= 2 are tabulated")
    return tuple(sorted(poly_canonical(out).items()))


def jet_value(jet: JetIndeterminate, n: int) -> Poly:
    """Value of a jet at the base point as a polynomial in curvature data."""
    return dict(_jet_value(jet, n))


def substitution_table(n: int) -> Dict[JetIndeterminate, Poly]:
    """All jets of weight <= 2 that occur in dimension n, with their values at P."""
    from ..engine.algebra import inv_metric, log_vol, metric

    dirs = range(0, n)
    derivs = [()] + [(d,) for d in dirs] + [(d0, d1) for d0 in dirs for d1 in dirs if d0 <= d1]
    table = {}
    for ds in derivs:
        table[log_vol(*ds)] = jet_value(log_vol(*ds), n)
        for a in range(1, n):
            for b in range(a, n):
                for make in (inv_metric, metric):
                    jet = make(a, b, *ds)
                    table[jet] = jet_value(jet, n)
    return table


@dataclass
class PointSymbol:
    """Symbol at P: ``(e, l, xi, curvature monomial) -> coeff`` with Q^{e/2} = |xi|^e."""

    dim: int
    data: Dict[tuple, GaussianRational]
    prefactor: ExactScalar | None = None

    def __len__(self):
        return len(self.data)

    def coefficient(self, e=0, l=0, xi=(), mono=()) -> GaussianRational:
        return self.data.get((e, l, tuple(sorted(xi)), tuple(sorted(mono))), GaussianRational())

    def items(self):
        return sorted(self.data.items(), key=lambda kv: kv[0])


def evaluate_at_P(s, n: int | None = None) -> PointSymbol:
    """Substitute the jet values at the base point (g(P) = Id, diagonal shape operator)."""
    prefactor = None
    if isinstance(s, ContourReduced):
        prefactor = s.prefactor
        s = s.symbol
    n = s.dim if n is None else n
    if n != s.dim:
        raise ValueError(f"dimension mismatch: {n} vs {s.dim}")
    acc: Dict[tuple, GaussianRational] = {}
    for (e, l, xi, jets), c in s.items():
        value: Poly = {(): Fraction(1)}
        for jet in jets:
            jv = _jet_value(jet, n)
            if not jv:
                value = {}
                break
            value = poly_mul(value, dict(jv))
            if not value:
                break
        for mono, v in value.items():
            key = (e, l, xi, mono)
            add = c * v
            old = acc.get(key)
            acc[key] = add if old is None else old + add
    return PointSymbol(n, {k: v for k, v in acc.items() if v}, prefactor)


# ---------------------------------------------------------------------------
# moments


def _double_factorial_odd(m: int) -> int:
    """(2m - 1)!!"""
    return prod(range(1, 2 * m, 2)) if m > 0 else 1


def xi_moment(n: int, k: int, m=()) -> Fraction:
    """``int e^{-|xi|} |xi|^{k - 2 sum m} prod (xi^a)^{2 m_a} dxi`` over R^{n-1}, in units of V_n.

    ``m`` lists the half-exponents of the directions that appear.
    """
    m = tuple(x for x in m if x)
    if len(m) > n - 1:
        raise ValueError(f"{len(m)} directions requested in R^{n - 1}")
    if any(x < 0 for x in m):
        raise ValueError("exponents must be nonnegative")
    arg = k + n - 1
    if arg < 1:
        raise DivergentMomentError(f"moment diverges: k={k}, n={n}")
    num = factorial(arg - 1)
    for x in m:
        num *= _double_factorial_odd(x)
    den = 1
    for j in range(sum(m)):
        den *= n - 1 + 2 * j
    return Fraction(num, den)


def xi_integral(n: int, e: int, xi: Tuple[int, ...]) -> Fraction:
    """Integral of ``e^{-|xi|} |xi|^e * xi-monomial`` in units of V_n; odd monomials give 0."""
    counts: Dict[int, int] = {}
    for d in xi:
        counts[d] = counts.get(d, 0) + 1
    if any(c % 2 for c in counts.values()):
        return Fraction(0)
    return xi_moment(n, e + len(xi), tuple(c // 2 for c in counts.values()))


# ---------------------------------------------------------------------------
# the pipeline


@dataclass
class Derivation:
    n: int
    k: int
    polynomial: CurvaturePolynomial
    stage_counts: Dict[str, int] = field(default_factory=dict)
    mixed_jet_coefficients: Dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0


def _check_local(n: int, k: int) -> None:
    if k not in (0, 1, 2):
        raise ValueError(f"k must be 0, 1 or 2 (got {k})")
    if n < k + 1 or n < 2:
        raise ValueError(f"a_{k} is not local in dimension {n}")


def integrate_point_symbol(p: PointSymbol) -> Tuple[Poly, Dict[str, int]]:
    """xi-integrate a resolvent-free point symbol, keeping imaginary parts."""
    n = p.dim
    body: Dict[Monomial, GaussianRational] = {}
    odd = 0
    for (e, l, xi, mono), c in p.data.items():
        if l:
            raise MalformedParametrixError("resolvent factor survived contour integration")
        w = xi_integral(n, e, xi)
        if not w:
            odd += 1
            continue
        v = c * w
        old = body.get(mono)
        body[mono] = v if old is None else old + v
    return {m: c for m, c in body.items() if c}, {"xi_odd_dropped": odd}


def derive_invariant(n: int, k: int) -> Derivation:
    """Run the full exact pipeline for a_k(P) and return it with diagnostics."""
    _check_local(n, k)
    t0 = time.perf_counter()
    counts: Dict[str, int] = {}
    rs = dtn_symbols(n, k)
    counts["dtn_terms"] = sum(len(r) for r in rs)
    s = parametrix_for_dimension(n, k)[k]
    counts["parametrix_terms"] = len(s)
    reduced = contour_reduce(s)
    counts["contour_reduced_terms"] = len(reduced.symbol)
    at_p = evaluate_at_P(reduced)
    counts["point_terms"] = len(at_p)
    counts["point_terms_with_mixed_jets"] = sum(
        1 for (_, _, _, mono) in at_p.data if any(ind[0] == MIXED for ind in mono)
    )
    raw, extra = integrate_point_symbol(at_p)
    counts.update(extra)
    counts["integrated_monomials"] = len(raw)

    imaginary = {monomial_name(m): str(c) for m, c in raw.items() if not c.is_real}
    if imaginary:
        raise InternalInconsistencyError(f"imaginary parts survive in a_{k}, n={n}: {imaginary}")
    real = {m: c.re for m, c in raw.items()}
    mixed_coeffs = {monomial_name(m): str(c) for m, c in real.items() if any(ind[0] == MIXED for ind in m)}
    if mixed_coeffs:
        raise InternalInconsistencyError(f"mixed jets survive in a_{k}, n={n}: {mixed_coeffs}")
    body = ricci_to_riemann(real, n)
    poly = CurvaturePolynomial(n, body, invariant_prefactor(n))
    counts["final_monomials"] = len(poly.body)
    return Derivation(n, k, poly, counts, mixed_coeffs, time.perf_counter() - t0)


def heat_invariant(n: int, k: int) -> CurvaturePolynomial:
    """Exact a_k(P), k in {0, 1, 2}, as a polynomial in curvature data at P."""
    return derive_invariant(n, k).polynomial


# ---------------------------------------------------------------------------
# experimental: jet-level a_3


def _flat_value(jet: JetIndeterminate):
    """Zeroth jets and first tangential jets at P; None keeps the jet symbolic."""
    fam, a, b, derivs = jet
    if not derivs:
        return 1 if (fam != LOG_VOL and a == b) else 0
    if len(derivs) == 1 and derivs[0] != NORMAL:
        return 0
    return None


def raw_jet_invariant(n: int, k: int) -> Dict[Tuple[JetIndeterminate, ...], GaussianRational]:
    """xi-integrated a_k(P) with higher jets left symbolic (experimental, no curvature conversion).

    Only g(P) = Id and vanishing first tangential derivatives are used. The
    result carries the usual prefactor V_n (2 pi)^{-(n-1)}.
    """
    if n < k + 1:
        raise ValueError(f"a_{k} is not local in dimension {n}")
    s = parametrix_for_dimension(n, k)[k]
    reduced = contour_reduce(s).symbol
    out: Dict[Tuple[JetIndeterminate, ...], GaussianRational] = {}
    for (e, _, xi, jets), c in reduced.items():
        w = xi_integral(n, e, xi)
        if not w:
            continue
        kept = []
        for jet in jets:
            v = _flat_value(jet)
            if v is None:
                kept.append(jet)
            elif v == 0:
                break
        else:
            key = tuple(kept)
            add = c * w
            old = out.get(key)
            out[key] = add if old is None else old + add
    return {key: c for key, c in sorted(out.items()) if c}
