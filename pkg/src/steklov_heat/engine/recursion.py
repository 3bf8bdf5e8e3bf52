"""Symbol of the Dirichlet-to-Neumann operator and the resolvent parametrix.

Both recursions run in boundary normal coordinates at a fixed dimension ``n``.
The DtN symbol follows the Riccati factorisation of the Laplacian
``D_n^2 + i E D_n + Q(x', D_x)``; the parametrix is the usual Seeley
construction for ``(DtN - lam)^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .algebra import (
    NORMAL,
    DimensionError,
    GaussianRational,
    JetIndeterminate,
    Nor,
    SymbolSum,
    SymbolTerm,
    Tan,
    Xi,
    diff,
    inv_metric,
    log_vol,
    metric,
    minus_i_power,
    mul,
    sum_all,
)


class MissingOrderError(ValueError):
    pass


def build_operator_data(n: int) -> Tuple[SymbolSum, SymbolSum, SymbolSum]:
    """Return ``(q2, q1, E)`` for the Laplacian in boundary normal coordinates."""
    if n < 2:
        raise DimensionError(f"dimension must be >= 2, got {n}")
    tan = range(1, n)
    minus_i = GaussianRational(0, -1)
    q2, q1, E = [], [], []
    for a in tan:
        for b in tan:
            q2.append(SymbolTerm(GaussianRational(1), 0, 0, tuple(sorted((a, b))), (inv_metric(a, b),)))
            # -i (1/2 U^{ab} D_a + U^{ab}_a) xi^b
            q1.append(
                SymbolTerm(minus_i * Fraction(1, 2), 0, 0, (b,), tuple(sorted((inv_metric(a, b), log_vol(a)))))
            )
            q1.append(SymbolTerm(minus_i, 0, 0, (b,), (inv_metric(a, b, a),)))
            E.append(
                SymbolTerm(
                    GaussianRational(Fraction(-1, 2)),
                    0,
                    0,
                    (),
                    tuple(sorted((inv_metric(a, b), metric(a, b, NORMAL)))),
                )
            )
    return (SymbolSum.from_terms(n, q2), SymbolSum.from_terms(n, q1), SymbolSum.from_terms(n, E))


def multi_indices(n: int, size: int):
    """Tangential multi-indices of the given length as sorted tuples, with K!."""
    for K in combinations_with_replacement(range(1, n), size):
        kfact = 1
        for d in set(K):
            kfact *= factorial(K.count(d))
        yield K, kfact


class _Derivatives:
    """Memoised iterated derivatives of one symbol, keyed by multi-index."""

    def __init__(self, s: SymbolSum, kind: str):
        self.kind = kind
        self._cache: Dict[tuple, SymbolSum] = {(): s}

    def __call__(self, K: tuple) -> SymbolSum:
        hit = self._cache.get(K)
        if hit is None:
            direction = Xi(K[-1]) if self.kind == "xi" else Tan(K[-1])
            hit = diff(self(K[:-1]), direction)
            self._cache[K] = hit
        return hit


def _composition_sum(n, pairs, xi_der, x_der, first, second) -> SymbolSum:
    """sum over (j, k, |K|) of (-i)^|K| / K! d_xi^K first[j] d_x^K second[k]."""
    parts = []
    for j, k, size in pairs:
        factor = minus_i_power(size)
        for K, kfact in multi_indices(n, size):
            prod = mul(xi_der[j](K), x_der[k](K))
            if len(prod):
                parts.append(prod.scale(factor * Fraction(1, kfact)))
    return sum_all(n, parts)


@lru_cache(maxsize=None)
def _dtn_hat(n: int, depth: int) -> Tuple[SymbolSum, ...]:
    q2, q1, E = build_operator_data(n)
    sqrt_q = SymbolSum.monomial(n, 1, e=1)
    half_inv_sqrt_q = SymbolSum.monomial(n, Fraction(1, 2), e=-1)
    rhat: Dict[int, SymbolSum] = {1: -sqrt_q}
    if depth >= 1:
        minus_i = GaussianRational(0, -1)
        cross = sum_all(
            n,
            [mul(diff(sqrt_q, Xi(g)), diff(sqrt_q, Tan(g))).scale(minus_i) for g in range(1, n)],
        )
        inner = cross - q1 - diff(sqrt_q, Nor) + mul(E, sqrt_q)
        rhat[0] = mul(half_inv_sqrt_q, inner)
    xi_der: Dict[int, _Derivatives] = {}
    x_der: Dict[int, _Derivatives] = {}
    for m in range(0, depth - 1):
        for j in range(-m, 2):
            if j not in xi_der:
                xi_der[j] = _Derivatives(rhat[j], "xi")
                x_der[j] = _Derivatives(rhat[j], "x")
        pairs = [
            (j, k, j + k + m)
            for j in range(-m, 2)
            for k in range(-m, 2)
            if j + k + m >= 0
        ]
        inner = _composition_sum(n, pairs, xi_der, x_der, rhat, rhat)
        inner = inner + diff(rhat[-m], Nor) - mul(E, rhat[-m])
        rhat[-m - 1] = mul(half_inv_sqrt_q, inner)
    return tuple(rhat[1 - i] for i in range(depth + 1))


def dtn_hat_symbols(n: int, depth: int) -> List[SymbolSum]:
    """``[rhat_1, rhat_0, ..., rhat_{1-depth}]`` before the sign flip."""
    if n < 2:
        raise DimensionError(f"dimension must be >= 2, got {n}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return list(_dtn_hat(n, depth))


@lru_cache(maxsize=None)
def _dtn(n: int, depth: int) -> Tuple[SymbolSum, ...]:
    return tuple(-r for r in _dtn_hat(n, depth))


def dtn_symbols(n: int, depth: int) -> List[SymbolSum]:
    """Full-symbol pieces ``[r_1, r_0, ..., r_{1-depth}]`` of the DtN operator.

    The DtN operator is minus the restriction of the factor to ``x^n = 0``;
    restriction leaves the jets untouched.
    """
    if n < 2:
        raise DimensionError(f"dimension must be >= 2, got {n}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    return list(_dtn(n, depth))


def _parametrix(rs: Sequence[SymbolSum], depth: int) -> Tuple[SymbolSum, ...]:
    n = rs[0].dim
    sqrt_q = SymbolSum.monomial(n, 1, e=1)
    if rs[0] != sqrt_q:
        raise ValueError("r_1 must be the principal symbol sqrt(Q)")
    for idx in range(depth + 1):
        if idx >= len(rs):
            raise MissingOrderError(f"parametrix depth {depth} needs r_{1 - idx}")
        for term in rs[idx].terms:
            if term.l:
                raise ValueError(f"r_{1 - idx} carries a resolvent factor")
    r = {1 - i: rs[i] for i in range(depth + 1)}
    s: Dict[int, SymbolSum] = {-1: SymbolSum.monomial(n, 1, l=1)}
    neg_resolvent = SymbolSum.monomial(n, -1, l=1)
    xi_der = {k: _Derivatives(r[k], "xi") for k in r}
    x_der: Dict[int, _Derivatives] = {}
    for m in range(1, depth + 1):
        for j in range(-m, 0):
            if j not in x_der:
                x_der[j] = _Derivatives(s[j], "x")
        pairs = [
            (k, j, m + k + j)
            for j in range(-m, 0)
            for k in range(-m, 2)
            if m + k + j >= 0
        ]
        inner = _composition_sum(n, pairs, xi_der, x_der, r, s)
        s[-1 - m] = mul(neg_resolvent, inner)
    return tuple(s[-1 - i] for i in range(depth + 1))


def parametrix_symbols(rs: Sequence[SymbolSum], depth: int) -> List[SymbolSum]:
    """``[s_{-1}, ..., s_{-1-depth}]`` of the parametrix of ``DtN - lam``."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if not rs:
        raise MissingOrderError("parametrix needs r_1")
    return list(_parametrix(rs, depth))


@lru_cache(maxsize=None)
def _parametrix_cached(n: int, depth: int) -> Tuple[SymbolSum, ...]:
    return _parametrix(_dtn(n, depth), depth)


def parametrix_for_dimension(n: int, depth: int) -> List[SymbolSum]:
    """Memoised ``parametrix_symbols(dtn_symbols(n, depth), depth)``."""
    if n < 2:
        raise DimensionError(f"dimension must be >= 2, got {n}")
    return list(_parametrix_cached(n, depth))


# ---------------------------------------------------------------------------
# structure audit


@dataclass(frozen=True)
class Violation:
    term: SymbolTerm
    reason: str


@dataclass
class AuditReport:
    expected_order: int
    expected_weight: int
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def __bool__(self):
        # truthy iff there is something to report
        return bool(self.violations)


def structure_audit(s: SymbolSum, expected_order: int, family: str | None = None) -> AuditReport:
    """Check order, weight and parity of every term.

    ``family`` is ``"dtn"`` (weight ``1 - order``) or ``"parametrix"``
    (weight ``-1 - order``); by default it is read off the resolvent exponent.
    """
    if family is None:
        family = "parametrix" if any(k[1] for k, _ in s.items()) else "dtn"
    if family == "dtn":
        expected_weight = 1 - expected_order
    elif family == "parametrix":
        expected_weight = -1 - expected_order
    else:
        raise ValueError(f"unknown family {family!r}")
    report = AuditReport(expected_order, expected_weight)
    for term in s.terms:
        reasons = []
        if term.order != expected_order:
            reasons.append(f"order {term.order} != {expected_order}")
        if term.weight != expected_weight:
            reasons.append(f"weight {term.weight} != {expected_weight}")
        if (term.weight + term.normal_weight + len(term.xi)) % 2:
            reasons.append("parity sum is odd")
        if reasons:
            report.violations.append(Violation(term, "; ".join(reasons)))
    return report


def clear_caches() -> None:
    """Drop memoised symbols (used to time cold runs)."""
    _dtn_hat.cache_clear()
    _dtn.cache_clear()
    _parametrix_cached.cache_clear()
