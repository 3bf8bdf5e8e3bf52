"""Curvature indeterminates, Riemann canonicalisation and curvature polynomials.

Indeterminates are plain int tuples tagged by their first entry so that
monomials (sorted tuples of indeterminates) have a total order:

    (LAMBDA, a)                 principal curvature lambda_a
    (RIEM, a, b, c, d)          boundary Riemann tensor R_abcd
    (RIC, a, b)                 boundary Ricci tensor, a <= b
    (MJET, a, b)                second normal jet g_{ab,nn}, a <= b
    (MIXED, family, a, b, t)    second jet with one normal and one tangential derivative
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, Mapping, Tuple

LAMBDA, RIEM, RIC, MJET, MIXED = range(5)

Indeterminate = Tuple[int, ...]
Monomial = Tuple[Indeterminate, ...]
Poly = Dict[Monomial, Fraction]


def lam(a: int) -> Indeterminate:
    return (LAMBDA, a)


def ric(a: int, b: int) -> Indeterminate:
    return (RIC, min(a, b), max(a, b))


def mjet(a: int, b: int) -> Indeterminate:
    return (MJET, min(a, b), max(a, b))


def mixed(family: int, a: int, b: int, t: int) -> Indeterminate:
    return (MIXED, family, min(a, b), max(a, b), t)


def _riem_orbit(i, j, k, l):
    return (
        ((i, j, k, l), 1),
        ((j, i, k, l), -1),
        ((i, j, l, k), -1),
        ((j, i, l, k), 1),
        ((k, l, i, j), 1),
        ((l, k, i, j), -1),
        ((k, l, j, i), -1),
        ((l, k, j, i), 1),
    )


_RIEM_CACHE: Dict[tuple, Tuple[int, Indeterminate | None]] = {}


def canonical_riem(i: int, j: int, k: int, l: int) -> Tuple[int, Indeterminate | None]:
    """Lexicographic representative of R_ijkl under the pair symmetries.

    Returns ``(sign, (RIEM, ...))`` or ``(0, None)`` when the symmetries force
    the component to vanish. The first Bianchi identity is not used.
    """
    key = (i, j, k, l)
    hit = _RIEM_CACHE.get(key)
    if hit is not None:
        return hit
    orbit = _riem_orbit(i, j, k, l)
    best = min(idx for idx, _ in orbit)
    signs = {s for idx, s in orbit if idx == best}
    if len(signs) > 1:
        out = (0, None)
    else:
        out = (signs.pop(), (RIEM,) + best)
    _RIEM_CACHE[key] = out
    return out


def riem(i: int, j: int, k: int, l: int) -> Poly:
    """R_ijkl as a (signed, canonical) polynomial."""
    sign, ind = canonical_riem(i, j, k, l)
    return {(ind,): Fraction(sign)} if sign else {}


def canonicalize(mono: Iterable[Indeterminate]) -> Tuple[int, Monomial]:
    """Canonical form of a monomial, with the sign picked up on the way.

    A zero sign means the monomial vanishes identically.
    """
    sign = 1
    out = []
    for ind in mono:
        if ind[0] == RIEM:
            s, c = canonical_riem(*ind[1:])
            if not s:
                return 0, ()
            sign *= s
            out.append(c)
        elif ind[0] in (RIC, MJET):
            out.append((ind[0], min(ind[1], ind[2]), max(ind[1], ind[2])))
        elif ind[0] == MIXED:
            out.append(mixed(*ind[1:]))
        else:
            out.append(tuple(ind))
    return sign, tuple(sorted(out))


# ---------------------------------------------------------------------------
# small exact polynomial helpers


def poly_add(acc: Poly, other: Mapping[Monomial, Fraction], scale=1) -> Poly:
    for m, c in other.items():
        v = acc.get(m, 0) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
    return acc


def poly_mul(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction]) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def poly_scale(a: Mapping[Monomial, Fraction], c) -> Poly:
    return {m: v * c for m, v in a.items() if v * c}


def poly_canonical(a: Mapping[Monomial, Fraction]) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        sign, cm = canonicalize(m)
        if sign:
            poly_add(out, {cm: c * sign})
    return out


def ricci_to_riemann(a: Mapping[Monomial, Fraction], n: int) -> Poly:
    """Replace every Ric_ab by sum_c R_cacb and canonicalise."""
    out: Poly = {}
    for mono, c in a.items():
        term: Poly = {(): Fraction(c)}
        for ind in mono:
            if ind[0] == RIC:
                _, a_, b_ = ind
                factor: Poly = {}
                for cc in range(1, n):
                    poly_add(factor, riem(cc, a_, cc, b_))
                term = poly_mul(term, factor)
            else:
                term = poly_mul(term, {(ind,): Fraction(1)})
            if not term:
                break
        poly_add(out, term)
    return poly_canonical(out)


def indeterminate_name(ind: Indeterminate) -> str:
    kind = ind[0]
    if kind == LAMBDA:
        return f"lambda{ind[1]}"
    if kind == RIEM:
        return "R{}{}{}{}".format(*ind[1:])
    if kind == RIC:
        return "Ric{}{}".format(*ind[1:])
    if kind == MJET:
        return "M{}{}".format(*ind[1:])
    fam = "ULD"[ind[1]]
    return f"X[{fam}{ind[2]}{ind[3]};{ind[4]}n]"


def monomial_name(mono: Monomial) -> str:
    if not mono:
        return "1"
    parts = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        name = indeterminate_name(mono[i])
        parts.append(name if j - i == 1 else f"{name}^{j - i}")
        i = j
    return "*".join(parts)


# ---------------------------------------------------------------------------
# exact scalars of the form  rational * pi**p


@dataclass(frozen=True)
class ExactScalar:
    rational: Fraction
    pi_power: int = 0

    def __mul__(self, other):
        if isinstance(other, ExactScalar):
            return ExactScalar(self.rational * other.rational, self.pi_power + other.pi_power)
        return ExactScalar(self.rational * Fraction(other), self.pi_power)

    __rmul__ = __mul__

    def __float__(self):
        import math

        return float(self.rational) * math.pi ** self.pi_power

    def __str__(self):
        if self.pi_power == 0:
            return str(self.rational)
        return f"{self.rational}*pi^{self.pi_power}"


def sphere_volume(n: int) -> ExactScalar:
    """V_n = Vol(S^{n-2}) = 2 pi^{(n-1)/2} / Gamma((n-1)/2), exactly."""
    if n < 2:
        raise ValueError("n >= 2 required")
    if n % 2:  # (n-1)/2 integer
        p = (n - 1) // 2
        return ExactScalar(Fraction(2, factorial(p - 1)), p)
    m = (n - 2) // 2
    return ExactScalar(Fraction(2 * 4**m * factorial(m), factorial(2 * m)), m)


def invariant_prefactor(n: int) -> ExactScalar:
    """V_n (2 pi)^{-(n-1)}, the scalar every a_k(x) carries."""
    v = sphere_volume(n)
    return ExactScalar(v.rational / 2 ** (n - 1), v.pi_power - (n - 1))


class NotRealError(ValueError):
    pass


class CurvaturePolynomial:
    """``prefactor * sum(coeff * monomial)`` with exact rational coefficients."""

    __slots__ = ("dim", "prefactor", "body")

    def __init__(self, dim: int, body: Mapping[Monomial, object], prefactor: ExactScalar | None = None):
        self.dim = dim
        self.prefactor = prefactor if prefactor is not None else invariant_prefactor(dim)
        clean: Poly = {}
        for mono, c in body.items():
            im = getattr(c, "im", 0)
            if im:
                raise NotRealError(f"imaginary coefficient {c} on {monomial_name(mono)}")
            re = getattr(c, "re", c)
            poly_add(clean, {mono: Fraction(re)})
        self.body = poly_canonical(clean)

    def __eq__(self, other):
        if not isinstance(other, CurvaturePolynomial):
            return NotImplemented
        return self.dim == other.dim and self.prefactor == other.prefactor and self.body == other.body

    def __sub__(self, other: "CurvaturePolynomial") -> "CurvaturePolynomial":
        if self.prefactor != other.prefactor or self.dim != other.dim:
            raise ValueError("incompatible polynomials")
        return CurvaturePolynomial(self.dim, poly_add(dict(self.body), other.body, -1), self.prefactor)

    def __repr__(self):
        return f"CurvaturePolynomial(n={self.dim}, {self})"

    def __str__(self):
        if not self.body:
            return "0"
        inner = " + ".join(f"({c})*{monomial_name(m)}" for m, c in self.items())
        return f"{self.prefactor} * [{inner}]"

    def items(self):
        return sorted(self.body.items())

    def is_zero(self) -> bool:
        return not self.body

    def coefficient(self, mono: Iterable[Indeterminate]) -> Fraction:
        sign, cm = canonicalize(mono)
        return self.body.get(cm, Fraction(0)) * sign if sign else Fraction(0)

    def substitute(self, rule: Callable[[Indeterminate], Poly | None]) -> "CurvaturePolynomial":
        """Replace indeterminates; ``rule`` returns a polynomial or None to keep."""
        out: Poly = {}
        for mono, c in self.body.items():
            term: Poly = {(): c}
            for ind in mono:
                repl = rule(ind)
                term = poly_mul(term, {(ind,): Fraction(1)} if repl is None else repl)
                if not term:
                    break
            poly_add(out, term)
        return CurvaturePolynomial(self.dim, out, self.prefactor)

    def indeterminate_kinds(self) -> set:
        return {ind[0] for mono in self.body for ind in mono}

    def evaluate(self, values: Callable[[Indeterminate], float]) -> float:
        """Numeric value including the prefactor."""
        total = 0.0
        for mono, c in self.body.items():
            v = float(c)
            for ind in mono:
                v *= values(ind)
            total += v
        return float(self.prefactor) * total

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "prefactor": {"rational": str(self.prefactor.rational), "pi_power": self.prefactor.pi_power},
            "terms": [{"monomial": monomial_name(m), "coeff": str(c)} for m, c in self.items()],
        }
