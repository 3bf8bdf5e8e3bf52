"""Exact term algebra for symbols with a spectral parameter.

A term is ``coeff * Q**(e/2) * (sqrt(Q) - lam)**(-l) * xi-monomial * jets`` where
``Q = sum g^{ab} xi^a xi^b`` is the principal symbol of the tangential Laplacian,
``lam`` is an opaque parameter, and the jets are derivatives of the metric data
at a boundary point treated as commuting indeterminates.

Directions are integers: ``0`` is the inward normal ``x^n``, ``1..n-1`` are the
tangential coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Sequence, Tuple, Union

try:  # GMP rationals are an order of magnitude faster than fractions.Fraction
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

_RATIONAL_TYPES = (int, Fraction, type(Rational(1)))
NORMAL = 0

INV_METRIC = 0
METRIC = 1
LOG_VOL = 2

_FAMILY_NAMES = {INV_METRIC: "U", METRIC: "L", LOG_VOL: "D"}


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficients


class GaussianRational:
    """``re + i*im`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        self.re = Rational(re)
        self.im = Rational(im)

    @classmethod
    def _raw(cls, re, im) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls(value)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational._raw(a * c, b)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._raw(self.re / other, self.im / other)
        other = GaussianRational.coerce(other)
        den = other.re * other.re + other.im * other.im
        return self * GaussianRational._raw(other.re / den, -other.im / den)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


ONE = GaussianRational(1)
I_UNIT = GaussianRational(0, 1)
_MINUS_I_POWERS = (
    GaussianRational(1),
    GaussianRational(0, -1),
    GaussianRational(-1),
    GaussianRational(0, 1),
)


def minus_i_power(k: int) -> GaussianRational:
    """``(-i)**k``."""
    return _MINUS_I_POWERS[k % 4]


# ---------------------------------------------------------------------------
# jets


class JetIndeterminate(NamedTuple):
    """A derivative of g^{ab}, g_{ab} or log det g at the base point.

    ``derivs`` is a sorted multiset of directions (``0`` = normal).
    """

    family: int
    i: int
    j: int
    derivs: Tuple[int, ...]

    @property
    def weight(self) -> int:
        return len(self.derivs)

    @property
    def normal_weight(self) -> int:
        return self.derivs.count(NORMAL)

    def derive(self, direction: int) -> "JetIndeterminate":
        return JetIndeterminate(self.family, self.i, self.j, tuple(sorted(self.derivs + (direction,))))

    def label(self) -> str:
        ds = "".join("n" if d == NORMAL else str(d) for d in self.derivs)
        if self.family == INV_METRIC:
            return f"U^{{{self.i}{self.j}}}_{{{ds}}}"
        if self.family == METRIC:
            return f"L_{{{self.i}{self.j},{ds}}}"
        return f"D_{{{ds}}}"


def inv_metric(a: int, b: int, *derivs: int) -> JetIndeterminate:
    if a > b:
        a, b = b, a
    return JetIndeterminate(INV_METRIC, a, b, tuple(sorted(derivs)))


def metric(a: int, b: int, *derivs: int) -> JetIndeterminate:
    if a > b:
        a, b = b, a
    return JetIndeterminate(METRIC, a, b, tuple(sorted(derivs)))


def log_vol(*derivs: int) -> JetIndeterminate:
    return JetIndeterminate(LOG_VOL, 0, 0, tuple(sorted(derivs)))


# ---------------------------------------------------------------------------
# terms and sums

Key = Tuple[int, int, Tuple[int, ...], Tuple[JetIndeterminate, ...]]


@dataclass(frozen=True)
class SymbolTerm:
    coeff: GaussianRational
    e: int
    l: int
    xi: Tuple[int, ...]
    jets: Tuple[JetIndeterminate, ...]

    @property
    def key(self) -> Key:
        return (self.e, self.l, self.xi, self.jets)

    @property
    def order(self) -> int:
        return len(self.xi) + self.e - self.l

    @property
    def weight(self) -> int:
        return sum(len(j.derivs) for j in self.jets)

    @property
    def normal_weight(self) -> int:
        return sum(j.derivs.count(NORMAL) for j in self.jets)

    @property
    def xi_parity(self) -> int:
        return len(self.xi) % 2

    def dump_line(self) -> str:
        xi = ",".join(map(str, self.xi))
        jets = " ".join(j.label() for j in self.jets)
        return (
            f"{self.coeff}\te={self.e}\tl={self.l}\txi=[{xi}]\tjets=[{jets}]"
            f"\tw={self.weight}\tnw={self.normal_weight}"
        )


def _merge(xs: tuple, ys: tuple) -> tuple:
    if not xs:
        return ys
    if not ys:
        return xs
    return tuple(sorted(xs + ys))


class SymbolSum:
    """Canonical sum of :class:`SymbolTerm` in a fixed dimension ``n``.

    Terms with equal ``(e, l, xi, jets)`` are merged and zeros dropped on
    construction, so two sums are equal iff their term tables agree.
    Instances are treated as immutable.
    """

    __slots__ = ("dim", "_data")

    def __init__(self, dim: int, data: Dict[Key, GaussianRational] | None = None):
        if dim < 2:
            raise DimensionError(f"dimension must be >= 2, got {dim}")
        self.dim = dim
        self._data = {k: c for k, c in (data or {}).items() if c}

    @classmethod
    def from_terms(cls, dim: int, terms: Iterable[SymbolTerm]) -> "SymbolSum":
        acc: Dict[Key, GaussianRational] = {}
        for t in terms:
            _accumulate(acc, t.key, GaussianRational.coerce(t.coeff))
        return cls(dim, acc)

    @classmethod
    def monomial(cls, dim: int, coeff=1, e: int = 0, l: int = 0, xi=(), jets=()) -> "SymbolSum":
        key = (e, l, tuple(sorted(xi)), tuple(sorted(jets)))
        return cls(dim, {key: GaussianRational.coerce(coeff)})

    # -- views ----------------------------------------------------------------
    def items(self) -> Iterator[Tuple[Key, GaussianRational]]:
        return iter(self._data.items())

    @property
    def terms(self) -> List[SymbolTerm]:
        return [SymbolTerm(c, *k) for k, c in sorted(self._data.items(), key=lambda kv: kv[0])]

    def __len__(self):
        return len(self._data)

    def __iter__(self):
        return iter(self.terms)

    def coefficient(self, e=0, l=0, xi=(), jets=()) -> GaussianRational:
        key = (e, l, tuple(sorted(xi)), tuple(sorted(jets)))
        return self._data.get(key, GaussianRational())

    def canonical_form(self) -> Tuple[Tuple[Key, Tuple[Fraction, Fraction]], ...]:
        return tuple((k, (Fraction(c.re), Fraction(c.im))) for k, c in sorted(self._data.items(), key=lambda kv: kv[0]))

    def __eq__(self, other):
        if not isinstance(other, SymbolSum):
            return NotImplemented
        return self.dim == other.dim and self._data == other._data

    def __hash__(self):
        return hash((self.dim, self.canonical_form()))

    def __repr__(self):
        return f"SymbolSum(dim={self.dim}, terms={len(self)})"

    def dump(self) -> str:
        """One term per line: coeff, e, l, xi monomial, jets, weights."""
        return "\n".join(t.dump_line() for t in self.terms)

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other: "SymbolSum"):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        self._check(other)
        acc = dict(self._data)
        for k, c in other._data.items():
            _accumulate(acc, k, c)
        return SymbolSum(self.dim, acc)

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        return self + (-other)

    def __neg__(self) -> "SymbolSum":
        return SymbolSum(self.dim, {k: -c for k, c in self._data.items()})

    def scale(self, factor) -> "SymbolSum":
        factor = GaussianRational.coerce(factor)
        return SymbolSum(self.dim, {k: c * factor for k, c in self._data.items()})

    def __mul__(self, other: "SymbolSum") -> "SymbolSum":
        return mul(self, other)

    def evaluate(self, jet_value: Callable[[JetIndeterminate], float], xi: Sequence[float], lam: complex = 0) -> complex:
        """Numeric value for given jet values, covector ``xi[1..n-1]`` and ``lam``.

        ``xi`` is indexed by direction, so ``xi[0]`` is ignored. Q is built
        from the undifferentiated inverse-metric jets.
        """
        tan = _tangential(self.dim)
        q = sum(jet_value(inv_metric(a, b)) * xi[a] * xi[b] for a in tan for b in tan)
        root = q**0.5
        total = 0j
        for (e, l, xs, jets), c in self._data.items():
            v = complex(c) * root**e / (root - lam) ** l
            for a in xs:
                v *= xi[a]
            for j in jets:
                v *= jet_value(j)
            total += v
        return total


def _accumulate(acc: dict, key, coeff) -> None:
    old = acc.get(key)
    acc[key] = coeff if old is None else old + coeff


def zero(dim: int) -> SymbolSum:
    return SymbolSum(dim)


def mul(a: SymbolSum, b: SymbolSum) -> SymbolSum:
    """Exact distributive product."""
    a._check(b)
    acc: Dict[Key, GaussianRational] = {}
    get = acc.get
    for (e1, l1, x1, j1), c1 in a._data.items():
        for (e2, l2, x2, j2), c2 in b._data.items():
            key = (e1 + e2, l1 + l2, _merge(x1, x2), _merge(j1, j2))
            c = c1 * c2
            old = get(key)
            acc[key] = c if old is None else old + c
    return SymbolSum(a.dim, acc)


def sum_all(dim: int, parts: Iterable[SymbolSum]) -> SymbolSum:
    acc: Dict[Key, GaussianRational] = {}
    for p in parts:
        if p.dim != dim:
            raise DimensionError(f"dimension mismatch: {dim} vs {p.dim}")
        for k, c in p._data.items():
            _accumulate(acc, k, c)
    return SymbolSum(dim, acc)


# ---------------------------------------------------------------------------
# differentiation


class Direction(NamedTuple):
    kind: str  # "xi" | "x"
    index: int

    def __str__(self):
        if self.kind == "xi":
            return f"Xi({self.index})"
        return "Nor" if self.index == NORMAL else f"Tan({self.index})"


def Xi(gamma: int) -> Direction:
    return Direction("xi", gamma)


def Tan(gamma: int) -> Direction:
    if gamma < 1:
        raise ValueError("tangential directions are 1..n-1")
    return Direction("x", gamma)


Nor = Direction("x", NORMAL)


def _tangential(dim: int) -> range:
    return range(1, dim)


def _dq_dx(dim: int, t: int):
    """Pieces of d_t Q = sum_{a,b} U^{ab}_t xi^a xi^b as (xi, jet, multiplicity)."""
    out = []
    for a in _tangential(dim):
        for b in range(a, dim):
            out.append(((a, b), inv_metric(a, b, t), 1 if a == b else 2))
    return out


def _dq_dxi(dim: int, g: int):
    """Pieces of d_{xi^g} Q / 2 = sum_b U^{gb} xi^b."""
    return [((b,), inv_metric(g, b)) for b in _tangential(dim)]


def diff(s: SymbolSum, direction: Direction) -> SymbolSum:
    """Exact Leibniz derivative of ``s`` in ``xi^g``, ``x^g`` or ``x^n``.

    ``lam`` is never differentiated; Q-powers and resolvent powers are handled
    by the chain rule with ``d sqrt(Q) = dQ / (2 sqrt(Q))``.
    """
    dim = s.dim
    acc: Dict[Key, GaussianRational] = {}
    get = acc.get

    def add(key, c):
        old = get(key)
        acc[key] = c if old is None else old + c

    if direction.kind == "xi":
        g = direction.index
        if not 1 <= g < dim:
            raise ValueError(f"xi direction {g} out of range for n={dim}")
        pieces = _dq_dxi(dim, g)
        for (e, l, xi, jets), c in s._data.items():
            cnt = xi.count(g)
            if cnt:
                pos = xi.index(g)
                add((e, l, xi[:pos] + xi[pos + 1:], jets), c * cnt)
            if e:
                ce = c * e
                for xa, jet in pieces:
                    add((e - 2, l, _merge(xi, xa), _merge(jets, (jet,))), ce)
            if l:
                cl = c * (-l)
                for xa, jet in pieces:
                    add((e - 1, l + 1, _merge(xi, xa), _merge(jets, (jet,))), cl)
    else:
        t = direction.index
        if not 0 <= t < dim:
            raise ValueError(f"x direction {t} out of range for n={dim}")
        pieces = _dq_dx(dim, t)
        half = Rational(1, 2)
        for (e, l, xi, jets), c in s._data.items():
            prev = None
            for pos, jet in enumerate(jets):
                if jet == prev:
                    continue
                prev = jet
                cnt = jets.count(jet)
                rest = jets[:pos] + jets[pos + 1:]
                add((e, l, xi, _merge(rest, (jet.derive(t),))), c * cnt)
            if e:
                ce = c * Rational(e, 2)
                for xa, jet, mult in pieces:
                    add((e - 2, l, _merge(xi, xa), _merge(jets, (jet,))), ce * mult)
            if l:
                cl = c * (-l * half)
                for xa, jet, mult in pieces:
                    add((e - 1, l + 1, _merge(xi, xa), _merge(jets, (jet,))), cl * mult)
    return SymbolSum(dim, acc)


def diff_multi(s: SymbolSum, directions: Iterable[Direction]) -> SymbolSum:
    for d in directions:
        s = diff(s, d)
    return s
