from fractions import Fraction
from pathlib import Path

import pytest

from steklov_heat.engine import (
    GaussianRational,
    MissingOrderError,
    SymbolSum,
    SymbolTerm,
    Tan,
    Xi,
    diff,
    dtn_symbols,
    inv_metric,
    metric,
    mul,
    parametrix_for_dimension,
    parametrix_symbols,
    structure_audit,
)
from steklov_heat.invariants import evaluate_at_P
from steklov_heat.invariants.curvature import lam

GOLDEN = Path(__file__).parent / "golden"


def test_r1_is_sqrt_q():
    assert dtn_symbols(4, 0)[0] == SymbolSum.monomial(4, 1, e=1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_r0_at_base_point(n):
    r0 = evaluate_at_P(dtn_symbols(n, 1)[1])
    want = {}
    for a in range(1, n):
        want[(-2, 0, (a, a), (lam(a),))] = GaussianRational(Fraction(1, 2))
        want[(0, 0, (), (lam(a),))] = GaussianRational(Fraction(-1, 2))
    assert r0.data == want


def test_s_minus_one():
    (s,) = parametrix_for_dimension(3, 0)
    assert s == SymbolSum.monomial(3, 1, l=1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_s_minus_two_structure(n):
    r1, r0 = dtn_symbols(n, 1)
    s2 = parametrix_for_dimension(n, 1)[1]
    res = lambda p: SymbolSum.monomial(n, 1, l=p)
    cross = SymbolSum(n)
    for g in range(1, n):
        cross = cross + mul(diff(r1, Xi(g)), diff(r1, Tan(g)))
    want = -mul(r0, res(2)) + mul(cross, res(3)).scale(GaussianRational(0, -1))
    assert s2 == want


def test_s_minus_two_at_base_point():
    n = 3
    got = evaluate_at_P(parametrix_for_dimension(n, 1)[1])
    want = {}
    for a in range(1, n):
        want[(-2, 2, (a, a), (lam(a),))] = GaussianRational(Fraction(-1, 2))
        want[(0, 2, (), (lam(a),))] = GaussianRational(Fraction(1, 2))
    assert got.data == want


def test_parametrix_requires_enough_orders():
    rs = dtn_symbols(3, 1)
    with pytest.raises(MissingOrderError, match="r_-1"):
        parametrix_symbols(rs, 2)


def test_parametrix_rejects_resolvent_in_r():
    rs = dtn_symbols(3, 1)
    bad = [rs[0], rs[1] + SymbolSum.monomial(3, 1, l=1)]
    with pytest.raises(ValueError):
        parametrix_symbols(bad, 1)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_homogeneity(n):
    for j, r in zip((1, 0, -1), dtn_symbols(n, 2)):
        assert all(len(t.xi) + t.e == j and t.l == 0 for t in r.terms)
    for m, s in enumerate(parametrix_for_dimension(n, 2)):
        assert all(t.order == -1 - m for t in s.terms)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_r_weight_and_parity(n):
    # r_j has weight 1 - j
    for j, r in zip((1, 0, -1), dtn_symbols(n, 2)):
        report = structure_audit(r, j, "dtn")
        assert report.ok, report.violations[:3]
        assert all(t.weight == 1 - j for t in r.terms)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_s_weight_and_parity(n):
    for m, s in enumerate(parametrix_for_dimension(n, 2), start=1):
        report = structure_audit(s, -m, "parametrix")
        assert report.ok, report.violations[:3]
        assert all(t.weight == m - 1 for t in s.terms)


def test_r0_weight_one_n3():
    r0 = dtn_symbols(3, 1)[1]
    assert all(t.weight == 1 and (t.weight + t.normal_weight + len(t.xi)) % 2 == 0 for t in r0.terms)


def test_s_minus_three_weight_two_n4():
    s3 = parametrix_for_dimension(4, 2)[2]
    assert all(t.weight == 2 and t.order == -3 for t in s3.terms)
    assert not structure_audit(s3, -3)


def test_audit_detects_one_corrupted_term():
    s3 = parametrix_for_dimension(3, 2)[2]
    victim = s3.terms[0]
    bad = SymbolTerm(victim.coeff, victim.e, victim.l, victim.xi, tuple(sorted(victim.jets + (metric(1, 1, 0),))))
    corrupted = s3 - SymbolSum.from_terms(3, [victim]) + SymbolSum.from_terms(3, [bad])
    report = structure_audit(corrupted, -3)
    assert len(report) == 1
    assert report.violations[0].term.jets == bad.jets


def test_audit_rejects_unknown_family():
    with pytest.raises(ValueError):
        structure_audit(SymbolSum.monomial(3, 1, l=1), -1, "other")


def test_golden_dump_r0_n3():
    got = dtn_symbols(3, 1)[1].dump() + "\n"
    assert got == (GOLDEN / "r0_n3.txt").read_text()


def test_golden_dump_s2_n3():
    got = parametrix_for_dimension(3, 1)[1].dump() + "\n"
    assert got == (GOLDEN / "s2_n3.txt").read_text()


def test_dump_line_format():
    t = SymbolTerm(GaussianRational(0, Fraction(-1, 2)), -1, 2, (1, 2), (inv_metric(1, 2, 1),))
    assert t.dump_line() == "-1/2i\te=-1\tl=2\txi=[1,2]\tjets=[U^{12}_{1}]\tw=1\tnw=0"
