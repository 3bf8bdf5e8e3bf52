"""Acceptance criteria 1-7; each test prints one PASS/FAIL line."""

import math
import time
from itertools import product

import numpy as np
import pytest

from moment_oracle import mc_moments
from quadrature_oracle import ellipsoid_rigidity_deficit
from steklov_heat.balls import fit_heat_invariants, heat_trace_closed_form, heat_trace_series, log_grid, weyl_table
from steklov_heat.engine import clear_caches, dtn_symbols, parametrix_for_dimension, structure_audit
from steklov_heat.geometry import ellipsoid, icosphere, integrate_invariants
from steklov_heat.invariants import canonicalize, derive_invariant, expected_invariant, xi_integral, xi_moment
from steklov_heat.invariants.curvature import MIXED, RIEM, poly_add, poly_canonical, riem


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok

    return emit


def test_criterion_1_identity_gate(report):
    clear_caches()
    cases = [(2, 0), (2, 1)] + [(n, k) for n in (3, 4, 5, 6) for k in (0, 1, 2)]
    t0 = time.perf_counter()
    failures = []
    a1_zero = None
    for n, k in cases:
        der = derive_invariant(n, k)
        if der.polynomial != expected_invariant(n, k):
            failures.append((n, k))
        if (n, k) == (2, 1):
            a1_zero = der.polynomial.is_zero()
    elapsed = time.perf_counter() - t0
    ok = not failures and a1_zero and elapsed < 300
    report(1, ok, f"{len(cases)} exact identities, mismatches={failures}, a1(n=2)==0: {a1_zero}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_structure(report):
    bad = []
    for n in (3, 4, 5, 6):
        for j, r in zip((1, 0, -1), dtn_symbols(n, 2)):
            if structure_audit(r, j, "dtn"):
                bad.append(("r", n, j))
        for m, s in enumerate(parametrix_for_dimension(n, 2), start=1):
            if structure_audit(s, -m, "parametrix"):
                bad.append(("s", n, -m))
    mixed = {}
    for n in (3, 4, 5, 6):
        der = derive_invariant(n, 2)
        survived = MIXED in der.polynomial.indeterminate_kinds() or der.mixed_jet_coefficients
        mixed[n] = (der.stage_counts["point_terms_with_mixed_jets"], bool(survived))
    ok = not bad and not any(s for _, s in mixed.values())
    report(2, ok, f"audit violations in {bad or 'none'}; mixed-jet point terms (count, survived) {mixed}")
    assert ok


def test_criterion_3_curvature_symmetry(report):
    zero_pattern = all(canonicalize([(RIEM, a, a, b, b)])[0] == 0 for a, b in product(range(1, 6), repeat=2))
    residues = {}
    for n in (3, 4, 5, 6):
        total = {}
        for a, b, g, e in product(range(1, n), repeat=4):
            w = xi_integral(n, -4, tuple(sorted((a, b, g, e))))
            if w:
                poly_add(total, riem(a, g, b, e), w)
                poly_add(total, riem(a, e, b, g), w)
        residues[n] = len(poly_canonical(total))
    ok = zero_pattern and not any(residues.values())
    report(3, ok, f"R_aabb -> 0: {zero_pattern}; quartic residue monomials {residues}")
    assert ok


def test_criterion_4_moments(report):
    exact_ok = True
    for n in range(3, 11):
        for k in (-1, 0, 1, 2):
            g = math.factorial(k + n - 2)
            exact_ok &= xi_moment(n, k) == g
            exact_ok &= xi_moment(n, k, (1,)) * (n - 1) == g
            exact_ok &= xi_moment(n, k, (2,)) * (n * n - 1) == 3 * g
            exact_ok &= xi_moment(n, k, (1, 1)) * (n * n - 1) == g
    worst = 0.0
    cases = [(K, m) for K in (0, 1, 2) for m in [(), (1,), (2,), (1, 1), (2, 1)]]
    for n in (3, 5):
        est = mc_moments(n, cases, samples=10**7, seed=2024 + n)
        for (K, m), (mean, err) in est.items():
            worst = max(worst, abs(mean - float(xi_moment(n, K, m))) / err)
    ok = exact_ok and worst <= 3
    report(4, ok, f"closed forms n=3..10, k=-1..2 exact: {exact_ok}; Monte-Carlo 1e7 worst deviation {worst:.2f} sigma")
    assert ok


def test_criterion_5_ball_fits(report):
    t0 = time.perf_counter()
    grid = log_grid(1e-3, 1e-1, 24)
    tol = (1e-6, 1e-4, 1e-3)
    errs = {}
    for n, want in ((3, (2, 1, 1 / 3)), (4, (2, 2, 1))):
        fit = fit_heat_invariants(n, grid)
        errs[n] = [abs(c - w) for c, w in zip(fit.coefficients, want)]
    closed = max(
        abs(heat_trace_series(n, t) / heat_trace_closed_form(n, t) - 1)
        for n in (3, 4)
        for t in np.geomspace(1e-3, 1, 200)
    )
    elapsed = time.perf_counter() - t0
    fits_ok = all(e <= t for n in errs for e, t in zip(errs[n], tol))
    ok = fits_ok and closed <= 1e-12 and elapsed < 10
    pretty = {n: [f"{e:.1e}" for e in v] for n, v in errs.items()}
    report(5, ok, f"fit errors {pretty}; series/closed max rel {closed:.1e}; {elapsed:.2f}s")
    assert ok


def test_criterion_6_meshes(report):
    r = integrate_invariants(icosphere(1.0, 5))
    checks = {
        "vol": abs(r.vol / (4 * math.pi) - 1) <= 1e-3,
        "int_H1": abs(r.int_H1 / (4 * math.pi) - 1) <= 5e-3,
        "a2": abs(r.a2 * 3 - 1) <= 1e-2,
        "euler": abs(r.euler_residual) <= 1e-2 * abs(r.a2),
        "sphere_deficit": r.scaled_rigidity_deficit() <= 1e-3,
    }
    e = integrate_invariants(ellipsoid(2, 1, 1, 5))
    ref = ellipsoid_rigidity_deficit(2, 1, 1)
    checks["ellipsoid_deficit"] = e.rigidity_deficit > 0 and abs(e.rigidity_deficit / ref - 1) <= 1e-2
    ok = all(checks.values())
    report(
        6,
        ok,
        f"{checks}; ellipsoid deficit {e.rigidity_deficit:.6f} vs quadrature {ref:.6f}",
    )
    assert ok


def test_criterion_7_weyl(report):
    t3 = weyl_table(3, 10_000)
    worst = max(abs(p.residual) for p in t3)
    t4 = weyl_table(4, 800)
    ratios = [t4[m].scaled_residual for m in (100, 200, 400, 800)]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    ok = worst <= 0.26 and decreasing
    report(7, ok, f"n=3 max |residual| {worst:.6f}; n=4 residual/sigma^2 {[round(x, 5) for x in ratios]}")
    assert ok
