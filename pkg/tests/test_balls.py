import math

import numpy as np
import pytest

from steklov_heat.balls import (
    BallSpectrum,
    IllConditionedGridError,
    ball_invariants,
    counting_function,
    fit_heat_invariants,
    heat_trace,
    heat_trace_closed_form,
    heat_trace_series,
    log_grid,
    steklov_multiplicity,
    weyl_residual,
    weyl_table,
)
from steklov_heat.geometry import CurvatureData, pointwise_invariants, sphere_area


def test_multiplicity_examples():
    assert steklov_multiplicity(3, 5) == 11
    assert steklov_multiplicity(4, 2) == 9
    for n in range(2, 9):
        assert steklov_multiplicity(n, 0) == 1


@pytest.mark.parametrize("n", range(2, 8))
def test_multiplicity_counts_harmonic_polynomials(n):
    # dim of degree-k harmonics = C(k+n-1, n-1) - C(k+n-3, n-1)
    for k in range(0, 12):
        want = math.comb(k + n - 1, n - 1) - (math.comb(k + n - 3, n - 1) if k >= 2 else 0)
        assert steklov_multiplicity(n, k) == want


def test_spectrum_scaling():
    sp = BallSpectrum(3, 4, radius=2.0)
    assert sp.multiplicities == [1, 3, 5, 7, 9]
    assert sp.eigenvalue(3) == 1.5


@pytest.mark.parametrize("n", [3, 4])
def test_series_matches_closed_form(n):
    for t in np.geomspace(1e-3, 1, 60):
        ht = heat_trace_series(n, t)
        assert abs(ht - heat_trace_closed_form(n, t)) <= 1e-12 * ht


def test_two_dimensional_trace():
    for t in (0.01, 0.3, 2.0):
        assert heat_trace(2, t) == pytest.approx(1 / math.tanh(t / 2), rel=1e-13)


def test_large_t_dominated_by_constant():
    assert heat_trace(3, 10) == pytest.approx(1 + 3 * math.exp(-10), rel=1e-6)


def test_heat_trace_rejects_nonpositive_t():
    with pytest.raises(ValueError):
        heat_trace(3, 0.0)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_heat_trace_decreasing(n):
    ts = np.geomspace(1e-3, 5, 80)
    vals = [heat_trace(n, t) for t in ts]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_radius_scaling():
    assert heat_trace(3, 0.2, radius=2.0) == pytest.approx(heat_trace(3, 0.1), rel=1e-14)


@pytest.mark.parametrize("n, expected", [(3, (2, 1, 1 / 3)), (4, (2, 2, 1))])
def test_fit(n, expected):
    fit = fit_heat_invariants(n, log_grid(1e-3, 1e-1, 24))
    tol = (1e-6, 1e-4, 1e-3)
    for c, e, t in zip(fit.coefficients, expected, tol):
        assert abs(c - e) <= t
    assert fit.residual_norm < 1e-6


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_fit_matches_geometry(n):
    fit = fit_heat_invariants(n)
    inv = ball_invariants(n)
    assert abs(fit.coefficients[0] - inv["a0"]) <= 1e-6 * max(1, inv["a0"])
    assert abs(fit.coefficients[1] - inv["a1"]) <= 1e-3
    assert abs(fit.coefficients[2] - inv["a2"]) <= 2e-2


@pytest.mark.parametrize("n", [3, 4])
def test_fit_stable_under_halving_span(n):
    a = fit_heat_invariants(n, log_grid(1e-3, 1e-1, 24)).coefficients
    b = fit_heat_invariants(n, log_grid(1e-3, 5e-2, 24)).coefficients
    for x, y, t in zip(a, b, (1e-6, 1e-4, 1e-3)):
        assert abs(x - y) < t


def test_fit_input_validation():
    with pytest.raises(ValueError):
        fit_heat_invariants(3, log_grid(1e-3, 1e-1, 5))
    with pytest.raises(ValueError):
        fit_heat_invariants(3, log_grid(1e-3, 0.5, 10))
    with pytest.raises(IllConditionedGridError, match="wider grid"):
        fit_heat_invariants(3, log_grid(0.1, 0.1001, 10))


def test_ball_invariants_from_pointwise():
    inv = ball_invariants(3)
    assert inv == pytest.approx({"a0": 2, "a1": 1, "a2": 1 / 3})
    d = pointwise_invariants(CurvatureData.sphere(4))
    assert d.a2x * sphere_area(4) == pytest.approx(1)


def test_weyl_examples():
    p = weyl_residual(3, 10.5)
    assert (p.count, p.prediction, p.residual) == (121, pytest.approx(120.75), pytest.approx(0.25))
    p = weyl_residual(3, 0.5)
    assert (p.count, p.prediction, p.residual) == (1, pytest.approx(0.75), pytest.approx(0.25))
    p = weyl_residual(4, 10.5)
    assert p.count == 506
    assert p.prediction == pytest.approx(496.125)
    assert p.residual == pytest.approx(9.875)
    assert p.scaled_residual == pytest.approx(0.0896, abs=1e-4)


def test_weyl_requires_half_integer():
    with pytest.raises(ValueError):
        weyl_residual(3, 10.0)
    with pytest.raises(ValueError):
        weyl_residual(3, 10.25)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_counting_closed_forms(n):
    for m in (0, 1, 7, 30):
        assert counting_function(n, m) == math.comb(m + n - 1, n - 1) + math.comb(m + n - 2, n - 1)


def test_weyl_table_matches_pointwise():
    table = weyl_table(4, 50)
    for m in (0, 13, 50):
        ref = weyl_residual(4, m + 0.5)
        assert table[m].count == ref.count
        assert table[m].residual == pytest.approx(ref.residual, rel=1e-12, abs=1e-9)
