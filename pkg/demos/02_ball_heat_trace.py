"""
Heat traces of Euclidean balls
==============================

The Steklov spectrum of the unit n-ball is k = 0, 1, 2, ... with the
multiplicity of degree-k harmonic polynomials. Fitting t^{n-1} Tr exp(-tD)
near t = 0 recovers a_0, a_1, a_2.
"""

import numpy as np

from steklov_heat.balls import ball_invariants, fit_heat_invariants, heat_trace, steklov_multiplicity

for n in (3, 4, 5):
    print(f"n={n}: multiplicities", [steklov_multiplicity(n, k) for k in range(8)])

# the series against the n = 3 closed form (1 + e^-t)/(1 - e^-t)^2
for t in (1e-3, 1e-2, 0.1, 1.0):
    closed = (1 + np.exp(-t)) / (1 - np.exp(-t)) ** 2
    print(f"t={t:g}: series {heat_trace(3, t):.15g}  closed {closed:.15g}")

# fitted coefficients next to the integrated pointwise densities
for n in (3, 4, 5, 6):
    fit = fit_heat_invariants(n)
    inv = ball_invariants(n)
    print(f"n={n}: fitted", np.round(fit.coefficients, 6), " from densities", {k: round(v, 6) for k, v in inv.items()})
