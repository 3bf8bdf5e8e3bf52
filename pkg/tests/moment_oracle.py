"""Monte-Carlo estimates of e^{-|xi|}-weighted moments over R^{n-1}.

Samples come from a product of Laplace densities, so the estimate uses no
polar decomposition of the integrand.
"""

from __future__ import annotations

import math

import numpy as np


def sphere_volume_float(n: int) -> float:
    """Vol(S^{n-2})."""
    return 2 * math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2)


def mc_moments(n, cases, samples=10**7, seed=12345, chunk=10**6):
    """cases: list of (K, m) with m the half-exponents of directions 1, 2, ...

    Returns {case: (mean, stderr)} in units of Vol(S^{n-2}).
    """
    d = n - 1
    scale = 1.2 * math.sqrt(d)  # heavier tails than e^{-|xi|}
    rng = np.random.default_rng(seed)
    s1 = {c: 0.0 for c in cases}
    s2 = {c: 0.0 for c in cases}
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        x = rng.laplace(0.0, scale, size=(size, d))
        r = np.sqrt(np.sum(x * x, axis=1))
        log_q = -np.sum(np.abs(x), axis=1) / scale - d * math.log(2 * scale)
        base = np.exp(-r - log_q)
        for K, m in cases:
            f = base * r ** (K - 2 * sum(m))
            for a, p in enumerate(m):
                f = f * x[:, a] ** (2 * p)
            s1[(K, m)] += math.fsum(f)
            s2[(K, m)] += math.fsum(f * f)
        done += size
    vn = sphere_volume_float(n)
    out = {}
    for c in cases:
        mean = s1[c] / samples
        var = s2[c] / samples - mean * mean
        out[c] = (mean / vn, math.sqrt(var / samples) / vn)
    return out
