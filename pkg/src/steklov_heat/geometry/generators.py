"""Built-in closed meshes: icosphere, ellipsoid, torus."""

from __future__ import annotations

import math

import numpy as np

from .mesh import SurfaceMesh


def _icosahedron():
    t = (1 + math.sqrt(5)) / 2
    v = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    f = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    v = np.array(v, dtype=float)
    return v / np.linalg.norm(v, axis=1)[:, None], np.array(f)


def _subdivide(v: np.ndarray, f: np.ndarray):
    """Split each triangle in four, projecting new vertices to the unit sphere."""
    verts = list(map(tuple, v))
    cache = {}

    def midpoint(a, b):
        key = (a, b) if a < b else (b, a)
        idx = cache.get(key)
        if idx is None:
            m = (v[a] + v[b]) / 2
            verts.append(tuple(m / np.linalg.norm(m)))
            idx = cache[key] = len(verts) - 1
        return idx

    out = []
    for a, b, c in f.tolist():
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    return np.array(verts), np.array(out)


def unit_icosphere_arrays(subdivisions: int):
    if subdivisions < 0:
        raise ValueError("subdivisions must be >= 0")
    v, f = _icosahedron()
    for _ in range(subdivisions):
        v, f = _subdivide(v, f)
    return v, f


def icosphere(radius: float = 1.0, subdivisions: int = 3) -> SurfaceMesh:
    """Geodesic sphere; subdivision s has 10*4^s + 2 vertices."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    v, f = unit_icosphere_arrays(subdivisions)
    return SurfaceMesh(radius * v, f)


def ellipsoid(a: float, b: float, c: float, subdivisions: int = 3) -> SurfaceMesh:
    """Icosphere stretched along the coordinate axes by (a, b, c)."""
    if min(a, b, c) <= 0:
        raise ValueError("semi-axes must be positive")
    v, f = unit_icosphere_arrays(subdivisions)
    return SurfaceMesh(v * np.array([a, b, c]), f)


def torus(R: float, r: float, resolution: int = 64) -> SurfaceMesh:
    """Torus of revolution around the z-axis; ``resolution`` segments along the
    big circle and ``max(3, resolution // 2)`` around the tube."""
    if not 0 < r < R:
        raise ValueError("need 0 < r < R")
    nu, nv = int(resolution), max(3, int(resolution) // 2)
    if nu < 3:
        raise ValueError("resolution must be >= 3")
    u = 2 * math.pi * np.arange(nu) / nu
    w = 2 * math.pi * np.arange(nv) / nv
    U, W = np.meshgrid(u, w, indexing="ij")
    ring = R + r * np.cos(W)
    v = np.stack([ring * np.cos(U), ring * np.sin(U), r * np.sin(W)], axis=-1).reshape(-1, 3)

    def idx(i, j):
        return (i % nu) * nv + (j % nv)

    f = []
    for i in range(nu):
        for j in range(nv):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            f += [(a, b, c), (a, c, d)]
    return SurfaceMesh(v, np.array(f))
