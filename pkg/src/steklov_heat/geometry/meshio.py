"""Minimal OFF / OBJ readers and writers (triangles only)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .mesh import MeshError, SurfaceMesh


def _tokens(text: str):
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line.split()


def read_off(path) -> SurfaceMesh:
    toks = [t for row in _tokens(Path(path).read_text()) for t in row]
    if not toks or toks[0].upper() != "OFF":
        raise MeshError(f"{path}: missing OFF header")
    try:
        nv, nf = int(toks[1]), int(toks[2])
        pos = 4
        verts = np.array(toks[pos : pos + 3 * nv], dtype=float).reshape(nv, 3)
        pos += 3 * nv
        faces = []
        for _ in range(nf):
            k = int(toks[pos])
            if k != 3:
                raise MeshError(f"{path}: only triangles are supported, found a {k}-gon")
            faces.append([int(x) for x in toks[pos + 1 : pos + 4]])
            pos += 1 + k
    except (IndexError, ValueError) as exc:
        if isinstance(exc, MeshError):
            raise
        raise MeshError(f"{path}: malformed OFF file ({exc})") from exc
    return SurfaceMesh(verts, np.array(faces))


def read_obj(path) -> SurfaceMesh:
    verts, faces = [], []
    for row in _tokens(Path(path).read_text()):
        if row[0] == "v":
            verts.append([float(x) for x in row[1:4]])
        elif row[0] == "f":
            if len(row) != 4:
                raise MeshError(f"{path}: only triangles are supported")
            faces.append([int(x.split("/")[0]) - 1 for x in row[1:]])
    if not verts or not faces:
        raise MeshError(f"{path}: no geometry found")
    return SurfaceMesh(np.array(verts), np.array(faces))


def load_mesh(path) -> SurfaceMesh:
    suffix = Path(path).suffix.lower()
    if suffix == ".off":
        return read_off(path)
    if suffix == ".obj":
        return read_obj(path)
    raise MeshError(f"{path}: unknown mesh format {suffix!r} (expected .off or .obj)")


def write_off(m: SurfaceMesh, path) -> None:
    rows = ["OFF", f"{len(m.vertices)} {len(m.triangles)} 0"]
    rows += [" ".join(repr(float(x)) for x in p) for p in m.vertices]
    rows += ["3 " + " ".join(str(int(i)) for i in t) for t in m.triangles]
    Path(path).write_text("\n".join(rows) + "\n")


def write_obj(m: SurfaceMesh, path) -> None:
    rows = ["v " + " ".join(repr(float(x)) for x in p) for p in m.vertices]
    rows += ["f " + " ".join(str(int(i) + 1) for i in t) for t in m.triangles]
    Path(path).write_text("\n".join(rows) + "\n")
