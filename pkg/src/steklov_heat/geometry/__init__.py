"""Heat-invariant densities on concrete geometries and closed triangle meshes."""

from .generators import ellipsoid, icosphere, torus
from .mesh import CurvatureField, MeshError, SurfaceMesh, SurfaceReport, integrate_invariants, mesh_curvatures
from .meshio import load_mesh, read_obj, read_off, write_obj, write_off
from .pointwise import CurvatureData, PointwiseInvariants, density_prefactor, pointwise_invariants, sphere_area

__all__ = [
    "CurvatureData",
    "CurvatureField",
    "MeshError",
    "PointwiseInvariants",
    "SurfaceMesh",
    "SurfaceReport",
    "density_prefactor",
    "ellipsoid",
    "icosphere",
    "integrate_invariants",
    "load_mesh",
    "mesh_curvatures",
    "pointwise_invariants",
    "read_obj",
    "read_off",
    "sphere_area",
    "torus",
    "write_obj",
    "write_off",
]
