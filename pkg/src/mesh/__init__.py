"""
Mallas triangulares de los dominios de prueba.
"""

from .mesh import Mesh, NonConformingMeshError, build_edge_topology, LOCAL_EDGES
from .generators import unit_square_mesh, lshape_mesh, disk_mesh, mesh_for

__all__ = [
    "Mesh",
    "NonConformingMeshError",
    "build_edge_topology",
    "LOCAL_EDGES",
    "unit_square_mesh",
    "lshape_mesh",
    "disk_mesh",
    "mesh_for",
]
