"""
Malla triangular con topología de aristas orientadas.

Este módulo define la estructura ``Mesh`` usada por todos los espacios de
elementos finitos y la construcción determinista de la topología de aristas:
- Numeración lexicográfica de aristas (vértice menor primero)
- Signo de orientación por celda (+1 si la celda recorre la arista en su
  sentido canónico)
- Detección de aristas de frontera y de mallas no conformes
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..utils.logger import setup_logger

logger = setup_logger(__name__)

# Arista local i opuesta al vértice i, recorrida en sentido antihorario
LOCAL_EDGES = ((1, 2), (2, 0), (0, 1))


class NonConformingMeshError(ValueError):
    """La malla comparte una arista entre más de dos celdas o no es consistente."""


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Triangulación conforme e inmutable de un dominio 2D.

    Attributes:
        vertices: Coordenadas (nv, 2)
        cells: Índices de vértices (nc, 3) en sentido antihorario
        edges: Pares de vértices (ne, 2) con el índice menor primero
        cell_edges: Índice global de la arista local i de cada celda (nc, 3)
        cell_edge_signs: Signo ±1 de orientación de cada arista local (nc, 3)
        boundary_edges: Índices ordenados de aristas de frontera
        domain_tag: Etiqueta del dominio (square, lshape, disk)
        resolution: Resolución N usada por el generador
    """

    vertices: np.ndarray
    cells: np.ndarray
    edges: np.ndarray
    cell_edges: np.ndarray
    cell_edge_signs: np.ndarray
    boundary_edges: np.ndarray
    domain_tag: str = "custom"
    resolution: int = 1

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_cells(self) -> int:
        return int(self.cells.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def h(self) -> float:
        """Parámetro de malla para los ajustes de convergencia (h = 1/N)."""
        return 1.0 / self.resolution

    @cached_property
    def geometry(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Origen, jacobiano y determinante de la transformación afín por celda."""
        p = self.vertices[self.cells]
        origin = p[:, 0, :]
        jac = np.stack([p[:, 1, :] - origin, p[:, 2, :] - origin], axis=2)
        det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
        return origin, jac, det

    def jacobians(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Transformaciones afines F_T(x̂) = v0 + J x̂ de todas las celdas.

        Returns:
            Tupla (v0 (nc, 2), J (nc, 2, 2), det J (nc,))
        """
        return self.geometry

    def areas(self) -> np.ndarray:
        """Áreas de las celdas."""
        return 0.5 * np.abs(self.geometry[2])

    def cell_diameters(self) -> np.ndarray:
        """Diámetro (arista más larga) de cada celda."""
        p = self.vertices[self.cells]
        lengths = np.stack(
            [np.linalg.norm(p[:, b] - p[:, a], axis=1) for a, b in LOCAL_EDGES],
            axis=1,
        )
        return lengths.max(axis=1)

    def boundary_vertices(self) -> np.ndarray:
        """Índices ordenados de los vértices sobre la frontera."""
        return np.unique(self.edges[self.boundary_edges].ravel())

    def map_to_physical(self, cells: np.ndarray, ref_points: np.ndarray) -> np.ndarray:
        """Imagen de puntos de referencia (np, 2) en las celdas dadas: (len(cells), np, 2)."""
        origin, jac, _ = self.geometry
        return origin[cells, None, :] + np.einsum("cij,pj->cpi", jac[cells], ref_points)

    def map_to_reference(self, cell: int, points: np.ndarray) -> np.ndarray:
        """Preimagen en la celda de referencia de puntos físicos (np, 2)."""
        origin, jac, _ = self.geometry
        return np.linalg.solve(jac[cell], (np.atleast_2d(points) - origin[cell]).T).T

    def export_ascii(self, path: Union[str, Path]) -> Path:
        """
        Exporta la malla en formato ASCII.

        Formato: cabecera ``nv nc ne``, luego líneas ``x y`` por vértice,
        ``v0 v1 v2`` por celda y ``v0 v1 b`` por arista (b=1 en la frontera).

        Args:
            path: Ruta del archivo de salida

        Returns:
            Ruta escrita
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        is_boundary = np.zeros(self.n_edges, dtype=int)
        is_boundary[self.boundary_edges] = 1

        lines = [f"{self.n_vertices} {self.n_cells} {self.n_edges}"]
        lines += [f"{x:.17g} {y:.17g}" for x, y in self.vertices]
        lines += [f"{a} {b} {c}" for a, b, c in self.cells]
        lines += [f"{a} {b} {flag}" for (a, b), flag in zip(self.edges, is_boundary)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

        logger.debug(f"Malla exportada a {path}")
        return path


def build_edge_topology(
    vertices: np.ndarray,
    cells: np.ndarray,
    domain_tag: str = "custom",
    resolution: int = 1,
) -> Mesh:
    """
    Construye la topología de aristas de una triangulación conforme.

    Args:
        vertices: Coordenadas de los vértices (nv, 2)
        cells: Triples de vértices por celda (nc, 3), antihorarios
        domain_tag: Etiqueta del dominio
        resolution: Resolución N del generador

    Returns:
        Malla con aristas, signos de orientación y aristas de frontera

    Raises:
        ValueError: Si hay índices fuera de rango o celdas con área no positiva
        NonConformingMeshError: Si una arista pertenece a más de dos celdas
    """
    vertices = np.ascontiguousarray(vertices, dtype=float)
    cells = np.ascontiguousarray(cells, dtype=np.int64).reshape(-1, 3)

    if cells.size and (cells.min() < 0 or cells.max() >= len(vertices)):
        raise ValueError("Las celdas referencian vértices inexistentes")

    p = vertices[cells]
    signed = (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) - (
        p[:, 1, 1] - p[:, 0, 1]
    ) * (p[:, 2, 0] - p[:, 0, 0])
    bad = np.flatnonzero(signed <= 0.0)
    if bad.size:
        raise ValueError(f"Celdas con área no positiva (orientación horaria o degeneradas): {bad[:10].tolist()}")

    local = np.stack([cells[:, list(pair)] for pair in LOCAL_EDGES], axis=1).reshape(-1, 2)
    canonical = np.sort(local, axis=1)
    edges, inverse, counts = np.unique(
        canonical, axis=0, return_inverse=True, return_counts=True
    )
    inverse = np.asarray(inverse).reshape(-1)

    crowded = np.flatnonzero(counts > 2)
    if crowded.size:
        offenders = [tuple(e) for e in edges[crowded[:5]].tolist()]
        raise NonConformingMeshError(
            f"Malla no conforme: {crowded.size} aristas compartidas por más de dos celdas, p.ej. {offenders}"
        )

    signs = np.where(local[:, 0] < local[:, 1], 1, -1).astype(np.int8)

    # En una arista interior las dos celdas deben recorrerla en sentidos opuestos
    sign_sum = np.bincount(inverse, weights=signs, minlength=len(edges))
    inconsistent = np.flatnonzero((counts == 2) & (sign_sum != 0))
    if inconsistent.size:
        raise NonConformingMeshError(
            f"Orientación inconsistente en {inconsistent.size} aristas interiores"
        )

    mesh = Mesh(
        vertices=vertices,
        cells=cells,
        edges=edges.astype(np.int64),
        cell_edges=inverse.reshape(-1, 3).astype(np.int64),
        cell_edge_signs=signs.reshape(-1, 3),
        boundary_edges=np.flatnonzero(counts == 1),
        domain_tag=domain_tag,
        resolution=int(resolution),
    )
    logger.debug(
        f"Topología construida: {mesh.n_vertices} vértices, {mesh.n_edges} aristas, {mesh.n_cells} celdas"
    )
    return mesh
