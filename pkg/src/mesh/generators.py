"""
Generadores deterministas de las mallas de los experimentos.

- ``unit_square_mesh``: cuadrado (-1, 1)^2, N x N cuadrados con diagonal
  inferior-izquierda a superior-derecha (2N^2 celdas)
- ``lshape_mesh``: dominio L (-1,1)^2 \\ [-1,0]^2, tres cuadrados unitarios
  de N x N (6N^2 celdas), esquina reentrante en el origen
- ``disk_mesh``: anillos concéntricos del círculo unitario (6N^2 celdas)
"""

import numpy as np

from .mesh import Mesh, build_edge_topology


def _check_resolution(N: int) -> int:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValueError(f"La resolución N debe ser un entero >= 1 (recibido: {N})")
    return int(N)


def _structured_grid(M: int, keep) -> tuple:
    """
    Rejilla de (M+1)^2 puntos sobre [-1, 1]^2 con M x M cuadrados partidos por
    la diagonal principal; ``keep(i, j)`` decide qué cuadrados se conservan.

    Las coordenadas se calculan como (2i - M)/M para que los puntos de
    la rejilla que caen sobre 0 y ±1 sean exactos.
    """
    ii, jj = np.meshgrid(np.arange(M + 1), np.arange(M + 1))
    coords = np.column_stack([(2 * ii.ravel() - M) / M, (2 * jj.ravel() - M) / M])

    si, sj = np.meshgrid(np.arange(M), np.arange(M))
    si, sj = si.ravel(), sj.ravel()
    mask = keep(si, sj)
    si, sj = si[mask], sj[mask]

    v00 = sj * (M + 1) + si
    v10 = v00 + 1
    v01 = v00 + M + 1
    v11 = v01 + 1
    lower = np.column_stack([v00, v10, v11])
    upper = np.column_stack([v00, v11, v01])
    cells = np.stack([lower, upper], axis=1).reshape(-1, 3)

    # Compactar vértices usados conservando el orden fila por fila
    used = np.unique(cells)
    renumber = np.full(coords.shape[0], -1, dtype=np.int64)
    renumber[used] = np.arange(used.size)
    return coords[used], renumber[cells]


def unit_square_mesh(N: int) -> Mesh:
    """
    Malla estructurada del cuadrado (-1, 1)^2.

    Args:
        N: Número de subdivisiones por lado

    Returns:
        Malla con 2N^2 celdas y (N+1)^2 vértices
    """
    N = _check_resolution(N)
    vertices, cells = _structured_grid(N, lambda i, j: np.ones_like(i, dtype=bool))
    return build_edge_topology(vertices, cells, domain_tag="square", resolution=N)


def lshape_mesh(N: int) -> Mesh:
    """
    Malla estructurada del dominio en L, (-1,1)^2 menos [-1,0]^2.

    Args:
        N: Subdivisiones por lado de cada uno de los tres cuadrados unitarios

    Returns:
        Malla con 6N^2 celdas
    """
    N = _check_resolution(N)
    vertices, cells = _structured_grid(2 * N, lambda i, j: (i >= N) | (j >= N))
    return build_edge_topology(vertices, cells, domain_tag="lshape", resolution=N)


def disk_mesh(N: int) -> Mesh:
    """
    Triangulación por anillos concéntricos del polígono inscrito en el círculo unitario.

    El anillo i (radio i/N) tiene 6i vértices equiespaciados en ángulo y aporta
    6(2i - 1) triángulos; los vértices del anillo exterior están sobre el
    círculo unitario.

    Args:
        N: Número de anillos

    Returns:
        Malla con 6N^2 celdas y 1 + 3N(N+1) vértices
    """
    N = _check_resolution(N)

    coords = [np.zeros((1, 2))]
    offsets = [0]
    count = 1
    for i in range(1, N + 1):
        n = 6 * i
        theta = 2.0 * np.pi * np.arange(n) / n
        r = 1.0 if i == N else i / N
        coords.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
        offsets.append(count)
        count += n
    vertices = np.vstack(coords)

    cells = []
    for i in range(1, N + 1):
        def inner(s, m, i=i):
            if i == 1:
                return 0
            return offsets[i - 1] + (s * (i - 1) + m) % (6 * (i - 1))

        def outer(s, m, i=i):
            return offsets[i] + (s * i + m) % (6 * i)

        for s in range(6):
            for m in range(i):
                cells.append((inner(s, m), outer(s, m), outer(s, m + 1)))
            for m in range(i - 1):
                cells.append((inner(s, m), outer(s, m + 1), inner(s, m + 1)))

    return build_edge_topology(
        vertices, np.array(cells, dtype=np.int64), domain_tag="disk", resolution=N
    )


GENERATORS = {
    "square": unit_square_mesh,
    "lshape": lshape_mesh,
    "disk": disk_mesh,
}


def mesh_for(domain: str, N: int) -> Mesh:
    """
    Genera la malla del dominio indicado.

    Args:
        domain: Nombre del dominio (square, lshape, disk) o enumerado ``Domain``
        N: Resolución

    Returns:
        Malla generada
    """
    name = getattr(domain, "value", domain)
    try:
        generator = GENERATORS[name]
    except KeyError:
        raise ValueError(f"Dominio no soportado: {domain}. Opciones: {sorted(GENERATORS)}")
    return generator(N)
