"""
Configuraciones predefinidas que reproducen los experimentos 2D publicados.

Cada preset se expande en una o más corridas (una por grado k o familia). Los
experimentos 3D no tienen preset.
"""

from typing import Dict, List

SQUARE_LEVELS = [10, 20, 30, 40]
DISK_LEVELS = [20, 30, 40, 50]
LSHAPE_LEVELS = [9, 15, 20, 35]


def _runs(domain: str, families: List[str], ks: List[int], formulation: str, levels: List[int]) -> List[dict]:
    return [
        {"domain": domain, "family": family, "k": k, "formulation": formulation, "levels": list(levels)}
        for family in families
        for k in ks
    ]


PRESETS: Dict[str, List[dict]] = {
    "table1": _runs("square", ["rt"], [0, 1], "full", SQUARE_LEVELS),
    "table2": _runs("square", ["rt"], [0, 1], "reduced", SQUARE_LEVELS),
    "table3": _runs("square", ["bdm"], [0, 1], "full", SQUARE_LEVELS),
    "table4": _runs("square", ["bdm"], [0, 1], "reduced", SQUARE_LEVELS),
    "table5": _runs("disk", ["rt"], [0, 1], "full", DISK_LEVELS),
    "table6": _runs("disk", ["bdm"], [0, 1], "full", DISK_LEVELS),
    "table7": _runs("lshape", ["rt", "bdm"], [0], "full", LSHAPE_LEVELS),
}

PRESET_DESCRIPTIONS = {
    "table1": "Cuadrado, RT_k, formulación completa",
    "table2": "Cuadrado, RT_k, formulación reducida",
    "table3": "Cuadrado, BDM_{k+1}, formulación completa",
    "table4": "Cuadrado, BDM_{k+1}, formulación reducida",
    "table5": "Disco, RT_k, formulación completa",
    "table6": "Disco, BDM_{k+1}, formulación completa",
    "table7": "Dominio L, RT_0 y BDM_1, formulación completa",
}


def get_preset(name: str) -> List[dict]:
    """
    Devuelve copias de las corridas de un preset.

    Raises:
        ValueError: Si el preset no existe
    """
    try:
        return [dict(run, levels=list(run["levels"])) for run in PRESETS[name]]
    except KeyError:
        raise ValueError(f"Preset desconocido: {name}. Opciones: {', '.join(sorted(PRESETS))}")
