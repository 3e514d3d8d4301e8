"""
Datos publicados de los experimentos 2D (cinco menores autovalores por esquema).

Cada entrada guarda los valores por nivel de malla, los órdenes ajustados, los
valores extrapolados y las columnas de referencia externas. Las entradas son de
solo lectura y el conjunto completo tiene una suma de verificación SHA-256.
"""

import hashlib
import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterator, Mapping, Optional, Tuple

from ..config.run_config import Domain, Family, Formulation

Key = Tuple[str, str, int, str]

SQUARE_LEVELS = (10, 20, 30, 40)
DISK_LEVELS = (20, 30, 40, 50)
LSHAPE_LEVELS = (9, 15, 20, 35)

SQUARE_BENCHMARK_1 = (13.0860, 23.0308, 23.0308, 32.0443, 38.5252)
SQUARE_BENCHMARK_2 = (13.086, 23.031, 23.031, 32.053, 38.532)
# La fila de k = 1 reducida publica 23.0310 para λ₂
SQUARE_BENCHMARK_1_REDUCED_K1 = (13.0860, 23.0310, 23.0308, 32.0443, 38.5252)
DISK_BENCHMARK = (14.68345, 26.37840, 26.37862, 40.71434, 40.71606)


class MissingReferenceError(KeyError):
    """No existe una tabla publicada para la combinación solicitada."""


@dataclass(frozen=True)
class ReferenceEntry:
    """
    Resultados publicados de un esquema.

    Attributes:
        table: Nombre de la tabla (table1..table7)
        domain: Dominio
        family: Familia H(div)
        k: Grado del esquema
        formulation: Formulación
        levels: Resoluciones N
        values: values[i][l] = λ_{i+1} en el nivel l
        orders: Orden ajustado por autovalor
        extrapolated: λ_extr por autovalor
        benchmarks: Columnas de referencia externas
    """

    table: str
    domain: str
    family: str
    k: int
    formulation: str
    levels: Tuple[int, ...]
    values: Tuple[Tuple[float, ...], ...]
    orders: Tuple[float, ...]
    extrapolated: Tuple[float, ...]
    benchmarks: Mapping[str, Tuple[float, ...]] = field(default_factory=dict)

    @property
    def key(self) -> Key:
        return (self.domain, self.family, self.k, self.formulation)

    @property
    def n_eigenvalues(self) -> int:
        return len(self.values)

    def values_at(self, N: int) -> Tuple[float, ...]:
        """λ_1..λ_m publicados para la resolución N."""
        try:
            level = self.levels.index(N)
        except ValueError:
            raise MissingReferenceError(f"La tabla {self.table} no tiene el nivel N={N}")
        return tuple(row[level] for row in self.values)

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "domain": self.domain,
            "family": self.family,
            "k": self.k,
            "formulation": self.formulation,
            "levels": list(self.levels),
            "values": [list(row) for row in self.values],
            "orders": list(self.orders),
            "extrapolated": list(self.extrapolated),
            "benchmarks": {name: list(v) for name, v in sorted(self.benchmarks.items())},
        }


def _entry(table, domain, family, k, formulation, levels, rows, benchmarks) -> ReferenceEntry:
    return ReferenceEntry(
        table=table,
        domain=domain.value,
        family=family.value,
        k=k,
        formulation=formulation.value,
        levels=levels,
        values=tuple(tuple(r[:-2]) for r in rows),
        orders=tuple(r[-2] for r in rows),
        extrapolated=tuple(r[-1] for r in rows),
        benchmarks=MappingProxyType(dict(benchmarks)),
    )


_SQUARE_BENCH = {"benchmark_1": SQUARE_BENCHMARK_1, "benchmark_2": SQUARE_BENCHMARK_2}
_SQUARE_BENCH_REDUCED_K1 = {"benchmark_1": SQUARE_BENCHMARK_1_REDUCED_K1, "benchmark_2": SQUARE_BENCHMARK_2}
_DISK_BENCH = {"benchmark_1": DISK_BENCHMARK}
_SQ, _DK, _LS = Domain.SQUARE, Domain.DISK, Domain.LSHAPE
_RT, _BDM = Family.RT, Family.BDM
_FULL, _RED = Formulation.FULL, Formulation.REDUCED

# Filas: (λ en cada nivel..., orden, λ_extr)
_SQUARE_K1_RT = (
    (13.08698, 13.08620, 13.08617, 13.08617, 4.56, 13.08617),
    (23.04310, 23.03182, 23.03123, 23.03114, 4.04, 23.03109),
    (23.04310, 23.03182, 23.03123, 23.03114, 4.04, 23.03109),
    (32.07944, 32.05400, 32.05270, 32.05249, 4.07, 32.05239),
    (38.60095, 38.53594, 38.53227, 38.53165, 3.92, 38.53134),
)

_ENTRIES = (
    # Cuadrado, RT, formulación completa
    _entry("table1", _SQ, _RT, 0, _FULL, SQUARE_LEVELS, (
        (12.61618, 12.96634, 13.03637, 13.05313, 2.00, 13.08484),
        (21.08840, 22.63791, 22.85202, 22.93446, 2.40, 22.99702),
        (21.33183, 22.69036, 22.88083, 22.93810, 2.46, 22.99245),
        (27.96811, 31.27226, 31.70100, 31.81983, 2.59, 31.93357),
        (33.42538, 37.66786, 38.18478, 38.32443, 2.69, 38.44565),
    ), _SQUARE_BENCH),
    _entry("table1", _SQ, _RT, 1, _FULL, SQUARE_LEVELS, _SQUARE_K1_RT, _SQUARE_BENCH),
    _entry("table1", _SQ, _RT, 2, _FULL, SQUARE_LEVELS, (
        (13.08528, 13.08616, 13.08617, 13.08617, 5.84, 13.08617),
        (23.03116, 23.03109, 23.03109, 23.03109, 6.00, 23.03109),
        (23.03116, 23.03109, 23.03109, 23.03109, 6.00, 23.03109),
        (32.05268, 32.05239, 32.05239, 32.05239, 6.00, 32.05239),
        (38.53256, 38.53138, 38.53136, 38.53136, 5.97, 38.53136),
    ), _SQUARE_BENCH),
    # Cuadrado, RT, formulación reducida
    _entry("table2", _SQ, _RT, 0, _RED, SQUARE_LEVELS, (
        (13.18205, 13.10744, 13.09534, 13.09127, 2.21, 13.08688),
        (22.59086, 22.92419, 22.98366, 23.00442, 2.06, 23.02944),
        (22.59086, 22.92419, 22.98366, 23.00442, 2.06, 23.02944),
        (31.52148, 31.92201, 31.99384, 32.01930, 2.04, 32.05042),
        (36.97903, 38.18216, 38.37946, 38.44657, 2.19, 38.51958),
    ), _SQUARE_BENCH),
    _entry("table2", _SQ, _RT, 1, _RED, SQUARE_LEVELS, (
        (13.08698, 13.08620, 13.08617, 13.08617, 4.56, 13.08617),
        (23.04310, 23.03182, 23.03123, 23.03114, 4.04, 23.03122),
        (23.04310, 23.03182, 23.03123, 23.03114, 4.04, 23.03109),
        (32.07944, 32.05400, 32.05270, 32.05249, 4.07, 32.05239),
        (38.60095, 38.53594, 38.53227, 38.53165, 3.92, 38.53134),
    ), _SQUARE_BENCH_REDUCED_K1),
    _entry("table2", _SQ, _RT, 2, _RED, SQUARE_LEVELS, (
        (13.08615, 13.08617, 13.08617, 13.08617, 4.75, 13.08617),
        (23.03116, 23.03109, 23.03109, 23.03109, 6.00, 23.03109),
        (23.03116, 23.03109, 23.03109, 23.03109, 6.00, 23.03110),
        (32.05268, 32.05239, 32.05239, 32.05239, 6.00, 32.05239),
        (38.53256, 38.53138, 38.53136, 38.53136, 5.92, 38.53136),
    ), _SQUARE_BENCH),
    # Cuadrado, BDM_{k+1}, formulación completa
    _entry("table3", _SQ, _BDM, 0, _FULL, SQUARE_LEVELS, (
        (13.39520, 13.16477, 13.12123, 13.10591, 1.97, 13.08574),
        (23.74378, 23.22000, 23.11593, 23.07899, 1.89, 23.02641),
        (24.19514, 23.32856, 23.16384, 23.10587, 1.96, 23.02865),
        (33.73344, 32.50272, 32.25523, 32.16703, 1.87, 32.03920),
        (41.15209, 39.23059, 38.84532, 38.70858, 1.88, 38.51262),
    ), _SQUARE_BENCH),
    _entry("table3", _SQ, _BDM, 1, _FULL, SQUARE_LEVELS, (
        (13.08919, 13.08636, 13.08621, 13.08618, 3.99, 13.08617),
        (23.04441, 23.03195, 23.03126, 23.03115, 3.96, 23.03109),
        (23.05331, 23.03253, 23.03138, 23.03118, 3.95, 23.03109),
        (32.10055, 32.05550, 32.05302, 32.05259, 3.92, 32.05238),
        (38.61259, 38.53671, 38.53243, 38.53170, 3.92, 38.53134),
    ), _SQUARE_BENCH),
    _entry("table3", _SQ, _BDM, 2, _FULL, SQUARE_LEVELS, (
        (13.08618, 13.08617, 13.08617, 13.08617, 6.16, 13.08617),
        (23.03117, 23.03109, 23.03109, 23.03109, 6.04, 23.03109),
        (23.03128, 23.03110, 23.03109, 23.03109, 6.01, 23.03109),
        (32.05303, 32.05240, 32.05239, 32.05239, 6.02, 32.05239),
        (38.53239, 38.53138, 38.53136, 38.53136, 5.92, 38.53136),
    ), _SQUARE_BENCH),
    # Cuadrado, BDM_{k+1}, formulación reducida
    _entry("table4", _SQ, _BDM, 0, _RED, SQUARE_LEVELS, (
        (13.46029, 13.18088, 13.12837, 13.10993, 1.98, 13.08589),
        (24.18596, 23.32433, 23.16178, 23.10467, 1.97, 23.02910),
        (24.18596, 23.32433, 23.16178, 23.10467, 1.97, 23.02910),
        (34.23489, 32.61702, 32.30485, 32.19470, 1.94, 32.04581),
        (41.75299, 39.35261, 38.89728, 38.73736, 1.96, 38.52295),
    ), _SQUARE_BENCH),
    _entry("table4", _SQ, _BDM, 1, _RED, SQUARE_LEVELS, (
        (13.08997, 13.08642, 13.08622, 13.08618, 3.93, 13.08617),
        (23.05092, 23.03240, 23.03135, 23.03118, 3.92, 23.03109),
        (23.05092, 23.03240, 23.03135, 23.03118, 3.92, 23.03109),
        (32.10848, 32.05619, 32.05315, 32.05263, 3.88, 32.05237),
        (38.61788, 38.53707, 38.53250, 38.53172, 3.92, 38.53134),
    ), _SQUARE_BENCH),
    _entry("table4", _SQ, _BDM, 2, _RED, SQUARE_LEVELS, (
        (13.08619, 13.08617, 13.08617, 13.08617, 6.09, 13.08617),
        (23.03128, 23.03110, 23.03109, 23.03109, 5.97, 23.03109),
        (23.03128, 23.03110, 23.03109, 23.03109, 5.97, 23.03109),
        (32.05323, 32.05240, 32.05239, 32.05239, 5.91, 32.05239),
        (38.53245, 38.53138, 38.53136, 38.53136, 5.92, 38.53136),
    ), _SQUARE_BENCH),
    # Disco, RT, formulación completa
    _entry("table5", _DK, _RT, 0, _FULL, DISK_LEVELS, (
        (14.94827, 14.79867, 14.74712, 14.72354, 2.04, 14.68251),
        (26.81747, 26.56803, 26.48211, 26.44329, 2.05, 26.37559),
        (26.81821, 26.56845, 26.48262, 26.44365, 2.06, 26.37683),
        (41.32838, 40.98177, 40.85915, 40.80453, 2.01, 40.70533),
        (41.34096, 40.98359, 40.86093, 40.80487, 2.05, 40.70809),
    ), _DISK_BENCH),
    _entry("table5", _DK, _RT, 1, _FULL, DISK_LEVELS, (
        (14.94196, 14.79448, 14.74448, 14.72169, 2.08, 14.68323),
        (26.84091, 26.57657, 26.48686, 26.44594, 2.08, 26.37704),
        (26.84099, 26.57662, 26.48687, 26.44595, 2.08, 26.37703),
        (41.42501, 41.01797, 40.87964, 40.81652, 2.08, 40.71046),
        (41.42543, 41.01805, 40.87966, 40.81654, 2.08, 40.71037),
    ), _DISK_BENCH),
    _entry("table5", _DK, _RT, 2, _FULL, DISK_LEVELS, (
        (14.94315, 14.79487, 14.74464, 14.72177, 2.09, 14.68361),
        (26.84301, 26.57727, 26.48715, 26.44610, 2.08, 26.37680),
        (26.84303, 26.57728, 26.48716, 26.44610, 2.08, 26.37680),
        (41.42807, 41.01900, 40.88008, 40.81675, 2.08, 40.71012),
        (41.42814, 41.01902, 40.88008, 40.81676, 2.08, 40.71010),
    ), _DISK_BENCH),
    # Disco, BDM_{k+1}, formulación completa
    _entry("table6", _DK, _BDM, 0, _FULL, DISK_LEVELS, (
        (14.82469, 14.71768, 14.69784, 14.69090, 2.00, 14.68199),
        (26.77392, 26.47427, 26.41889, 26.39951, 2.00, 26.37450),
        (26.77392, 26.47427, 26.41889, 26.39951, 2.00, 26.37450),
        (41.56881, 40.92423, 40.80343, 40.76105, 1.98, 40.70545),
        (41.56881, 40.92423, 40.80343, 40.76105, 1.98, 40.70545),
    ), _DISK_BENCH),
    _entry("table6", _DK, _BDM, 1, _FULL, DISK_LEVELS, (
        (14.70933, 14.68872, 14.68496, 14.68365, 2.02, 14.68199),
        (26.42481, 26.38682, 26.38000, 26.37764, 2.05, 26.37473),
        (26.42481, 26.38682, 26.38000, 26.37764, 2.05, 26.37703),
        (40.78741, 40.72552, 40.71483, 40.71115, 2.11, 40.70686),
        (40.78741, 40.72552, 40.71483, 40.71115, 2.11, 40.70686),
    ), _DISK_BENCH),
    _entry("table6", _DK, _BDM, 2, _FULL, DISK_LEVELS, (
        (14.70930, 14.68873, 14.68496, 14.68365, 2.02, 14.68200),
        (26.42370, 26.38677, 26.38000, 26.37764, 2.02, 26.37467),
        (26.42370, 26.38677, 26.38000, 26.37764, 2.02, 26.37467),
        (40.78222, 40.72523, 40.71478, 40.71113, 2.02, 40.70655),
        (40.78222, 40.72523, 40.71478, 40.71113, 2.02, 40.70655),
    ), _DISK_BENCH),
    # Dominio L, k = 0, formulación completa
    _entry("table7", _LS, _RT, 0, _FULL, LSHAPE_LEVELS, (
        (29.43565, 30.83700, 31.16193, 31.62598, 1.59, 31.89457),
        (34.98077, 36.28132, 36.50660, 36.83669, 2.03, 36.94231),
        (40.70064, 41.43833, 41.62290, 41.83014, 1.73, 41.94524),
        (46.83830, 48.22776, 48.47328, 48.80875, 2.07, 48.91635),
        (52.08483, 53.96541, 54.48404, 55.02474, 1.65, 55.37238),
    ), {}),
    _entry("table7", _LS, _BDM, 0, _FULL, LSHAPE_LEVELS, (
        (32.59542, 32.24970, 32.14635, 32.06144, 1.75, 32.00483),
        (38.76953, 37.57884, 37.32081, 37.11240, 2.26, 37.03276),
        (44.76985, 42.88018, 42.46067, 42.10765, 2.19, 41.96744),
        (52.09587, 50.19205, 49.67367, 49.20827, 1.81, 48.93475),
        (58.84979, 56.72442, 56.20364, 55.63553, 1.79, 55.33628),
    ), {}),
)


def _normalize_key(domain, family, k, formulation) -> Key:
    return (
        getattr(domain, "value", domain),
        getattr(family, "value", family),
        int(k),
        getattr(formulation, "value", formulation),
    )


class ReferenceTable:
    """Colección inmutable de entradas indexada por (dominio, familia, k, formulación)."""

    def __init__(self, entries=_ENTRIES):
        self._entries: Mapping[Key, ReferenceEntry] = MappingProxyType(
            {entry.key: entry for entry in entries}
        )
        self._checksum: Optional[str] = None

    def __iter__(self) -> Iterator[ReferenceEntry]:
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key) -> bool:
        return _normalize_key(*key) in self._entries

    def keys(self):
        return self._entries.keys()

    def get(self, domain, family, k, formulation) -> ReferenceEntry:
        """
        Busca la entrada publicada.

        Raises:
            MissingReferenceError: Si la combinación no fue publicada
        """
        key = _normalize_key(domain, family, k, formulation)
        try:
            return self._entries[key]
        except KeyError:
            raise MissingReferenceError(f"Sin datos de referencia para {key}") from None

    def by_table(self, name: str) -> Dict[Key, ReferenceEntry]:
        """Entradas de una tabla publicada (table1..table7)."""
        return {key: entry for key, entry in self._entries.items() if entry.table == name}

    def checksum(self) -> str:
        """SHA-256 de la serialización canónica de todas las entradas."""
        if self._checksum is None:
            payload = json.dumps(
                [self._entries[key].to_dict() for key in sorted(self._entries)],
                sort_keys=True,
                separators=(",", ":"),
            )
            self._checksum = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        return self._checksum


REFERENCE_TABLES = ReferenceTable()
