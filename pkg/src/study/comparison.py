"""
Comparación de estudios contra los datos publicados y prueba de ausencia de
autovalores espurios.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..config.run_config import ToleranceConfig
from ..utils.logger import setup_logger
from .convergence import ConvergenceReport
from .reference_tables import REFERENCE_TABLES, ReferenceEntry, ReferenceTable

logger = setup_logger(__name__)


class Verdict(str, Enum):
    """Resultado de una verificación"""
    PASS = "pass"
    FAIL = "fail"
    ADVISORY = "advisory"


@dataclass
class CheckResult:
    """Verificación individual (λ_extr, orden, nivel o referencia externa)."""

    kind: str
    index: int
    computed: float
    reference: float
    deviation: float
    tolerance: float
    verdict: Verdict
    N: Optional[int] = None
    note: Optional[str] = None

    def to_dict(self) -> dict:
        data = {
            "kind": self.kind,
            "index": self.index,
            "computed": self.computed,
            "reference": self.reference,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
        }
        if self.N is not None:
            data["N"] = self.N
        if self.note is not None:
            data["note"] = self.note
        return data


@dataclass
class ComparisonResult:
    """Resultado agregado de ``compare_reference``."""

    table: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def offenders(self) -> List[CheckResult]:
        return [c for c in self.checks if c.verdict is Verdict.FAIL]

    @property
    def advisories(self) -> List[CheckResult]:
        return [c for c in self.checks if c.verdict is Verdict.ADVISORY]

    @property
    def known_deviations(self) -> List[CheckResult]:
        return [c for c in self.checks if c.note is not None]

    @property
    def passed(self) -> bool:
        return not self.offenders

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if self.passed else Verdict.FAIL

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "verdict": self.verdict.value,
            "offenders": [f"{c.kind}[{c.index}]" for c in self.offenders],
            "known_deviations": [f"{c.kind}[{c.index}] ({c.note})" for c in self.known_deviations],
            "checks": [c.to_dict() for c in self.checks],
        }


def _relative(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _extrapolated_check(index: int, computed: float, entry: ReferenceEntry, tol_extr: float) -> CheckResult:
    """λ_extr contra la tabla; si no coincide, contra la columna externa más cercana."""
    published = entry.extrapolated[index - 1]
    deviation = _relative(computed, published)
    check = CheckResult(
        kind="extrapolated",
        index=index,
        computed=computed,
        reference=published,
        deviation=deviation,
        tolerance=tol_extr,
        verdict=Verdict.PASS if deviation <= tol_extr else Verdict.FAIL,
    )
    if check.verdict is Verdict.PASS:
        return check
    candidates = sorted(
        (_relative(computed, column[index - 1]), name, column[index - 1])
        for name, column in entry.benchmarks.items()
    )
    if candidates and candidates[0][0] <= tol_extr:
        _, name, value = candidates[0]
        check.verdict = Verdict.PASS
        check.note = f"{name}={value}"
        logger.info(
            f"{entry.table} λ_extr[{index}]={computed:.5f} difiere de {published:.5f} "
            f"pero coincide con {name}={value}"
        )
    return check


def compare_reference(
    report: ConvergenceReport,
    table: ReferenceTable = REFERENCE_TABLES,
    tolerances: Optional[ToleranceConfig] = None,
) -> ComparisonResult:
    """
    Compara un reporte con la tabla publicada del mismo esquema.

    Solo λ_extr es vinculante: coincide con la tabla o, como desvío conocido,
    con alguna columna de referencia externa del mismo índice. Los órdenes
    ajustados dependen de la sucesión de mallas y son informativos, igual que
    los valores por nivel y las columnas externas.

    Args:
        report: Reporte del estudio
        table: Datos publicados
        tolerances: Tolerancias (por defecto las de la configuración del reporte)

    Returns:
        Resultado con una verificación por criterio

    Raises:
        MissingReferenceError: Si no hay datos para el esquema
    """
    cfg = report.config
    tolerances = tolerances or cfg.tolerances
    entry = table.get(cfg.domain, cfg.family, cfg.k, cfg.formulation)
    result = ComparisonResult(table=entry.table)
    tol_extr = tolerances.extr_for(cfg.domain)
    m = min(report.n_eigenvalues, entry.n_eigenvalues)

    for i, fit in enumerate(report.fits[:m]):
        result.checks.append(_extrapolated_check(i + 1, fit.extrapolated, entry, tol_extr))

        deviation = abs(fit.order - entry.orders[i])
        result.checks.append(CheckResult(
            kind="order",
            index=i + 1,
            computed=fit.order,
            reference=entry.orders[i],
            deviation=float(deviation),
            tolerance=tolerances.tol_order,
            verdict=Verdict.PASS if deviation <= tolerances.tol_order else Verdict.ADVISORY,
        ))

        for name, column in sorted(entry.benchmarks.items()):
            deviation = _relative(fit.extrapolated, column[i])
            result.checks.append(CheckResult(
                kind=name,
                index=i + 1,
                computed=fit.extrapolated,
                reference=column[i],
                deviation=deviation,
                tolerance=tol_extr,
                verdict=Verdict.PASS if deviation <= tol_extr else Verdict.ADVISORY,
            ))

    for level in report.levels:
        if level.N not in entry.levels:
            continue
        published = entry.values_at(level.N)
        for i, lam in enumerate(level.eigenvalues[:m]):
            deviation = _relative(lam, published[i])
            result.checks.append(CheckResult(
                kind="level",
                index=i + 1,
                computed=lam,
                reference=published[i],
                deviation=deviation,
                tolerance=tolerances.tol_level,
                verdict=Verdict.PASS if deviation <= tolerances.tol_level else Verdict.ADVISORY,
                N=level.N,
            ))

    if not report.fits:
        logger.warning("El reporte no tiene ajustes: solo se comparan valores por nivel")
    for check in result.offenders:
        logger.warning(
            f"{entry.table} {check.kind}[{check.index}]: {check.computed:.5f} vs "
            f"{check.reference:.5f} (desvío {check.deviation:.2e} > {check.tolerance:.2e})"
        )
    if result.advisories:
        logger.info(f"{len(result.advisories)} diferencias informativas respecto de {entry.table}")
    return result


@dataclass
class SpuriousCheck:
    """Diagnóstico de inclusión espectral bajo una cota Λ."""

    ok: bool
    matched: List[tuple] = field(default_factory=list)
    extra: List[float] = field(default_factory=list)
    missing: List[float] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def diagnostics(self) -> List[str]:
        messages = [f"autovalor extra {value:.5f} sin contraparte" for value in self.extra]
        messages += [f"referencia {value:.5f} sin autovalor calculado" for value in self.missing]
        return messages

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "matched": [list(pair) for pair in self.matched],
            "extra": list(self.extra),
            "missing": list(self.missing),
        }


def check_spurious_free(
    eigenvalues: Iterable[float],
    reference: Sequence[float],
    upper: float,
    tol: float = 0.05,
) -> SpuriousCheck:
    """
    Verifica que cada λ < Λ calculado corresponda a una entrada distinta de la
    referencia (error relativo <= tol) y que las multiplicidades coincidan.

    Args:
        eigenvalues: Autovalores calculados (o un ``Spectrum``)
        reference: Lista de referencia ordenada
        upper: Cota Λ, menor que el primer valor de referencia omitido
        tol: Tolerancia relativa

    Returns:
        Diagnóstico; es verdadero si no hay extras ni faltantes
    """
    values = getattr(eigenvalues, "eigenvalues", eigenvalues)
    computed = sorted(float(v) for v in values if v < upper)
    targets = [float(r) for r in sorted(reference) if r < upper]
    used = np.zeros(len(targets), dtype=bool)

    check = SpuriousCheck(ok=True)
    for value in computed:
        candidates = [
            (abs(value - ref) / abs(ref), j)
            for j, ref in enumerate(targets)
            if not used[j] and abs(value - ref) <= tol * abs(ref)
        ]
        if not candidates:
            check.extra.append(value)
            continue
        _, j = min(candidates)
        used[j] = True
        check.matched.append((value, targets[j]))
    check.missing = [ref for j, ref in enumerate(targets) if not used[j]]
    check.ok = not check.extra and not check.missing
    for message in check.diagnostics:
        logger.warning(message)
    return check
