"""
Exportación de reportes de convergencia (CSV por nivel y resumen JSON).
"""

import json
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Optional, Union

from ..utils.logger import setup_logger
from .comparison import ComparisonResult
from .convergence import ConvergenceReport

logger = setup_logger(__name__)

CSV_FLOAT_FORMAT = "%.10g"


class ReportFormat(Enum):
    """Formatos de exportación"""
    CSV = "csv"
    JSON = "json"


def summary_dict(report: ConvergenceReport, comparison: Optional[ComparisonResult] = None) -> dict:
    """Resumen serializable: ajustes, e_λ, niveles y veredictos."""
    data = report.to_dict()
    data["comparison"] = comparison.to_dict() if comparison is not None else None
    return data


def export_report(
    report: ConvergenceReport,
    comparison: Optional[ComparisonResult] = None,
    output_dir: Union[str, Path, None] = None,
) -> Dict[ReportFormat, Path]:
    """
    Escribe ``<descriptor>.csv`` y ``<descriptor>.json``.

    Los dos archivos se escriben con nombres temporales y se renombran al final;
    ante un error no queda ningún archivo parcial.

    Args:
        report: Reporte del estudio
        comparison: Comparación con los datos publicados (opcional)
        output_dir: Directorio de salida (por defecto el de la configuración)

    Returns:
        Rutas escritas por formato
    """
    output_dir = Path(output_dir or report.config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    base = report.config.descriptor
    paths = {fmt: output_dir / f"{base}.{fmt.value}" for fmt in ReportFormat}
    staged = {fmt: path.with_name(f".{path.name}.tmp") for fmt, path in paths.items()}

    renamed = []
    try:
        report.to_frame().to_csv(
            staged[ReportFormat.CSV], index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
        )
        with open(staged[ReportFormat.JSON], "w", encoding="utf-8") as f:
            json.dump(summary_dict(report, comparison), f, indent=2, sort_keys=True, ensure_ascii=False)
        for fmt in ReportFormat:
            staged[fmt].replace(paths[fmt])
            renamed.append(paths[fmt])
    except Exception:
        remove_exports([*staged.values(), *renamed])
        raise

    logger.info(f"✅ Reporte exportado: {paths[ReportFormat.CSV]}, {paths[ReportFormat.JSON]}")
    return paths


def remove_exports(paths: Iterable[Path]) -> None:
    """Elimina archivos exportados (o temporales), ignorando los que no existen."""
    for path in paths:
        try:
            Path(path).unlink(missing_ok=True)
        except OSError as exc:
            logger.warning(f"No se pudo eliminar {path}: {exc}")
