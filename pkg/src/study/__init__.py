"""
Estudios de convergencia, ajuste de órdenes y comparación con datos publicados.
"""

from .fitting import FitResult, fit_order, relative_errors
from .reference_tables import (
    REFERENCE_TABLES,
    MissingReferenceError,
    ReferenceEntry,
    ReferenceTable,
)
from .convergence import (
    ConvergenceReport,
    LevelResult,
    StudyLevelError,
    recover_pressure,
    run_convergence_study,
    solve_level,
)
from .comparison import (
    CheckResult,
    ComparisonResult,
    SpuriousCheck,
    Verdict,
    check_spurious_free,
    compare_reference,
)
from .export import ReportFormat, export_report, remove_exports, summary_dict

__all__ = [
    "FitResult",
    "fit_order",
    "relative_errors",
    "REFERENCE_TABLES",
    "MissingReferenceError",
    "ReferenceEntry",
    "ReferenceTable",
    "ConvergenceReport",
    "LevelResult",
    "StudyLevelError",
    "recover_pressure",
    "run_convergence_study",
    "solve_level",
    "CheckResult",
    "ComparisonResult",
    "SpuriousCheck",
    "Verdict",
    "check_spurious_free",
    "compare_reference",
    "ReportFormat",
    "export_report",
    "remove_exports",
    "summary_dict",
]
