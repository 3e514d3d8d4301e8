"""
Interfaz de línea de comandos ``eig``.

Comandos:
- ``eig run``: ejecuta estudios de convergencia (preset, archivo JSON o flags),
  compara con los datos publicados y escribe CSV + JSON
- ``eig presets``: lista los presets disponibles

Códigos de salida: 0 si todo coincide, 2 si alguna comparación falla, 1 ante
cualquier error de configuración o ejecución (sin escribir archivos).
"""

import json
from pathlib import Path
from typing import List, Optional, Tuple

import click
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from ..config.run_config import RunConfig
from ..config.settings import get_settings
from ..study.comparison import ComparisonResult, compare_reference
from ..study.convergence import ConvergenceReport, run_convergence_study
from ..study.export import export_report, remove_exports
from ..study.reference_tables import REFERENCE_TABLES, MissingReferenceError
from ..utils.logger import setup_logger
from .presets import PRESET_DESCRIPTIONS, PRESETS, get_preset

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2


def load_config(path) -> RunConfig:
    """
    Lee una configuración desde un objeto JSON plano.

    Args:
        path: Ruta del archivo

    Returns:
        Configuración validada

    Raises:
        FileNotFoundError: Si el archivo no existe
        ValueError: JSON inválido o que no es un objeto
        ValidationError: Campos inválidos o desconocidos (diagnóstico agregado)
    """
    return RunConfig(**_read_config_dict(path))


def _read_config_dict(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Archivo de configuración no encontrado: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"JSON inválido en {path}: línea {exc.lineno}, columna {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path} debe contener un objeto JSON plano")
    return data


def _parse_levels(ctx, param, value) -> Optional[List[int]]:
    if value is None:
        return None
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter("use una lista separada por comas, p. ej. 10,20,30,40")


def _merge_overrides(base: List[dict], overrides: dict, source: str) -> List[dict]:
    """Aplica los flags explícitos sobre las corridas base, avisando si cambian un valor."""
    merged = []
    for run in base:
        run = dict(run)
        for key, value in overrides.items():
            if key in run and run[key] != value:
                logger.warning(f"⚠️ El flag --{key} reemplaza el valor de {source}: {run[key]} -> {value}")
            run[key] = value
        merged.append(run)
    return merged


def build_run_configs(
    preset: Optional[str], config_path: Optional[str], overrides: dict
) -> List[RunConfig]:
    """
    Resuelve la lista de corridas: preset o archivo como base, flags explícitos encima.

    Raises:
        ValueError: Combinación de fuentes inválida
        ValidationError: Campos inválidos
    """
    if preset and config_path:
        raise ValueError("Use --preset o --config, no ambos")
    if preset:
        base, source = get_preset(preset), f"preset {preset}"
    elif config_path:
        base, source = [_read_config_dict(config_path)], str(config_path)
    else:
        base, source = [{}], "flags"
    return _unique_runs([RunConfig(**run) for run in _merge_overrides(base, overrides, source)])


def _unique_runs(configs: List[RunConfig]) -> List[RunConfig]:
    """Descarta corridas repetidas (p. ej. un preset con --k fijo), conservando el orden."""
    seen = set()
    unique = []
    for config in configs:
        key = json.dumps(config.model_dump(mode="json"), sort_keys=True)
        if key in seen:
            logger.warning(f"⚠️ Corrida duplicada omitida: {config.descriptor}")
            continue
        seen.add(key)
        unique.append(config)
    return unique


def _fmt(value: Optional[float], digits: int = 5) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


def render_summary(
    console: Console, report: ConvergenceReport, comparison: Optional[ComparisonResult]
) -> None:
    """Tabla con λ por nivel, orden, λ_extr y veredicto (los órdenes son informativos)."""
    table = Table(title=report.config.descriptor)
    table.add_column("i", justify="right")
    for level in report.levels:
        table.add_column(f"N={level.N}", justify="right")
    table.add_column("Orden", justify="right")
    table.add_column("λ_extr", justify="right")
    table.add_column("Publicado", justify="right")
    table.add_column("Veredicto")

    published = {}
    verdicts = {}
    notes = {}
    if comparison is not None:
        for check in comparison.checks:
            if check.kind != "extrapolated":
                continue
            published[check.index] = check.reference
            verdicts[check.index] = check.verdict
            if check.note is not None:
                notes[check.index] = check.note

    values = report.eigenvalue_matrix()
    for i in range(report.n_eigenvalues):
        fit = report.fits[i] if i < len(report.fits) else None
        verdict = verdicts.get(i + 1)
        style = {"pass": "green", "fail": "red"}.get(verdict.value if verdict else "", "white")
        table.add_row(
            str(i + 1),
            *[_fmt(v) for v in values[i]],
            _fmt(fit.order if fit else None, 2),
            _fmt(fit.extrapolated if fit else None),
            _fmt(published.get(i + 1)),
            f"[{style}]{verdict.value if verdict else '-'}[/{style}]"
            + (f" [yellow](desvío conocido: {notes[i + 1]})[/yellow]" if i + 1 in notes else ""),
        )
    console.print(table)


@click.group()
@click.version_option(package_name="autovalores-stokes", message="%(prog)s %(version)s")
def cli():
    """Autovalores de Stokes con elementos mixtos RT_k / BDM_{k+1}."""


@cli.command("presets")
def presets_command():
    """Lista los presets de reproducción."""
    console = Console()
    table = Table(title="Presets")
    table.add_column("Nombre")
    table.add_column("Descripción")
    table.add_column("Corridas")
    for name in sorted(PRESETS):
        runs = ", ".join(f"{r['family']} k={r['k']}" for r in PRESETS[name])
        table.add_row(name, PRESET_DESCRIPTIONS[name], runs)
    console.print(table)


@cli.command("run")
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None, help="Preset de reproducción")
@click.option("--config", "config_path", type=str, default=None, help="Archivo JSON de configuración")
@click.option("--domain", type=str, default=None, help="square, lshape o disk")
@click.option("--family", type=str, default=None, help="rt o bdm")
@click.option("--k", type=int, default=None, help="Grado de velocidad y presión")
@click.option("--formulation", type=str, default=None, help="full o reduced")
@click.option("--levels", type=str, callback=_parse_levels, default=None, help="Lista de N, p. ej. 10,20,30")
@click.option("--nev", type=int, default=None, help="Número de autovalores")
@click.option("--mu", type=float, default=None, help="Viscosidad")
@click.option("--solver", type=str, default=None, help="auto, dense o shiftinvert")
@click.option("--output", "output_dir", type=str, default=None, help="Directorio de salida")
@click.pass_context
def run_command(ctx, preset, config_path, output_dir, **flags):
    """Ejecuta estudios de convergencia y compara con los datos publicados."""
    console = Console()
    overrides = {key: value for key, value in flags.items() if value is not None}
    if output_dir is not None:
        overrides["output_dir"] = output_dir

    try:
        configs = build_run_configs(preset, config_path, overrides)
    except ValidationError as exc:
        console.print(f"[red]Configuración inválida ({exc.error_count()} errores):[/red]\n{exc}")
        ctx.exit(EXIT_ERROR)
    except (ValueError, FileNotFoundError) as exc:
        console.print(f"[red]Error de configuración:[/red] {exc}")
        ctx.exit(EXIT_ERROR)

    settings = get_settings()
    results: List[Tuple[ConvergenceReport, Optional[ComparisonResult]]] = []
    written = []
    try:
        for config in configs:
            report = run_convergence_study(config, settings["solver"], settings["runtime"])
            try:
                comparison = compare_reference(report, REFERENCE_TABLES)
            except MissingReferenceError as exc:
                logger.warning(f"Sin comparación para {config.descriptor}: {exc}")
                comparison = None
            results.append((report, comparison))
        for report, comparison in results:
            written.extend(export_report(report, comparison).values())
    except Exception as exc:
        remove_exports(written)
        logger.error(f"❌ Error de ejecución: {exc}")
        console.print(f"[red]Error de ejecución:[/red] {exc}")
        ctx.exit(EXIT_ERROR)

    for report, comparison in results:
        render_summary(console, report, comparison)

    failed = [r.config.descriptor for r, c in results if c is not None and not c.passed]
    if failed:
        console.print(f"[red]Comparación fallida:[/red] {', '.join(failed)}")
        ctx.exit(EXIT_MISMATCH)
    console.print("[green]✅ Resultados consistentes con los datos publicados[/green]")
    ctx.exit(EXIT_OK)


def main() -> None:
    """Punto de entrada del ejecutable ``eig``."""
    cli(prog_name="eig")
