"""
Interfaz de línea de comandos.
"""

from .commands import cli, main, load_config, build_run_configs
from .presets import PRESETS, get_preset

__all__ = ["cli", "main", "load_config", "build_run_configs", "PRESETS", "get_preset"]
