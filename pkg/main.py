#!/usr/bin/env python3
"""
Punto de entrada principal: ejecuta la interfaz de línea de comandos ``eig``.
"""

import sys
from pathlib import Path

# Agregar directorio actual al path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
