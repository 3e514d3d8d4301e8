"""
Autovalores Stokes Mixtos - Problema de autovalores de Stokes en formulación de
pseudoesfuerzo, velocidad y presión con elementos mixtos.

Este módulo proporciona funcionalidades para:
- Generación de mallas de los dominios cuadrado, L y disco
- Espacios RT_k / BDM_{k+1} para el pseudoesfuerzo y P_k discontinuos
- Ensamblaje de las formulaciones completa y reducida
- Solución de problemas de autovalores generalizados de punto silla
- Estudios de convergencia y comparación con resultados publicados
"""

__version__ = "1.0.0"
__author__ = "Autovalores Stokes Team"
