"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Polar decomposition of the Wiener measure
Path samplers, diffeomorphism-group coordinates, quasi-invariance densities
and Monte Carlo verification of the decomposition identities
"""

__version__ = "0.2.0"
