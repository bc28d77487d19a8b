"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Polar coordinates of positive paths
"""
from .decomposition import (
    PolarPair,
    rho_of,
    decompose,
    reconstruct,
    reconstruct_values,
)

__all__ = [
    'PolarPair',
    'rho_of',
    'decompose',
    'reconstruct',
    'reconstruct_values',
]
