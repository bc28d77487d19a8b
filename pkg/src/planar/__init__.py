"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Planar paths: polar tuples (r, phi, alpha, eta) and the two planar measures
"""
from .coordinates import (
    ComplexPath,
    PolarTuple2D,
    l_map,
    l_inv,
    unwrapped_phase,
    write_complex_csv,
    read_complex_csv,
)
from .measures import (
    WeightedComplexPaths,
    Theorem4Sweep,
    sample_wc,
    sample_varsigma,
    theorem4_lhs,
    theorem4_rhs,
    verify_theorem4,
    theorem4_sweep,
)

__all__ = [
    'ComplexPath',
    'PolarTuple2D',
    'l_map',
    'l_inv',
    'unwrapped_phase',
    'write_complex_csv',
    'read_complex_csv',
    'WeightedComplexPaths',
    'Theorem4Sweep',
    'sample_wc',
    'sample_varsigma',
    'theorem4_lhs',
    'theorem4_rhs',
    'verify_theorem4',
    'theorem4_sweep',
]
