"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Schwarzian derivative, quasi-invariance densities and the inverse Schwarzian solver
"""
from .outer_map import SmoothOuterMap, schwarzian_of, fourth_order_derivative
from .density import radon_nikodym, log_radon_nikodym, p_mobius, log_p_mobius_endpoints
from .inverse import SchwarzianSolution, solve_schwarzian, schwarzian_inverse

__all__ = [
    'SmoothOuterMap',
    'schwarzian_of',
    'fourth_order_derivative',
    'radon_nikodym',
    'log_radon_nikodym',
    'p_mobius',
    'log_p_mobius_endpoints',
    'SchwarzianSolution',
    'solve_schwarzian',
    'schwarzian_inverse',
]
