"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Diffeomorphism group of [0, 1]: chart, group operations, Mobius maps, mu_sigma
"""
from .group import Diffeo, a_map, a_inv, compose, invert
from .mobius import MobiusDiffeo
from .measure import sample_mu, sample_mu_conditioned
from .csv_io import write_diffeo_csv, read_diffeo_csv

__all__ = [
    'Diffeo',
    'a_map',
    'a_inv',
    'compose',
    'invert',
    'MobiusDiffeo',
    'sample_mu',
    'sample_mu_conditioned',
    'write_diffeo_csv',
    'read_diffeo_csv',
]
