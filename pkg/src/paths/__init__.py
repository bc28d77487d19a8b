"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Grid paths, Brownian samplers and quadrature

The group action `act` lives in src.paths.action, which depends on the
diffeo package.
"""
from .grid import (
    GridSpec,
    Path,
    Dispersion,
    as_sigma,
    integrate,
    cumulative_integral,
    check_same_grid,
)
from .sampling import (
    RngStream,
    as_generator,
    sample_w0,
    sample_brownian,
    sample_bridge,
    bridge_survival,
)
from .csv_io import write_path_csv, read_path_csv

__all__ = [
    'GridSpec',
    'Path',
    'Dispersion',
    'as_sigma',
    'integrate',
    'cumulative_integral',
    'check_same_grid',
    'RngStream',
    'as_generator',
    'sample_w0',
    'sample_brownian',
    'sample_bridge',
    'bridge_survival',
    'write_path_csv',
    'read_path_csv',
]
