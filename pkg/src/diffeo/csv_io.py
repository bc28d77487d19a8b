"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Diffeomorphism CSV format: header `t,phi,xi`
"""
import logging
from pathlib import Path as FilePath
from typing import Union

from src.diffeo.group import CHART_TOLERANCE, Diffeo, a_inv
from src.errors import GridError, InvalidDiffeo
from src.paths.csv_io import read_columns, write_columns
from src.paths.grid import Path

logger = logging.getLogger(__name__)


def write_diffeo_csv(filepath: Union[str, FilePath], phi: Diffeo):
    """Write a single diffeomorphism as `t,phi,xi`."""
    if phi.is_batch:
        raise GridError("write_diffeo_csv expects a single diffeomorphism")
    write_columns(filepath, phi.grid, {'phi': phi.phi_values, 'xi': phi.xi.values})


def read_diffeo_csv(filepath: Union[str, FilePath], tol: float = CHART_TOLERANCE) -> Diffeo:
    """
    Read a `t,phi,xi` CSV and revalidate it.

    phi is rebuilt from xi and must match the stored column within tol.

    Raises:
        GridError: Malformed file or non-uniform grid
        InvalidDiffeo: Stored phi inconsistent with xi or not a diffeomorphism
    """
    grid, columns = read_columns(filepath, ['phi', 'xi'])
    phi = a_inv(Path(grid, columns['xi']))
    try:
        phi.validate()
    except InvalidDiffeo as e:
        raise InvalidDiffeo(f"{filepath}: {e}")
    deviation = float(abs(phi.phi_values - columns['phi']).max())
    if deviation > tol:
        raise InvalidDiffeo(f"{filepath}: phi column deviates from the xi chart by {deviation:.3e}")
    logger.debug(f"Loaded diffeomorphism from {filepath} ({grid.n_points} nodes)")
    return phi
