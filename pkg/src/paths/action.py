"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Action of the diffeomorphism group on paths
"""
import numpy as np

from src.diffeo.group import Diffeo
from src.paths.grid import Path, check_same_grid
from src.paths.interpolation import pchip


def interpolate_path(x: Path, s) -> np.ndarray:
    """Evaluate a path off the grid with shape-preserving (PCHIP) interpolation."""
    return pchip(x.grid.nodes, x.values, s)


def act(phi: Diffeo, x: Path) -> Path:
    """
    Group action (phi x)(t) = x(phi^{-1}(t)) / sqrt((phi^{-1})'(t)).

    phi^{-1} comes from monotone Hermite interpolation and
    (phi^{-1})'(t) = 1/phi'(phi^{-1}(t)), so the result equals
    x(s) sqrt(phi'(s)) at s = phi^{-1}(t). Positive paths stay positive.

    Args:
        phi: Diffeomorphism (single or batched)
        x: Path (single or batched)

    Returns:
        Transformed path on the same grid
    """
    check_same_grid(phi.grid, x.grid)
    s = phi.inverse_at(x.grid.nodes)
    values = interpolate_path(x, s) * np.sqrt(phi.derivative_at(s))
    return Path(x.grid, values)
