"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
The measure mu_sigma: push-forward of W0_sigma under the chart inverse
"""
import logging
from typing import Optional

from src.diffeo.group import Diffeo, a_inv
from src.paths.grid import GridSpec, SigmaLike
from src.paths.sampling import RngLike, sample_bridge, sample_w0

logger = logging.getLogger(__name__)


def sample_mu(sigma: SigmaLike, grid: GridSpec, rng: RngLike, size: Optional[int] = None) -> Diffeo:
    """
    Sample from mu_sigma.

    Args:
        sigma: Dispersion of the chart Brownian motion
        grid: Sampling grid
        rng: Stream key or generator
        size: Batch size (None for a single diffeomorphism)

    Returns:
        a_inv(xi) with xi ~ W0_sigma
    """
    return a_inv(sample_w0(sigma, grid, rng, size))


def sample_mu_conditioned(
    sigma: SigmaLike,
    grid: GridSpec,
    xi_end,
    rng: RngLike,
    size: Optional[int] = None,
) -> Diffeo:
    """
    Sample mu_sigma conditioned on xi(1) = xi_end, i.e. on phi'(1)/phi'(0) = exp(xi_end).
    """
    return a_inv(sample_bridge(sigma, grid, 0.0, xi_end, rng, size))
