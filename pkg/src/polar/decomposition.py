"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Polar coordinates of positive paths: x <-> (rho, phi)
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from src.diffeo.group import Diffeo, a_inv
from src.errors import NonPositivePath
from src.paths.action import interpolate_path
from src.paths.grid import Path, cumulative_integral
from src.paths.interpolation import monotone_hermite

logger = logging.getLogger(__name__)

NEAR_ZERO_RATIO = 1e-6


@dataclass(frozen=True, eq=False)
class PolarPair:
    """Polar coordinates (rho, phi) of a positive path."""
    rho: np.ndarray
    phi: Diffeo

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        if np.any(~np.isfinite(rho)) or np.any(rho <= 0):
            raise ValueError(f"rho must be positive, got {rho}")
        object.__setattr__(self, 'rho', rho)


def _require_positive(x: Path):
    if np.any(x.values <= 0):
        raise NonPositivePath(f"Path has non-positive values (min {float(x.values.min()):.3e})")


def rho_of(x: Path):
    """
    Radial coordinate rho = (int_0^1 x(t)^-2 dt)^(-1/2).

    Raises:
        NonPositivePath: If any grid value is <= 0
    """
    _require_positive(x)
    result = trapezoid(x.values ** -2, dx=x.grid.dt, axis=-1) ** -0.5
    return float(result) if np.ndim(result) == 0 else result


def decompose(x: Path) -> PolarPair:
    """
    Polar decomposition of a positive path.

    phi^{-1}(t) = rho^2 int_0^t x^-2 is inverted by monotone Hermite
    interpolation; the chart of phi follows from
    phi'(s) = x(phi(s))^2 / rho^2.

    Args:
        x: Positive path (single or batched)

    Returns:
        PolarPair with rho = rho_of(x)

    Raises:
        NonPositivePath: If any grid value is <= 0
    """
    _require_positive(x)
    values = x.values
    ratio = np.min(values, axis=-1) / np.max(values, axis=-1)
    if np.any(ratio < NEAR_ZERO_RATIO):
        logger.warning(f"Path nearly touches 0 (min/max = {float(np.min(ratio)):.2e}); quadrature of x^-2 is unreliable")

    inv_sq = values ** -2
    cumulative = cumulative_integral(inv_sq, x.grid.dt)
    rho_sq = 1.0 / cumulative[..., -1]
    phi_inverse = cumulative * rho_sq[..., None]
    phi_inverse[..., -1] = 1.0

    t = x.grid.nodes
    phi_values = monotone_hermite(phi_inverse, t, inv_sq * rho_sq[..., None], t)
    phi_values[..., 0] = 0.0
    phi_values[..., -1] = 1.0

    log_x = np.log(interpolate_path(x, phi_values))
    xi = 2.0 * (log_x - log_x[..., :1])
    phi = a_inv(Path(x.grid, xi))
    rho = np.sqrt(rho_sq)
    return PolarPair(float(rho) if np.ndim(rho) == 0 else rho, phi)


def reconstruct_values(rho, phi: Diffeo) -> np.ndarray:
    """
    Grid values of x(t) = rho sqrt(phi'(phi^{-1}(t))).

    Args:
        rho: Radial coordinate (scalar or per-path array)
        phi: Diffeomorphism (single or batched)

    Returns:
        Array of path values
    """
    s = phi.inverse_at(phi.grid.nodes)
    log_derivative = phi.chart_at(s) - phi.log_norm[..., None]
    return np.asarray(rho, dtype=float)[..., None] * np.exp(0.5 * log_derivative)


def reconstruct(p: PolarPair) -> Path:
    """
    Path with polar coordinates p.

    Endpoints equal rho sqrt(phi'(0)) and rho sqrt(phi'(1)) exactly.
    """
    return Path(p.phi.grid, reconstruct_values(p.rho, p.phi))
