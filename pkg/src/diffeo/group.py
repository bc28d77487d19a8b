"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Orientation-preserving diffeomorphisms of [0, 1] in log-derivative coordinates

A diffeomorphism phi is stored through its chart xi(t) = ln phi'(t) - ln phi'(0).
Grid values of phi and the normalizer N = int_0^1 exp(xi) are derived from xi
by trapezoid quadrature, so phi'(t_i) = exp(xi(t_i)) / N exactly and the
endpoint derivatives need no numerical differentiation.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.errors import InvalidDiffeo
from src.paths.grid import GridSpec, Path, check_same_grid, cumulative_integral
from src.paths.interpolation import monotone_hermite, pchip

logger = logging.getLogger(__name__)

CHART_TOLERANCE = 1e-12


def _chart_to_values(xi_values: np.ndarray, dt: float):
    """Grid values of phi and ln N from chart values (overflow-safe)."""
    shift = np.max(xi_values, axis=-1, keepdims=True)
    cumulative = cumulative_integral(np.exp(xi_values - shift), dt)
    total = cumulative[..., -1:]
    phi_values = cumulative / total
    phi_values[..., -1] = 1.0
    log_norm = np.log(total[..., 0]) + shift[..., 0]
    return phi_values, log_norm


@dataclass(frozen=True, eq=False)
class Diffeo:
    """
    Grid diffeomorphism in the xi-chart.

    Attributes:
        grid: Grid of the representation
        xi: Chart path with xi(0) = 0
        phi_values: phi(t_i), from 0 to 1, strictly increasing
        log_norm: ln of the normalizer int_0^1 exp(xi)
    """
    grid: GridSpec
    xi: Path
    phi_values: np.ndarray
    log_norm: np.ndarray

    def __post_init__(self):
        check_same_grid(self.grid, self.xi.grid)
        phi_values = np.array(self.phi_values, dtype=float)
        if phi_values.shape != self.xi.values.shape:
            raise InvalidDiffeo(f"phi has shape {phi_values.shape}, xi has {self.xi.values.shape}")
        phi_values.setflags(write=False)
        object.__setattr__(self, 'phi_values', phi_values)
        object.__setattr__(self, 'log_norm', np.asarray(self.log_norm, dtype=float))

    @classmethod
    def identity(cls, grid: GridSpec) -> 'Diffeo':
        return a_inv(Path(grid, np.zeros(grid.n_points)))

    @property
    def dlog_norm(self):
        """The normalizer int_0^1 exp(xi)."""
        return np.exp(self.log_norm)

    @property
    def is_batch(self) -> bool:
        return self.xi.is_batch

    def __len__(self) -> int:
        return len(self.xi)

    def __getitem__(self, index) -> 'Diffeo':
        return Diffeo(self.grid, self.xi[index], self.phi_values[index], self.log_norm[index])

    @property
    def log_dphi0(self):
        return -self.log_norm

    @property
    def log_dphi1(self):
        return self.xi.values[..., -1] - self.log_norm

    @property
    def dphi0(self):
        """phi'(0) = 1/N."""
        return np.exp(self.log_dphi0)

    @property
    def dphi1(self):
        """phi'(1) = exp(xi(1))/N."""
        return np.exp(self.log_dphi1)

    def derivative_values(self) -> np.ndarray:
        """phi'(t_i) on the grid."""
        return np.exp(self.xi.values - self.log_norm[..., None])

    def derivative_at(self, s) -> np.ndarray:
        """phi'(s) off the grid."""
        return np.exp(self.chart_at(s) - self.log_norm[..., None])

    def chart_at(self, s) -> np.ndarray:
        """ln phi'(s) - ln phi'(0), xi interpolated by PCHIP like every other grid path."""
        return pchip(self.grid.nodes, self.xi.values, np.clip(s, 0.0, 1.0))

    def at(self, s) -> np.ndarray:
        """phi(s) by monotone Hermite interpolation with exact node slopes."""
        return monotone_hermite(self.grid.nodes, self.phi_values, self.derivative_values(), s)

    def inverse_at(self, t) -> np.ndarray:
        """phi^{-1}(t) by monotone Hermite interpolation, slopes 1/phi'."""
        return monotone_hermite(self.phi_values, self.grid.nodes, 1.0 / self.derivative_values(), t)

    def validate(self, tol: float = CHART_TOLERANCE):
        """
        Check every representation invariant.

        Raises:
            InvalidDiffeo: On the first violated invariant
        """
        phi = self.phi_values
        if np.any(np.abs(self.xi.values[..., 0]) > 0):
            raise InvalidDiffeo("xi(0) must be 0")
        if np.any(phi[..., 0] != 0.0) or np.any(phi[..., -1] != 1.0):
            raise InvalidDiffeo("phi must fix the endpoints 0 and 1")
        if np.any(np.diff(phi, axis=-1) <= 0):
            raise InvalidDiffeo("phi must be strictly increasing")
        if np.any(self.derivative_values() <= 0):
            raise InvalidDiffeo("phi' must be positive")
        rebuilt, log_norm = _chart_to_values(self.xi.values, self.grid.dt)
        deviation = float(np.max(np.abs(rebuilt - phi)))
        if deviation > tol:
            raise InvalidDiffeo(f"phi differs from its chart reconstruction by {deviation:.3e}")
        if np.any(np.abs(log_norm - self.log_norm) > tol):
            raise InvalidDiffeo("normalizer inconsistent with chart")


def a_inv(xi: Path) -> Diffeo:
    """
    Chart inverse: phi(t) = int_0^t exp(xi) / int_0^1 exp(xi).

    Args:
        xi: Path (single or batched) with xi(0) = 0

    Returns:
        Diffeo with the same batch shape
    """
    if np.any(np.abs(xi.values[..., 0]) > CHART_TOLERANCE):
        raise InvalidDiffeo("Chart path must start at 0")
    values = np.array(xi.values)
    values[..., 0] = 0.0
    xi = Path(xi.grid, values)
    phi_values, log_norm = _chart_to_values(xi.values, xi.grid.dt)
    return Diffeo(xi.grid, xi, phi_values, log_norm)


def a_map(phi: Diffeo) -> Path:
    """Chart map: xi(t) = ln phi'(t) - ln phi'(0)."""
    return phi.xi


def compose(g, phi: Diffeo) -> Diffeo:
    """
    Composition g o phi.

    Any outer map exposing chart_at(s) = ln g'(s) - ln g'(0) is accepted:
    Mobius maps and smooth outer maps contribute their closed-form
    derivative, grid diffeomorphisms their PCHIP-interpolated chart.

    Args:
        g: Outer map (Diffeo, MobiusDiffeo or SmoothOuterMap)
        phi: Inner diffeomorphism

    Returns:
        Diffeo psi with xi_psi(t) = xi_phi(t) + chart_g(phi(t))
    """
    if isinstance(g, Diffeo):
        check_same_grid(g.grid, phi.grid)
    shifted = phi.xi.values + g.chart_at(phi.phi_values)
    return a_inv(Path(phi.grid, shifted))


def invert(phi: Diffeo) -> Diffeo:
    """
    Grid representation of phi^{-1}.

    The chart of the inverse is xi_inv(t) = -xi(phi^{-1}(t)).
    """
    s = phi.inverse_at(phi.grid.nodes)
    return a_inv(Path(phi.grid, -phi.chart_at(s)))


