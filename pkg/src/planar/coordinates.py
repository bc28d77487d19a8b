"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Complex paths and their four-component polar coordinates (r, phi, alpha, eta)
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Union

import numpy as np

from src.diffeo.group import Diffeo
from src.errors import BranchJump, DomainError, GridError, VanishingPath
from src.paths.csv_io import read_columns, write_columns
from src.paths.grid import GridSpec, Path, check_same_grid
from src.paths.interpolation import linear_on_grid
from src.polar.decomposition import decompose, reconstruct_values

logger = logging.getLogger(__name__)

MAX_PHASE_STEP = math.pi / 2
MIN_MODULUS = 1e-10
ETA_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ComplexPath:
    """Complex-valued path z = re + i im on a shared grid."""
    re: Path
    im: Path

    def __post_init__(self):
        check_same_grid(self.re.grid, self.im.grid)
        if self.re.values.shape != self.im.values.shape:
            raise GridError(f"re has shape {self.re.values.shape}, im has {self.im.values.shape}")

    @classmethod
    def from_values(cls, grid: GridSpec, values) -> 'ComplexPath':
        values = np.asarray(values, dtype=complex)
        return cls(Path(grid, values.real), Path(grid, values.imag))

    @property
    def grid(self) -> GridSpec:
        return self.re.grid

    @property
    def values(self) -> np.ndarray:
        return self.re.values + 1j * self.im.values

    @property
    def modulus(self) -> np.ndarray:
        return np.hypot(self.re.values, self.im.values)

    @property
    def is_batch(self) -> bool:
        return self.re.is_batch

    def __len__(self) -> int:
        return len(self.re)

    def __getitem__(self, index) -> 'ComplexPath':
        return ComplexPath(self.re[index], self.im[index])

    def min_modulus(self):
        return np.min(self.modulus, axis=-1)

    def rotated(self, angle: float) -> 'ComplexPath':
        """z multiplied by exp(i angle)."""
        return ComplexPath.from_values(self.grid, self.values * np.exp(1j * angle))


@dataclass(frozen=True, eq=False)
class PolarTuple2D:
    """
    Coordinates of a nonvanishing complex path.

    Attributes:
        r: Radial coordinate of |z|
        phi: Diffeomorphism of |z|
        alpha: Initial phase as a point of R/Z, in [0, 1)
        eta: Unwrapped phase along z o phi, eta(0) = 0
    """
    r: np.ndarray
    phi: Diffeo
    alpha: np.ndarray
    eta: Path

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        if not np.all(r > 0):
            raise DomainError("r must be positive")
        if np.any(np.abs(self.eta.values[..., 0]) > ETA_TOLERANCE):
            raise DomainError("eta must start at 0")
        check_same_grid(self.phi.grid, self.eta.grid)
        alpha = np.mod(np.asarray(self.alpha, dtype=float), 1.0)
        alpha = np.where(alpha >= 1.0, 0.0, alpha)
        object.__setattr__(self, 'r', r)
        object.__setattr__(self, 'alpha', alpha)


def l_map_values(p: PolarTuple2D) -> np.ndarray:
    """
    Complex grid values of l_map(p), without building a path.

    Rows whose phi is numerically flat come back with non-finite entries
    instead of raising; callers decide what to do with them.
    """
    grid = p.phi.grid
    with np.errstate(invalid='ignore', over='ignore', divide='ignore'):
        modulus = reconstruct_values(p.r, p.phi)
        s = p.phi.inverse_at(grid.nodes)
        phase = 2.0 * math.pi * p.alpha[..., None] + linear_on_grid(p.eta.values, s)
        return modulus * np.exp(1j * phase)


def l_map(p: PolarTuple2D) -> ComplexPath:
    """
    z(t) = r sqrt(phi'(phi^{-1}(t))) exp(2 pi i alpha + i eta(phi^{-1}(t))).

    The modulus equals reconstruct(r, phi) exactly, whatever alpha and eta are.

    Raises:
        DomainError: If phi is too flat to invert on the grid
    """
    values = l_map_values(p)
    if not np.all(np.isfinite(values)):
        raise DomainError("phi is too flat to invert on this grid")
    return ComplexPath.from_values(p.phi.grid, values)


def unwrapped_phase(z: ComplexPath, max_phase_step: float = MAX_PHASE_STEP) -> np.ndarray:
    """
    Continuous argument of z along the grid, starting at the principal Arg z(0).

    Raises:
        BranchJump: If an adjacent-node increment reaches max_phase_step
    """
    values = z.values
    increments = np.angle(values[..., 1:] / values[..., :-1])
    largest = float(np.max(np.abs(increments)))
    if largest >= max_phase_step:
        raise BranchJump(
            f"Phase increment {largest:.3f} between adjacent nodes reaches {max_phase_step:.3f}; refine the grid"
        )
    phase = np.empty(values.shape)
    phase[..., 0] = np.angle(values[..., 0])
    np.cumsum(increments, axis=-1, out=phase[..., 1:])
    phase[..., 1:] += phase[..., :1]
    return phase


def l_inv(z: ComplexPath, max_phase_step: float = MAX_PHASE_STEP,
          min_modulus: float = MIN_MODULUS) -> PolarTuple2D:
    """
    Polar coordinates of a nonvanishing complex path.

    r and phi come from decomposing |z|; alpha = Arg z(0)/(2 pi) mod 1;
    eta(s) = theta(phi(s)) - theta(0) where theta is the unwrapped argument.

    Args:
        z: Complex path (single or batched)
        max_phase_step: Largest accepted phase increment between nodes
        min_modulus: Smallest accepted |z(t_i)|

    Returns:
        PolarTuple2D

    Raises:
        VanishingPath: If |z| drops below min_modulus
        BranchJump: If the argument cannot be unwrapped on this grid
    """
    smallest = float(np.min(z.modulus))
    if smallest < min_modulus:
        raise VanishingPath(f"|z| reaches {smallest:.3e}, below {min_modulus:.1e}")

    theta = unwrapped_phase(z, max_phase_step)
    polar = decompose(Path(z.grid, z.modulus))
    eta = linear_on_grid(theta - theta[..., :1], polar.phi.phi_values)
    eta[..., 0] = 0.0
    alpha = theta[..., 0] / (2.0 * math.pi)
    return PolarTuple2D(polar.rho, polar.phi, alpha, Path(z.grid, eta))


def write_complex_csv(filepath: Union[str, FilePath], z: ComplexPath):
    """Write a single complex path as `t,re,im`."""
    if z.is_batch:
        raise GridError("write_complex_csv expects a single path")
    write_columns(filepath, z.grid, {'re': z.re.values, 'im': z.im.values})


def read_complex_csv(filepath: Union[str, FilePath]) -> ComplexPath:
    """Read a `t,re,im` CSV."""
    grid, columns = read_columns(filepath, ['re', 'im'])
    return ComplexPath(Path(grid, columns['re']), Path(grid, columns['im']))
