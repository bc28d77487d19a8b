"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Uniform grids on [0, 1], sampled paths and trapezoid quadrature
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from src.errors import DomainError, GridError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid t_i = i/(n_points-1) on [0, 1], endpoints included."""
    n_points: int = 513

    def __post_init__(self):
        if isinstance(self.n_points, bool) or int(self.n_points) != self.n_points:
            raise GridError(f"n_points must be an integer, got {self.n_points!r}")
        if self.n_points < 3:
            raise GridError(f"n_points must be >= 3, got {self.n_points}")
        object.__setattr__(self, 'n_points', int(self.n_points))

    @property
    def dt(self) -> float:
        return 1.0 / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_points)

    def refine(self) -> 'GridSpec':
        """Grid with every interval halved (2n-1 nodes)."""
        return GridSpec(2 * self.n_points - 1)

    def index_of(self, t: float) -> int:
        """Index of the node closest to t."""
        if not 0.0 <= t <= 1.0:
            raise GridError(f"t={t} outside [0, 1]")
        return int(round(t * (self.n_points - 1)))


@dataclass(frozen=True)
class Dispersion:
    """Wiener dispersion sigma > 0."""
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"Dispersion must be positive and finite, got {self.sigma}")

    def __float__(self) -> float:
        return float(self.sigma)

    def scaled(self, factor: float) -> 'Dispersion':
        return Dispersion(self.sigma * factor)


SigmaLike = Union[float, Dispersion]


def as_sigma(sigma: SigmaLike) -> float:
    """Validate a dispersion given either as Dispersion or as a plain float."""
    if isinstance(sigma, Dispersion):
        return sigma.sigma
    return Dispersion(float(sigma)).sigma


@dataclass(frozen=True, eq=False)
class Path:
    """
    Continuous function on [0, 1] sampled on a uniform grid.

    values may carry leading batch axes; the last axis always runs over
    the grid nodes. The array is stored read-only.
    """
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 0 or values.shape[-1] != self.grid.n_points:
            raise GridError(
                f"Path has {values.shape[-1] if values.ndim else 0} values, "
                f"grid has {self.grid.n_points} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("Path values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_function(cls, grid: GridSpec, func: Callable[[np.ndarray], np.ndarray]) -> 'Path':
        """Sample func at the grid nodes."""
        return cls(grid, np.broadcast_to(func(grid.nodes), (grid.n_points,)))

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> 'Path':
        return cls(grid, np.full(grid.n_points, float(value)))

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return self.values.shape[:-1]

    @property
    def is_batch(self) -> bool:
        return self.values.ndim > 1

    @property
    def start(self):
        return self.values[..., 0]

    @property
    def end(self):
        return self.values[..., -1]

    def __len__(self) -> int:
        return self.values.shape[0] if self.is_batch else 1

    def __getitem__(self, index) -> 'Path':
        if not self.is_batch:
            raise IndexError("Single path is not indexable")
        return Path(self.grid, self.values[index])

    def is_positive(self):
        """True where every grid value is strictly positive."""
        return np.all(self.values > 0, axis=-1)

    def sup_norm(self):
        return np.max(np.abs(self.values), axis=-1)

    def value_at(self, t: float):
        """Linear interpolation of the path at time t."""
        position = t * (self.grid.n_points - 1)
        k = min(int(math.floor(position)), self.grid.n_points - 2)
        frac = position - k
        return (1.0 - frac) * self.values[..., k] + frac * self.values[..., k + 1]


def integrate(p: Path):
    """
    Composite trapezoid value of the integral of p over [0, 1].

    Args:
        p: Path (single or batched)

    Returns:
        float for a single path, array over the batch otherwise
    """
    result = trapezoid(p.values, dx=p.grid.dt, axis=-1)
    return float(result) if np.ndim(result) == 0 else result


def cumulative_integral(values: np.ndarray, dt: float) -> np.ndarray:
    """Running trapezoid integral along the last axis, starting at 0."""
    return cumulative_trapezoid(values, dx=dt, axis=-1, initial=0.0)


def check_same_grid(*grids: GridSpec):
    """Raise GridError unless every grid has the same node count."""
    counts = {g.n_points for g in grids}
    if len(counts) > 1:
        raise GridError(f"Grid mismatch: {sorted(counts)}")
