"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Brownian samplers on the grid and reproducible random streams
"""
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.paths.grid import GridSpec, Path, SigmaLike, as_sigma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RngStream:
    """
    Key of an independent random stream.

    A stream is a Philox counter-based generator seeded by
    SeedSequence(seed, spawn_key=(stream_id,)); identical keys always
    produce identical sequences, distinct stream_ids never overlap.
    """
    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of the stream."""
        sequence = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(sequence))

    def child(self, offset: int) -> 'RngStream':
        return RngStream(self.seed, self.stream_id + offset)


RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Accept either a stream key or a live generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def standard_w0(grid: GridSpec, gen: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Raw unit-dispersion W0 values, shape (size, n) or (n,)."""
    shape = (grid.n_points - 1,) if size is None else (size, grid.n_points - 1)
    increments = gen.standard_normal(shape) * np.sqrt(grid.dt)
    values = np.zeros(shape[:-1] + (grid.n_points,))
    np.cumsum(increments, axis=-1, out=values[..., 1:])
    return values


def sample_w0(sigma: SigmaLike, grid: GridSpec, rng: RngLike, size: Optional[int] = None) -> Path:
    """
    Sample Brownian motion pinned at 0 (the measure W0_sigma).

    Args:
        sigma: Dispersion; increments over dt have variance sigma^2 dt
        grid: Sampling grid
        rng: Stream key or generator
        size: Batch size (None for a single path)

    Returns:
        Path with values[..., 0] == 0
    """
    s = as_sigma(sigma)
    return Path(grid, s * standard_w0(grid, as_generator(rng), size))


def sample_brownian(
    sigma: SigmaLike,
    grid: GridSpec,
    start,
    rng: RngLike,
    size: Optional[int] = None,
) -> Path:
    """
    Sample free Brownian motion started at start (scalar or per-path array).
    """
    s = as_sigma(sigma)
    start = np.asarray(start, dtype=float)
    if size is None and start.ndim == 1:
        size = start.shape[0]
    values = s * standard_w0(grid, as_generator(rng), size) + start[..., None]
    return Path(grid, values)


def bridge_values(
    dispersion,
    grid: GridSpec,
    start,
    end,
    gen: np.random.Generator,
    size: Optional[int] = None,
) -> np.ndarray:
    """
    Raw Brownian bridge values from start to end.

    dispersion, start and end may be scalars or per-path arrays of
    length size.
    """
    t = grid.nodes
    dispersion = np.asarray(dispersion, dtype=float)[..., None]
    start = np.asarray(start, dtype=float)[..., None]
    end = np.asarray(end, dtype=float)[..., None]
    if size is None:
        size_shape = np.broadcast_shapes(dispersion.shape, start.shape, end.shape)[:-1]
        size = size_shape[0] if size_shape else None

    w = standard_w0(grid, gen, size)
    pinned = w - t * w[..., -1:]
    values = start + (end - start) * t + dispersion * pinned
    values[..., 0] = start[..., 0]
    values[..., -1] = end[..., 0]
    return values


def sample_bridge(
    sigma: SigmaLike,
    grid: GridSpec,
    start,
    end,
    rng: RngLike,
    size: Optional[int] = None,
) -> Path:
    """
    Sample a Brownian bridge: Brownian motion conditioned on both endpoints.

    Uses the exact grid construction x(t) = start + (end-start) t
    + sigma (W(t) - t W(1)).

    Args:
        sigma: Dispersion
        grid: Sampling grid
        start: Value at t=0
        end: Value at t=1
        rng: Stream key or generator
        size: Batch size (None for a single path)

    Returns:
        Path with exact endpoints
    """
    s = as_sigma(sigma)
    return Path(grid, bridge_values(s, grid, start, end, as_generator(rng), size))


def bridge_survival(values: np.ndarray, sigma, dt: float) -> np.ndarray:
    """
    Probability that the continuous path stays positive between grid nodes.

    Given the grid values, the path between adjacent nodes is a Brownian
    bridge; it avoids 0 with probability 1 - exp(-2 x_i x_{i+1} / (sigma^2 dt)).
    The product over intervals is the exact conditional survival probability.

    Args:
        values: Grid values, shape (..., n)
        sigma: Dispersion (scalar or per-path array)
        dt: Grid spacing

    Returns:
        Survival probability per path
    """
    values = np.asarray(values, dtype=float)
    sigma = np.asarray(sigma, dtype=float)[..., None]
    product = values[..., :-1] * values[..., 1:]
    with np.errstate(over='ignore'):
        per_interval = -np.expm1(-2.0 * product / (sigma ** 2 * dt))
    per_interval = np.where(product > 0, per_interval, 0.0)
    return np.prod(per_interval, axis=-1)


def grid_positive(values: np.ndarray) -> np.ndarray:
    """Indicator that every grid value is positive (biased towards survival)."""
    return np.all(np.asarray(values) > 0, axis=-1).astype(float)
