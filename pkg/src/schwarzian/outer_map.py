"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Smooth outer maps f of [0, 1] and their Schwarzian derivative

Sch{f, t} = (f''/f')'(t) - 1/2 (f''/f')(t)^2
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.errors import DomainError
from src.paths.grid import Path
from src.paths.interpolation import hermite, linear_on_grid

logger = logging.getLogger(__name__)


def fourth_order_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    """
    Derivative of uniform-grid data: centered five-point stencil inside,
    one-sided fourth-order closures at the two nodes next to each end.
    """
    u = np.asarray(values, dtype=float)
    n = u.shape[-1]
    if n < 5:
        return np.gradient(u, dt, axis=-1, edge_order=2)
    d = np.empty_like(u)
    d[..., 2:-2] = (u[..., :-4] - 8.0 * u[..., 1:-3] + 8.0 * u[..., 3:-1] - u[..., 4:]) / (12.0 * dt)
    d[..., 0] = (-25.0 * u[..., 0] + 48.0 * u[..., 1] - 36.0 * u[..., 2] + 16.0 * u[..., 3] - 3.0 * u[..., 4]) / (12.0 * dt)
    d[..., 1] = (-3.0 * u[..., 0] - 10.0 * u[..., 1] + 18.0 * u[..., 2] - 6.0 * u[..., 3] + u[..., 4]) / (12.0 * dt)
    d[..., -1] = (25.0 * u[..., -1] - 48.0 * u[..., -2] + 36.0 * u[..., -3] - 16.0 * u[..., -4] + 3.0 * u[..., -5]) / (12.0 * dt)
    d[..., -2] = (3.0 * u[..., -1] + 10.0 * u[..., -2] - 18.0 * u[..., -3] + 6.0 * u[..., -4] - u[..., -5]) / (12.0 * dt)
    return d


@dataclass(frozen=True, eq=False)
class SmoothOuterMap:
    """
    Element of Diff^3_+([0, 1]) given by evaluators for f, f', f''.

    Analytic maps also provide f'''. Spline-backed maps (produced by the
    inverse Schwarzian solver) instead carry the grid values of
    log_derivative = f''/f' and its derivative.
    """
    f: Callable
    df: Callable
    d2f: Callable
    d3f: Optional[Callable] = None
    is_mobius: bool = False
    beta: Optional[float] = None
    log_derivative: Optional[Path] = None
    name: str = "map"

    @classmethod
    def identity(cls) -> 'SmoothOuterMap':
        return cls(
            f=lambda t: np.asarray(t, dtype=float),
            df=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            d2f=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            d3f=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            is_mobius=True,
            beta=0.0,
            name="identity",
        )

    @classmethod
    def mobius(cls, beta: float) -> 'SmoothOuterMap':
        """g_beta with closed-form derivatives up to third order."""
        from src.diffeo.mobius import MobiusDiffeo
        g = MobiusDiffeo(beta)
        return cls(
            f=g,
            df=g.derivative,
            d2f=g.second_derivative,
            d3f=g.third_derivative,
            is_mobius=True,
            beta=float(beta),
            name=f"mobius({beta})",
        )

    @classmethod
    def exponential(cls, c: float) -> 'SmoothOuterMap':
        """f(t) = (e^{ct} - 1)/(e^c - 1); f''/f' = c, Sch = -c^2/2."""
        if c == 0:
            return cls.identity()
        if not math.isfinite(c):
            raise DomainError(f"Exponential map needs a finite rate, got {c}")
        scale = math.expm1(c)
        return cls(
            f=lambda t: np.expm1(c * np.asarray(t, dtype=float)) / scale,
            df=lambda t: c * np.exp(c * np.asarray(t, dtype=float)) / scale,
            d2f=lambda t: c ** 2 * np.exp(c * np.asarray(t, dtype=float)) / scale,
            d3f=lambda t: c ** 3 * np.exp(c * np.asarray(t, dtype=float)) / scale,
            name=f"exponential({c})",
        )

    @classmethod
    def from_log_derivative(cls, log_derivative: Path, slope: np.ndarray, log_f_prime: np.ndarray,
                            f_values: np.ndarray) -> 'SmoothOuterMap':
        """
        Spline-backed map from grid data.

        Args:
            log_derivative: U = f''/f' on the grid
            slope: U' on the grid
            log_f_prime: ln f' on the grid
            f_values: f on the grid
        """
        nodes = log_derivative.grid.nodes
        U = log_derivative.values

        def df(t):
            return np.exp(hermite(nodes, log_f_prime, U, np.atleast_1d(t)).reshape(np.shape(t)))

        def d2f(t):
            ratio = hermite(nodes, U, slope, np.atleast_1d(t)).reshape(np.shape(t))
            return ratio * df(t)

        def f(t):
            derivative = np.exp(log_f_prime)
            return hermite(nodes, f_values, derivative, np.atleast_1d(t)).reshape(np.shape(t))

        return cls(f=f, df=df, d2f=d2f, log_derivative=log_derivative, name="spline")

    @property
    def is_spline_backed(self) -> bool:
        return self.log_derivative is not None

    def chart_at(self, s):
        """ln f'(s) - ln f'(0), so the map can act by composition."""
        return np.log(self.df(s)) - np.log(self.df(0.0))


def schwarzian_of(f: SmoothOuterMap, t):
    """
    Schwarzian derivative Sch{f, t}.

    Analytic maps use f'''/f' - 3/2 (f''/f')^2. Spline-backed maps
    differentiate the grid values of f''/f' with a fourth-order stencil
    and interpolate linearly between nodes (exact at the nodes).

    Args:
        f: Outer map
        t: Scalar or array of points in [0, 1]

    Returns:
        Sch{f, t}, same shape as t
    """
    t_arr = np.asarray(t, dtype=float)
    if f.d3f is not None:
        d1 = f.df(t_arr)
        ratio2 = f.d2f(t_arr) / d1
        result = f.d3f(t_arr) / d1 - 1.5 * ratio2 ** 2
    elif f.is_spline_backed:
        U = f.log_derivative
        grid_values = fourth_order_derivative(U.values, U.grid.dt) - 0.5 * U.values ** 2
        result = linear_on_grid(grid_values, np.atleast_1d(t_arr)).reshape(t_arr.shape)
    else:
        raise DomainError(f"Map {f.name} has neither a third derivative nor grid data")
    return float(result) if np.ndim(result) == 0 else result
