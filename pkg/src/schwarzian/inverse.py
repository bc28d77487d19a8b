"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Constructive inverse of the Schwarzian derivative for small right-hand sides

For v with sup-norm at most 1/4 the map
    Q_v(u)(t) = v(t) + 1/2 (int_t^1 u)^2
is a contraction (factor 1/2) of the ball ||u|| <= 1/2. Its fixed point u
gives U = f''/f' = -int_t^1 u, so U' = u, U(1) = 0 and
Sch{f} = U' - U^2/2 = v.
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.integrate import cumulative_simpson

from src.errors import NoConvergence, NormTooLarge
from src.paths.grid import Path
from src.schwarzian.outer_map import SmoothOuterMap

logger = logging.getLogger(__name__)

MAX_NORM = 0.25


@dataclass
class SchwarzianSolution:
    """Fixed point of Q_v together with the outer map it defines."""
    outer_map: SmoothOuterMap
    u: Path
    log_derivative: Path
    iterate_differences: List[float] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.iterate_differences)

    def contraction_factors(self, floor: float = 1e-14) -> np.ndarray:
        """Ratios of successive iterate differences above the round-off floor."""
        diffs = np.asarray(self.iterate_differences)
        keep = diffs[:-1] > floor
        return diffs[1:][keep] / diffs[:-1][keep]


def _tail_integral(u: np.ndarray, dt: float) -> np.ndarray:
    """int_t^1 u on the grid (Simpson)."""
    cumulative = cumulative_simpson(u, dx=dt, initial=0.0)
    return cumulative[-1] - cumulative


def solve_schwarzian(v: Path, tolerance: float = 1e-12, max_iterations: int = 64) -> SchwarzianSolution:
    """
    Solve Sch{f} = v by fixed-point iteration of Q_v.

    Args:
        v: Right-hand side with sup-norm <= 1/4
        tolerance: Stop when ||u_{k+1} - u_k|| <= tolerance
        max_iterations: Iteration budget

    Returns:
        SchwarzianSolution with f''(1) = 0 and |f''(0)/f'(0)| <= 1/2

    Raises:
        NormTooLarge: ||v|| > 1/4
        NoConvergence: Budget exhausted before reaching tolerance
    """
    if v.is_batch:
        raise ValueError("solve_schwarzian expects a single right-hand side")
    norm = float(np.max(np.abs(v.values)))
    if norm > MAX_NORM:
        raise NormTooLarge(f"||v|| = {norm:.6g} exceeds 1/4")

    dt = v.grid.dt
    u = v.values.copy()
    differences: List[float] = []
    for iteration in range(1, max_iterations + 1):
        updated = v.values + 0.5 * _tail_integral(u, dt) ** 2
        difference = float(np.max(np.abs(updated - u)))
        differences.append(difference)
        u = updated
        if difference <= tolerance:
            logger.debug(f"Q_v converged after {iteration} iterations (last step {difference:.2e})")
            break
    else:
        raise NoConvergence(f"Q_v did not converge in {max_iterations} iterations (last step {differences[-1]:.2e})")

    U = -_tail_integral(u, dt)
    U[-1] = 0.0
    log_f_prime_raw = cumulative_simpson(U, dx=dt, initial=0.0)
    shift = log_f_prime_raw.max()
    density = np.exp(log_f_prime_raw - shift)
    running = cumulative_simpson(density, dx=dt, initial=0.0)
    f_values = running / running[-1]
    f_values[-1] = 1.0
    log_f_prime = log_f_prime_raw - shift - np.log(running[-1])

    log_derivative = Path(v.grid, U)
    outer_map = SmoothOuterMap.from_log_derivative(log_derivative, u, log_f_prime, f_values)
    return SchwarzianSolution(outer_map, Path(v.grid, u), log_derivative, differences)


def schwarzian_inverse(v: Path, tolerance: float = 1e-12, max_iterations: int = 64) -> SmoothOuterMap:
    """Outer map f with Sch{f} = v (see solve_schwarzian)."""
    return solve_schwarzian(v, tolerance, max_iterations).outer_map
