"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Mobius maps g_beta(t) = (beta+1) t / (beta t + 1) of [0, 1]
"""
import math
from dataclasses import dataclass

import numpy as np

from src.diffeo.group import Diffeo, a_inv
from src.errors import DomainError
from src.paths.grid import GridSpec, Path


@dataclass(frozen=True)
class MobiusDiffeo:
    """The Mobius subfamily, closed under composition and inversion."""
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > -1.0):
            raise DomainError(f"Mobius index must satisfy beta > -1, got {self.beta}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (self.beta + 1.0) * t / (self.beta * t + 1.0)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return (self.beta + 1.0) / (self.beta * t + 1.0) ** 2

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return -2.0 * self.beta * (self.beta + 1.0) / (self.beta * t + 1.0) ** 3

    def third_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return 6.0 * self.beta ** 2 * (self.beta + 1.0) / (self.beta * t + 1.0) ** 4

    def chart_at(self, s):
        """ln g'(s) - ln g'(0) = -2 ln(beta s + 1)."""
        return -2.0 * np.log1p(self.beta * np.asarray(s, dtype=float))

    def inverse(self) -> 'MobiusDiffeo':
        """g_beta^{-1} = g_{-beta/(beta+1)}."""
        return MobiusDiffeo(-self.beta / (self.beta + 1.0))

    def then(self, inner: 'MobiusDiffeo') -> 'MobiusDiffeo':
        """g_beta o g_inner = g_{beta + beta' + beta beta'}."""
        return MobiusDiffeo(self.beta + inner.beta + self.beta * inner.beta)

    def on_grid(self, grid: GridSpec) -> Diffeo:
        """Grid representation built from the exact chart."""
        return a_inv(Path(grid, self.chart_at(grid.nodes)))
