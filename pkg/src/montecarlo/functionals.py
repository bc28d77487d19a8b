"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Bounded test functionals on paths, diffeomorphisms and complex paths

Evaluators work on batched objects and return one value per path.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence

import numpy as np
from scipy.integrate import trapezoid

from src.paths.interpolation import linear_on_grid

logger = logging.getLogger(__name__)

MEDIAN_LEVEL = 1.0


@dataclass(frozen=True)
class TestFunctional:
    """
    Named bounded functional.

    Attributes:
        id: Registry name
        kind: 'path', 'diffeo' or 'complex'
        evaluator: Batched map to real values
        bound: Known bound on |evaluator|
    """
    __test__ = False  # not a pytest class

    id: str
    kind: str
    evaluator: Callable[[Any], np.ndarray]
    bound: float = 1.0

    def __call__(self, obj) -> np.ndarray:
        return np.asarray(self.evaluator(obj), dtype=float)


def _ones(obj) -> np.ndarray:
    if hasattr(obj, "re"):
        obj = obj.re
    if hasattr(obj, "xi"):
        obj = obj.xi
    return np.ones(obj.values.shape[:-1])


def _midpoint(values: np.ndarray) -> np.ndarray:
    return linear_on_grid(values, np.array([0.5]))[..., 0]


def median_indicator(level: float = MEDIAN_LEVEL) -> TestFunctional:
    """1{x(1/2) < level}."""
    return TestFunctional(
        "median_indicator", "path",
        lambda x: (_midpoint(x.values) < level).astype(float),
    )


PATH_FUNCTIONALS: Dict[str, TestFunctional] = {
    "one": TestFunctional("one", "path", _ones),
    "median_indicator": median_indicator(),
    "exp_neg_integral_sq": TestFunctional(
        "exp_neg_integral_sq", "path",
        lambda x: np.exp(-trapezoid(x.values ** 2, dx=x.grid.dt, axis=-1)),
    ),
    "exp_neg_midpoint_sq": TestFunctional(
        "exp_neg_midpoint_sq", "path",
        lambda x: np.exp(-_midpoint(x.values) ** 2),
    ),
}

DIFFEO_FUNCTIONALS: Dict[str, TestFunctional] = {
    "one": TestFunctional("one", "diffeo", _ones),
    "exp_neg_dphi0": TestFunctional("exp_neg_dphi0", "diffeo", lambda phi: np.exp(-phi.dphi0)),
    "phi_half": TestFunctional("phi_half", "diffeo", lambda phi: _midpoint(phi.phi_values)),
}


def _cos_phase(z) -> np.ndarray:
    z0 = z.re.values[..., 0] + 1j * z.im.values[..., 0]
    z1 = z.re.values[..., -1] + 1j * z.im.values[..., -1]
    modulus = np.abs(z0) * np.abs(z1)
    safe = np.where(modulus > 0, modulus, 1.0)
    return np.where(modulus > 0, np.real(z1 * np.conj(z0)) / safe, 0.0)


COMPLEX_FUNCTIONALS: Dict[str, TestFunctional] = {
    "one": TestFunctional("one", "complex", _ones),
    "cos_phase": TestFunctional("cos_phase", "complex", _cos_phase),
    "modulus_integral": TestFunctional(
        "modulus_integral", "complex",
        lambda z: np.exp(-trapezoid(z.re.values ** 2 + z.im.values ** 2, dx=z.re.grid.dt, axis=-1)),
    ),
}

REGISTRIES = {
    "path": PATH_FUNCTIONALS,
    "diffeo": DIFFEO_FUNCTIONALS,
    "complex": COMPLEX_FUNCTIONALS,
}


def get_functional(kind: str, functional_id: str) -> TestFunctional:
    """Look up a registered functional, raising KeyError with the known ids."""
    registry = REGISTRIES[kind]
    if functional_id not in registry:
        raise KeyError(f"Unknown {kind} functional '{functional_id}', known: {sorted(registry)}")
    return registry[functional_id]


def get_functionals(kind: str, ids: Sequence[str]) -> List[TestFunctional]:
    return [get_functional(kind, i) for i in ids]
