"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Deterministic quadrature oracles, independent of the closed forms

Each formula is recomputed from its defining integrand with adaptive
Gauss-Kronrod quadrature (scipy.integrate.quad); half-line integrals are
split at the peak of the integrand.
"""
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from scipy.integrate import IntegrationWarning, quad
from scipy.special import erf

from src.errors import DomainError, QuadratureFailure
from src.oracles.closed_form import (
    SQRT_2PI,
    FormulaId,
    _beta,
    a_of_beta,
    closed_form_value,
    i2_closed,
    lemma1_rhs,
    _positive,
    j_closed,
    lemma4_rhs,
)

logger = logging.getLogger(__name__)

DEFAULT_EPSREL = 1e-11
DEFAULT_TOLERANCE = 1e-8
RADIAL_KAPPA = 0.125


def _checked(name: str, value: float, error: float, rel_tolerance: float) -> float:
    if not math.isfinite(value) or error > rel_tolerance * abs(value):
        raise QuadratureFailure(
            f"{name}: error estimate {error:.3e} exceeds {rel_tolerance:.1e} relative (value {value:.6e})"
        )
    return value


def _integrate(func: Callable[[float], float], low: float, high: float, epsrel: float):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(func, low, high, epsabs=0.0, epsrel=epsrel, limit=400)


def _half_line(func: Callable[[float], float], peak: float, epsrel: float):
    left, left_err = _integrate(func, 0.0, peak, epsrel)
    right, right_err = _integrate(func, peak, math.inf, epsrel)
    return left + right, left_err + right_err


def _richardson_derivative(func: Callable[[float], float], x: float, h: float):
    """Two levels of Richardson-extrapolated central differences; returns (value, error)."""
    def central(step):
        return (func(x + step) - func(x - step)) / (2.0 * step)

    def extrapolated(step):
        return (4.0 * central(step / 2.0) - central(step)) / 3.0

    coarse = extrapolated(h)
    fine = extrapolated(h / 2.0)
    return fine, abs(fine - coarse)


def quadrature_oracle(
    formula_id,
    params: Mapping[str, float],
    epsrel: float = DEFAULT_EPSREL,
    rel_tolerance: float = DEFAULT_TOLERANCE,
) -> float:
    """
    Recompute a closed-form identity from its defining integral.

    Args:
        formula_id: FormulaId (or its string value)
        params: Named parameters of the formula
        epsrel: Relative accuracy requested from quad
        rel_tolerance: Largest accepted relative error estimate

    Returns:
        Numerical value of the integral

    Raises:
        DomainError: Parameters outside the formula's domain
        QuadratureFailure: Error estimate above rel_tolerance
    """
    formula_id = FormulaId(formula_id)
    p = dict(params)
    name = formula_id.value

    if formula_id in (FormulaId.IA, FormulaId.IB, FormulaId.IC):
        a, b = p["a"], p["b"]
        _positive("a", a)
        _positive("b", b)

        def damping(r):
            return math.exp(-0.5 * b * b * (1.0 / (r * r) + a * a * r * r))

        weight = {
            FormulaId.IA: lambda r: 1.0 / (r * r) + a,
            FormulaId.IB: lambda r: 1.0 / (r * r),
            FormulaId.IC: lambda r: 1.0,
        }[formula_id]
        value, error = _half_line(lambda r: weight(r) * damping(r), 1.0 / math.sqrt(a), epsrel)

    elif formula_id is FormulaId.LEMMA1:
        a, sigma = p["a"], p.get("sigma", 1.0)
        _positive("a", a)
        _positive("sigma", sigma)

        def integrand(q):
            # transition density at x(1) = x(0), damping, bridge survival
            return (math.exp(-a * a * q * q / sigma ** 2) * -math.expm1(-2.0 * q * q / sigma ** 2)
                    / (SQRT_2PI * sigma))

        value, error = _half_line(integrand, sigma / a, epsrel)

    elif formula_id is FormulaId.THEOREM2:
        a, theta, sigma = p["a"], p["theta"], p.get("sigma", 1.0)
        _positive("a", a)
        _positive("theta", theta)
        _positive("sigma", sigma)
        spread = a * a + 0.5 * (theta - 1.0) ** 2

        def integrand(q):
            survival = -math.expm1(-2.0 * theta * q * q / sigma ** 2)
            return math.exp(-spread * q * q / sigma ** 2) * survival / (SQRT_2PI * sigma)

        value, error = _half_line(integrand, sigma / math.sqrt(spread), epsrel)

    elif formula_id is FormulaId.DAMPED_MASS:
        a, sigma = p["a"], p["sigma"]
        _positive("a", a)
        _positive("sigma", sigma)

        def integrand(q):
            # probability that Brownian motion from q stays positive on [0, 1]
            return math.exp(-a * a * q * q / sigma ** 2) * erf(q / (sigma * math.sqrt(2.0)))

        value, error = _half_line(integrand, sigma / a, epsrel)

    elif formula_id is FormulaId.I2:
        beta, sigma = p["beta"], p.get("sigma", 1.0)
        _beta(beta, nonzero=True)
        _positive("sigma", sigma)
        log_b = math.log1p(beta)
        quadratic = log_b * log_b / (2.0 * sigma * sigma)
        inverse = RADIAL_KAPPA * sigma * sigma
        peak = (inverse / quadratic) ** 0.25

        def integrand(rho):
            return lemma4_rhs(beta, rho, sigma) * math.exp(-inverse / (rho * rho))

        value, error = _half_line(integrand, peak, epsrel)

    elif formula_id is FormulaId.LEMMA3_J:
        beta, rho, sigma = p["beta"], p["rho"], p["sigma"]
        _beta(beta)
        _positive("rho", rho)
        _positive("sigma", sigma)

        # J(0) minus the alpha-integral of the Lemma 4 value, alpha mapped to beta
        def integrand(b):
            d_alpha = b * (b + 2.0) / (2.0 * (b + 1.0) ** 2)
            return lemma4_rhs(b, rho, sigma) * d_alpha

        start = rho / (SQRT_2PI * sigma)
        if beta == 0.0:
            value, error = start, 0.0
        else:
            area, error = _integrate(integrand, 0.0, beta, epsrel)
            scale = rho ** 3 / sigma ** 2
            value, error = start - scale * area, scale * error

    elif formula_id is FormulaId.LEMMA4:
        beta, rho, sigma = p["beta"], p["rho"], p["sigma"]
        _beta(beta, nonzero=True)
        _positive("rho", rho)
        _positive("sigma", sigma)
        h = 1e-3 * min(1.0, 0.5 * (beta + 1.0))
        slope, slope_error = _richardson_derivative(lambda b: j_closed(b, rho, sigma), beta, h)
        d_alpha = beta * (beta + 2.0) / (2.0 * (beta + 1.0) ** 2)
        scale = -sigma ** 2 / (rho ** 3 * d_alpha)
        value, error = scale * slope, abs(scale) * slope_error

    else:
        raise DomainError(f"No quadrature oracle for {name}")

    logger.debug(f"Quadrature {name} {p}: {value:.12g} (error estimate {error:.2e})")
    return _checked(name, value, error, rel_tolerance)


@dataclass
class OracleCheck:
    """Outcome of one deterministic agreement check."""
    name: str
    formula_id: str
    params: Dict[str, float]
    expected: float
    computed: float
    tolerance: float
    error: Optional[str] = None

    @property
    def rel_error(self) -> float:
        if self.error is not None:
            return math.inf
        return abs(self.computed - self.expected) / max(abs(self.expected), 1e-300)

    @property
    def passed(self) -> bool:
        return self.error is None and self.rel_error <= self.tolerance


def _agreement(name, formula_id, params, expected_fn, computed_fn, tolerance) -> OracleCheck:
    try:
        expected = expected_fn()
        computed = computed_fn()
    except (QuadratureFailure, DomainError) as e:
        logger.warning(f"Oracle check {name} {params} failed: {e}")
        return OracleCheck(name, formula_id, dict(params), math.nan, math.nan, tolerance, str(e))
    return OracleCheck(name, formula_id, dict(params), expected, computed, tolerance)


def run_oracle_suite(
    consistency_betas: Sequence[float] = (-0.5, 0.5, 1.0, 2.0, 5.0),
    gauss_grid: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0),
    formula_params: Optional[Sequence[Tuple[str, Mapping[str, float]]]] = None,
    epsrel: float = DEFAULT_EPSREL,
    rel_tolerance: float = DEFAULT_TOLERANCE,
    consistency_tolerance: float = 1e-12,
) -> List[OracleCheck]:
    """
    Run every deterministic check among the closed forms and the quadratures.

    Args:
        consistency_betas: Indices for lemma1_rhs(a(beta)) = i2_closed(beta)
        gauss_grid: Axis values; Ia, Ib, Ic are checked on its square
        formula_params: (formula_id, params) pairs for the remaining formulas
        epsrel: Relative accuracy requested from quad
        rel_tolerance: Accepted closed-form/quadrature disagreement
        consistency_tolerance: Accepted disagreement in the consistency chain

    Returns:
        One OracleCheck per comparison
    """
    checks: List[OracleCheck] = []

    for beta in consistency_betas:
        checks.append(_agreement(
            "consistency", FormulaId.I2.value, {"beta": beta},
            lambda b=beta: i2_closed(b),
            lambda b=beta: lemma1_rhs(a_of_beta(b)),
            consistency_tolerance,
        ))

    for a in gauss_grid:
        for b in gauss_grid:
            for formula_id in (FormulaId.IA, FormulaId.IB, FormulaId.IC):
                params = {"a": a, "b": b}
                checks.append(_agreement(
                    "gauss", formula_id.value, params,
                    lambda f=formula_id, p=params: closed_form_value(f, p).value,
                    lambda f=formula_id, p=params: quadrature_oracle(f, p, epsrel, rel_tolerance),
                    rel_tolerance,
                ))

    for beta in consistency_betas:
        params = {"beta": beta, "sigma": 1.0}
        checks.append(_agreement(
            "i2_assembly", FormulaId.I2.value, params,
            lambda p=params: i2_closed(p["beta"]),
            lambda p=params: quadrature_oracle(FormulaId.I2, p, epsrel, rel_tolerance),
            rel_tolerance,
        ))

    if formula_params is None:
        formula_params = DEFAULT_FORMULA_PARAMS
    for formula_id, params in formula_params:
        checks.append(_agreement(
            "closed_vs_quadrature", FormulaId(formula_id).value, params,
            lambda f=formula_id, p=params: closed_form_value(f, p).value,
            lambda f=formula_id, p=params: quadrature_oracle(f, p, epsrel, rel_tolerance),
            rel_tolerance,
        ))

    failed = [c for c in checks if not c.passed]
    logger.info(f"Oracle suite: {len(checks) - len(failed)}/{len(checks)} checks passed")
    for check in failed:
        logger.warning(f"  {check.name} {check.formula_id} {check.params}: rel error {check.rel_error:.3e}")
    return checks


DEFAULT_FORMULA_PARAMS: List[Tuple[str, Dict[str, float]]] = [
    ("Lemma1", {"a": 0.5}),
    ("Lemma1", {"a": 1.0, "sigma": 2.0}),
    ("Lemma3_J", {"beta": 1.0, "rho": 1.0, "sigma": 1.0}),
    ("Lemma3_J", {"beta": -0.5, "rho": 0.7, "sigma": 1.3}),
    ("Lemma4", {"beta": 1.0, "rho": 1.0, "sigma": 1.0}),
    ("Lemma4", {"beta": -0.5, "rho": 2.0, "sigma": 0.5}),
    ("Theorem2", {"a": 1.0, "theta": 4.0}),
    ("Theorem2", {"a": 0.5, "theta": 0.5, "sigma": 1.5}),
    ("DampedMass", {"a": 1.0, "sigma": 1.0}),
    ("DampedMass", {"a": 0.3, "sigma": 2.0}),
]
