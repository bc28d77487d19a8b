"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Closed-form right-hand sides of the decomposition identities
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Tuple

from src.errors import DomainError

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
BETA_ZERO_BAND = 1e-8


class FormulaId(str, Enum):
    LEMMA1 = "Lemma1"
    LEMMA3_J = "Lemma3_J"
    LEMMA4 = "Lemma4"
    I2 = "I2"
    IA = "Ia"
    IB = "Ib"
    IC = "Ic"
    THEOREM2 = "Theorem2"
    DAMPED_MASS = "DampedMass"


@dataclass(frozen=True)
class ClosedFormValue:
    """A closed-form value tagged with its formula and parameters."""
    value: float
    formula_id: FormulaId
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"{self.formula_id.value} is not finite at {self.params}")


def _positive(name: str, value: float):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive, got {value}")


def _beta(beta: float, nonzero: bool = False):
    if not (math.isfinite(beta) and beta > -1.0):
        raise DomainError(f"beta must satisfy beta > -1, got {beta}")
    if nonzero and beta == 0.0:
        raise DomainError("beta = 0 is excluded")


def a_of_beta(beta: float) -> float:
    """Damping coefficient a with a^2 = beta^2 / (2 (beta+1))."""
    _beta(beta)
    return abs(beta) / math.sqrt(2.0 * (beta + 1.0))


def alpha_of_beta(beta: float) -> float:
    """alpha = beta^2 / (2 (beta+1))."""
    return a_of_beta(beta) ** 2


def conjugate_beta(beta: float) -> float:
    """The other root of a(beta) = a: -beta/(beta+1), the index of g_beta^{-1}."""
    _beta(beta)
    return -beta / (beta + 1.0)


def lemma1_rhs(a: float) -> float:
    """(1/(2 sqrt 2)) (1/a - 1/sqrt(a^2 + 2))."""
    _positive("a", a)
    return (1.0 / a - 1.0 / math.sqrt(a * a + 2.0)) / (2.0 * math.sqrt(2.0))


def theorem2_lhs_closed(a: float, theta: float) -> float:
    """
    Damped endpoint-ratio mass: integral of delta(x(1) - theta x(0))
    exp(-a^2 x(0)^2/sigma^2) over positive paths. Independent of sigma;
    equals lemma1_rhs(a) at theta = 1.
    """
    _positive("a", a)
    _positive("theta", theta)
    near = math.sqrt(a * a + 0.5 * (theta - 1.0) ** 2)
    far = math.sqrt(a * a + 0.5 * (theta + 1.0) ** 2)
    return (1.0 / near - 1.0 / far) / (2.0 * math.sqrt(2.0))


def damped_mass_closed(a: float, sigma: float) -> float:
    """
    int exp(-a^2 x(0)^2/sigma^2) w_sigma(dx) = sigma/(a sqrt(pi)) arctan(1/(a sqrt 2)).
    """
    _positive("a", a)
    _positive("sigma", sigma)
    return sigma / (a * math.sqrt(math.pi)) * math.atan(1.0 / (a * math.sqrt(2.0)))


def j_closed(beta: float, rho: float, sigma: float) -> float:
    """J(beta^2/(2(beta+1))) = rho/(sqrt(2 pi) sigma) exp(-(rho^2/(2 sigma^2)) ln^2(beta+1))."""
    _beta(beta)
    _positive("rho", rho)
    _positive("sigma", sigma)
    log_b = math.log1p(beta)
    return rho / (SQRT_2PI * sigma) * math.exp(-(rho * rho) / (2.0 * sigma * sigma) * log_b * log_b)


def _lemma4_prefactor(beta: float) -> float:
    # (beta+1) ln(beta+1) / (beta (beta+2)) -> 1/2 as beta -> 0
    if abs(beta) < BETA_ZERO_BAND:
        return 0.5 - beta * beta / 12.0
    return (beta + 1.0) * math.log1p(beta) / (beta * (beta + 2.0))


def lemma4_rhs(beta: float, rho: float, sigma: float) -> float:
    """
    sqrt(2/pi) (beta+1) ln(beta+1) / (sigma beta (beta+2))
    exp(-(rho^2/(2 sigma^2)) ln^2(beta+1)); the beta -> 0 limit is sqrt(2/pi)/(2 sigma).
    """
    _beta(beta)
    _positive("rho", rho)
    _positive("sigma", sigma)
    log_b = math.log1p(beta)
    return (math.sqrt(2.0 / math.pi) * _lemma4_prefactor(beta) / sigma
            * math.exp(-(rho * rho) / (2.0 * sigma * sigma) * log_b * log_b))


def i2_closed(beta: float) -> float:
    """
    (beta+1) exp(-|ln(beta+1)|/2) / |beta (beta+2)|.

    Equals sqrt(beta+1)/(beta(beta+2)) for beta > 0 and takes the value of
    the conjugate index -beta/(beta+1) for beta < 0.
    """
    _beta(beta, nonzero=True)
    return (beta + 1.0) * math.exp(-0.5 * abs(math.log1p(beta))) / abs(beta * (beta + 2.0))


def gauss_integrals(a: float, b: float) -> Tuple[float, float, float]:
    """
    (Ia, Ib, Ic) for the integrands (1/r^2 + a), 1/r^2 and 1 against
    exp(-(b^2/2)(1/r^2 + a^2 r^2)) on (0, inf).
    """
    _positive("a", a)
    _positive("b", b)
    common = SQRT_2PI * math.exp(-a * b * b)
    return common / b, common / (2.0 * b), common / (2.0 * a * b)


def closed_form_value(formula_id: FormulaId, params: Mapping[str, float]) -> ClosedFormValue:
    """
    Dispatch to the closed form of formula_id.

    Args:
        formula_id: Which identity
        params: Named parameters (a, b, beta, rho, sigma, theta as applicable)

    Returns:
        ClosedFormValue
    """
    formula_id = FormulaId(formula_id)
    p = dict(params)
    if formula_id is FormulaId.LEMMA1:
        value = lemma1_rhs(p["a"])
    elif formula_id is FormulaId.LEMMA3_J:
        value = j_closed(p["beta"], p["rho"], p["sigma"])
    elif formula_id is FormulaId.LEMMA4:
        value = lemma4_rhs(p["beta"], p["rho"], p["sigma"])
    elif formula_id is FormulaId.I2:
        value = i2_closed(p["beta"])
    elif formula_id in (FormulaId.IA, FormulaId.IB, FormulaId.IC):
        ia, ib, ic = gauss_integrals(p["a"], p["b"])
        value = {FormulaId.IA: ia, FormulaId.IB: ib, FormulaId.IC: ic}[formula_id]
    elif formula_id is FormulaId.THEOREM2:
        value = theorem2_lhs_closed(p["a"], p["theta"])
    else:
        value = damped_mass_closed(p["a"], p["sigma"])
    return ClosedFormValue(value, formula_id, p)
