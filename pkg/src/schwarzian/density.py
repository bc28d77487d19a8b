"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Radon-Nikodym densities of left translates of mu_sigma
"""
import numpy as np
from scipy.integrate import trapezoid

from src.diffeo.group import Diffeo
from src.errors import DomainError
from src.paths.grid import SigmaLike, as_sigma
from src.schwarzian.outer_map import SmoothOuterMap, schwarzian_of


def log_radon_nikodym(g: SmoothOuterMap, phi: Diffeo, sigma: SigmaLike):
    """Logarithm of radon_nikodym, computed without overflow."""
    s2 = as_sigma(sigma) ** 2
    d0 = float(g.df(0.0))
    d1 = float(g.df(1.0))
    r0 = float(g.d2f(0.0)) / d0
    r1 = float(g.d2f(1.0)) / d1
    exponent = (r0 * phi.dphi0 - r1 * phi.dphi1) / s2
    if not g.is_mobius:
        weights = schwarzian_of(g, phi.phi_values) * phi.derivative_values() ** 2
        exponent = exponent + trapezoid(weights, dx=phi.grid.dt, axis=-1) / s2
    return -0.5 * np.log(d0 * d1) + exponent


def radon_nikodym(g: SmoothOuterMap, phi: Diffeo, sigma: SigmaLike):
    """
    Density p_g(phi) of the translate of mu_sigma by g.

    p_g(phi) = (g'(0) g'(1))^{-1/2}
               exp{ [g''(0)/g'(0) phi'(0) - g''(1)/g'(1) phi'(1)] / sigma^2
                    + int_0^1 Sch{g, phi(t)} phi'(t)^2 dt / sigma^2 }

    The Schwarzian term vanishes identically for Mobius maps and is skipped.

    Args:
        g: Outer map
        phi: Diffeomorphism (single or batched)
        sigma: Dispersion

    Returns:
        Positive density value(s)
    """
    return np.exp(log_radon_nikodym(g, phi, sigma))


def log_p_mobius_endpoints(beta: float, dphi0, dphi1, sigma: SigmaLike):
    """(2 beta/sigma^2)(-phi'(0) + phi'(1)/(beta+1)) from endpoint derivatives."""
    if not beta > -1.0:
        raise DomainError(f"Mobius index must satisfy beta > -1, got {beta}")
    s2 = as_sigma(sigma) ** 2
    return (2.0 * beta / s2) * (-np.asarray(dphi0) + np.asarray(dphi1) / (beta + 1.0))


def p_mobius(beta: float, phi: Diffeo, sigma: SigmaLike):
    """
    Closed-form density for g_beta: exp{(2 beta/sigma^2)(-phi'(0) + phi'(1)/(beta+1))}.
    """
    return np.exp(log_p_mobius_endpoints(beta, phi.dphi0, phi.dphi1, sigma))
