"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Planar Wiener measure, its polar form, and the two-sided comparison between them
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.diffeo.group import a_inv
from src.montecarlo.engine import MCEstimate, compare, run_chunks, summarize
from src.montecarlo.estimate import EstimatorConfig, stream_base
from src.montecarlo.functionals import TestFunctional
from src.montecarlo.proposals import Proposal
from src.paths.grid import GridSpec, Path, SigmaLike, as_sigma
from src.paths.sampling import RngLike, as_generator, standard_w0
from src.planar.coordinates import ComplexPath, PolarTuple2D, l_map_values

logger = logging.getLogger(__name__)

FULL_TURN = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class WeightedComplexPaths:
    """A batch of complex paths with importance weights against the target measure."""
    paths: ComplexPath
    weights: np.ndarray
    radii: Optional[np.ndarray] = None
    n_broken: int = 0


def sample_wc(
    sigma: SigmaLike,
    grid: GridSpec,
    q0_proposal: Proposal,
    rng: RngLike,
    size: int,
) -> WeightedComplexPaths:
    """
    Sample the planar Wiener measure w^C_sigma = W_sigma(dx) W_sigma(dy).

    Each start point is drawn from q0_proposal (any support) and weighted
    by the inverse proposal density, since the start is Lebesgue-distributed.

    Args:
        sigma: Dispersion of each component
        grid: Sampling grid
        q0_proposal: Proposal for x(0) and y(0)
        rng: Stream key or generator
        size: Number of paths

    Returns:
        WeightedComplexPaths
    """
    s = as_sigma(sigma)
    gen = as_generator(rng)
    x0 = q0_proposal.sample(gen, size)
    y0 = q0_proposal.sample(gen, size)
    re = s * standard_w0(grid, gen, size) + x0[:, None]
    im = s * standard_w0(grid, gen, size) + y0[:, None]
    weights = np.exp(-q0_proposal.logpdf(x0) - q0_proposal.logpdf(y0))
    return WeightedComplexPaths(ComplexPath(Path(grid, re), Path(grid, im)), weights)


def sample_varsigma(
    sigma: SigmaLike,
    grid: GridSpec,
    r_proposal: Proposal,
    rng: RngLike,
    size: int,
    radial_kappa: float = 0.0,
    angle_measure: float = FULL_TURN,
) -> WeightedComplexPaths:
    """
    Sample the polar form of the planar measure.

    Draws r from r_proposal, phi ~ mu_{2 sigma/r}, eta ~ W0_{sigma/r} and
    alpha uniform on [0, 1), and returns z = l_map(r, phi, alpha, eta) with weight
    angle_measure * r * exp(-radial_kappa sigma^2/r^2) * phi'(0) phi'(1) / pdf(r).

    Args:
        sigma: Dispersion
        grid: Sampling grid
        r_proposal: Proposal for r, support (0, inf)
        rng: Stream key or generator
        size: Number of paths
        radial_kappa: Constant of the radial factor
        angle_measure: Total mass of the alpha circle

    Returns:
        WeightedComplexPaths
    """
    r_proposal.require_positive_support("r proposal")
    s = as_sigma(sigma)
    gen = as_generator(rng)
    r = r_proposal.sample(gen, size)
    xi = (2.0 * s / r)[:, None] * standard_w0(grid, gen, size)
    eta = (s / r)[:, None] * standard_w0(grid, gen, size)
    alpha = gen.random(size)
    phi = a_inv(Path(grid, xi))

    log_w = (math.log(angle_measure) + np.log(r) - radial_kappa * s * s / (r * r)
             + phi.log_dphi0 + phi.log_dphi1 - r_proposal.logpdf(r))
    with np.errstate(over='ignore', invalid='ignore'):
        weights = np.exp(log_w)
    values = l_map_values(PolarTuple2D(r, phi, alpha, Path(grid, eta)))
    # small radii give a chart too steep for phi to be inverted on the grid
    broken = ~(np.all(np.isfinite(values), axis=-1) & np.isfinite(weights))
    n_broken = int(broken.sum())
    if n_broken:
        logger.debug(f"sample_varsigma: {n_broken} unresolvable paths zero-weighted")
        values = np.where(broken[:, None], 1.0, values)
        weights = np.where(broken, 0.0, weights)
    return WeightedComplexPaths(ComplexPath.from_values(grid, values), weights, r, n_broken)


def _damping(z: ComplexPath, a: float, s2: float) -> np.ndarray:
    return np.exp(-a * a * (z.re.values[..., 0] ** 2 + z.im.values[..., 0] ** 2) / s2)


def _proposals(cfg: EstimatorConfig, r_proposal: Optional[Proposal]) -> Tuple[Proposal, Proposal]:
    sigma = as_sigma(cfg.sigma)
    q0 = Proposal("normal", sigma / (cfg.a * math.sqrt(2.0)))
    r = r_proposal or cfg.proposal("r", sigma / cfg.a)
    return q0, r


def theorem4_lhs(cfg: EstimatorConfig, functionals: Sequence[TestFunctional]) -> List[MCEstimate]:
    """E over w^C_sigma of F(z) exp(-a^2 |z(0)|^2/sigma^2), one estimate per F."""
    q0, _ = _proposals(cfg, None)

    def sampler(gen, m):
        sample = sample_wc(cfg.sigma, cfg.grid, q0, gen, m)
        w = sample.weights * _damping(sample.paths, cfg.a, cfg.s2)
        return np.stack([w * f(sample.paths) for f in functionals]), w

    contributions, weights = run_chunks(sampler, cfg.n_samples, cfg.seed, cfg.chunk_size,
                                        cfg.workers, stream_base("planar_wc"))
    return [summarize(row, weights, None, cfg.min_ess_fraction, f"theorem4_lhs[{f.id}]")
            for row, f in zip(contributions, functionals)]


def theorem4_rhs(
    cfg: EstimatorConfig,
    functionals: Sequence[TestFunctional],
    radial_kappas: Sequence[float] = (0.0,),
    angle_measure: float = FULL_TURN,
    r_proposal: Optional[Proposal] = None,
) -> Dict[float, List[MCEstimate]]:
    """
    E over the polar form of F(z) exp(-a^2 |z(0)|^2/sigma^2) for each radial constant.

    All constants share one set of draws; only the weights differ.

    Returns:
        {radial_kappa: [estimate per functional]}
    """
    _, r_prop = _proposals(cfg, r_proposal)
    s2 = cfg.s2
    k = len(functionals)

    def sampler(gen, m):
        sample = sample_varsigma(cfg.sigma, cfg.grid, r_prop, gen, m, 0.0, angle_measure)
        w = sample.weights * _damping(sample.paths, cfg.a, s2)
        values = np.stack([f(sample.paths) for f in functionals])
        rows = [w * np.exp(-kappa * s2 / sample.radii ** 2) * values for kappa in radial_kappas]
        return np.concatenate(rows), w

    contributions, weights = run_chunks(sampler, cfg.n_samples, cfg.seed, cfg.chunk_size,
                                        cfg.workers, stream_base("planar_varsigma"))
    results: Dict[float, List[MCEstimate]] = {}
    for i, kappa in enumerate(radial_kappas):
        block = contributions[i * k:(i + 1) * k]
        results[kappa] = [summarize(row, weights, None, cfg.min_ess_fraction,
                                    f"theorem4_rhs[{f.id}, kappa={kappa}]")
                          for row, f in zip(block, functionals)]
    return results


def verify_theorem4(
    cfg: EstimatorConfig,
    functional: TestFunctional,
    radial_kappa: float = 0.0,
    angle_measure: float = FULL_TURN,
    r_proposal: Optional[Proposal] = None,
) -> Tuple[MCEstimate, MCEstimate]:
    """
    Both sides of the planar decomposition for one bounded functional.

    The damping exp(-a^2 |z(0)|^2/sigma^2) is applied on both sides so that
    the sigma-finite measures give finite integrals.

    Returns:
        (left, right)
    """
    left = theorem4_lhs(cfg, [functional])[0]
    right = theorem4_rhs(cfg, [functional], (radial_kappa,), angle_measure, r_proposal)[radial_kappa][0]
    logger.info(f"Theorem 4 [{functional.id}, kappa={radial_kappa}, angle={angle_measure:.4f}]: "
                f"{left.mean:.6g} vs {right.mean:.6g}, z={compare(left, right):.2f}")
    return left, right


@dataclass
class Theorem4Sweep:
    """Two-sided planar comparison over (radial constant, angle measure) combinations."""
    functional_ids: List[str]
    lefts: List[MCEstimate]
    rights: Dict[Tuple[float, float], List[MCEstimate]] = field(default_factory=dict)
    threshold: float = 3.0

    def z_scores(self, combination: Tuple[float, float]) -> List[float]:
        return [compare(l, r) for l, r in zip(self.lefts, self.rights[combination])]

    def passes(self, combination: Tuple[float, float]) -> bool:
        return all(abs(z) <= self.threshold for z in self.z_scores(combination))

    @property
    def passing(self) -> List[Tuple[float, float]]:
        return [c for c in self.rights if self.passes(c)]

    @property
    def selected(self) -> Optional[Tuple[float, float]]:
        passing = self.passing
        return passing[0] if len(passing) == 1 else None


def theorem4_sweep(
    cfg: EstimatorConfig,
    functionals: Sequence[TestFunctional],
    radial_kappas: Sequence[float] = (0.0, 0.125, 0.25),
    angle_measures: Sequence[float] = (1.0, FULL_TURN),
    threshold: float = 3.0,
) -> Theorem4Sweep:
    """
    Compare the planar measure with its polar form for every combination.

    The angle measure only scales the right side, so one right-side run
    per radial constant serves all angle measures.

    Returns:
        Theorem4Sweep; selected is the unique combination passing for all functionals
    """
    lefts = theorem4_lhs(cfg, functionals)
    unit = theorem4_rhs(cfg, functionals, radial_kappas, 1.0)
    sweep = Theorem4Sweep([f.id for f in functionals], lefts, threshold=threshold)
    for kappa in radial_kappas:
        for measure in angle_measures:
            sweep.rights[(kappa, measure)] = [
                MCEstimate(e.mean * measure, e.std_err * measure, e.n, ess=e.ess) for e in unit[kappa]
            ]
            logger.info(f"Theorem 4 kappa={kappa}, angle={measure:.4f}: "
                        f"z={[round(z, 2) for z in sweep.z_scores((kappa, measure))]}")
    logger.info(f"Passing planar combinations: {sweep.passing}")
    return sweep
