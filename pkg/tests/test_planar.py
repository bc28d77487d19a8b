"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Unit tests for complex paths, planar polar coordinates and the planar measures
"""
import math

import numpy as np
import pytest

from src.diffeo.group import Diffeo, a_inv
from src.errors import BranchJump, DomainError, GridError, ProposalMismatch, VanishingPath
from src.montecarlo.engine import MCEstimate, compare
from src.montecarlo.estimate import EstimatorConfig
from src.montecarlo.functionals import get_functional
from src.montecarlo.proposals import Proposal
from src.paths.grid import GridSpec, Path
from src.paths.sampling import RngStream
from src.planar.coordinates import (
    ComplexPath,
    PolarTuple2D,
    l_inv,
    l_map,
    read_complex_csv,
    write_complex_csv,
)
from src.planar.measures import (
    Theorem4Sweep,
    sample_varsigma,
    sample_wc,
    theorem4_lhs,
    verify_theorem4,
)


def spiral(grid: GridSpec, turns: float = 0.3) -> ComplexPath:
    t = grid.nodes
    return ComplexPath.from_values(grid, (1.5 + 0.5 * t) * np.exp(1j * (0.3 + 2.0 * math.pi * turns * t)))


def test_l_inv_then_l_map(grid):
    """Test L(L^-1(z)) recovers z."""
    z = spiral(grid)
    back = l_map(l_inv(z))
    assert np.max(np.abs(back.values - z.values)) < 1e-3


def test_l_inv_initial_phase(grid):
    """Test alpha = Arg z(0)/(2 pi) and eta starts at 0."""
    polar = l_inv(spiral(grid))
    assert abs(float(polar.alpha) - 0.3 / (2.0 * math.pi)) < 1e-12
    assert polar.eta.values[0] == 0.0


def test_l_inv_rotation_moves_alpha_only(grid):
    """Test a rotation shifts alpha and leaves r, phi and eta unchanged."""
    z = spiral(grid)
    polar = l_inv(z)
    rotated = l_inv(z.rotated(1.0))
    assert abs(float(rotated.alpha) - float(polar.alpha) - 1.0 / (2.0 * math.pi)) < 1e-12
    assert np.allclose(rotated.eta.values, polar.eta.values, atol=1e-12)
    assert np.allclose(rotated.phi.phi_values, polar.phi.phi_values, atol=1e-12)


def test_l_map_modulus_independent_of_phase(grid):
    """Test |L(r, phi, alpha, eta)| does not depend on alpha and eta."""
    phi = Diffeo.identity(grid)
    eta = Path.from_function(grid, lambda t: 3.0 * t)
    first = l_map(PolarTuple2D(2.0, phi, 0.1, eta))
    second = l_map(PolarTuple2D(2.0, phi, 0.7, Path.constant(grid, 0.0)))
    assert np.allclose(first.modulus, second.modulus, atol=1e-12)
    assert np.allclose(first.modulus, 2.0, atol=1e-12)


def test_alpha_wraps_to_unit_interval(grid):
    """Test alpha is stored modulo 1."""
    polar = PolarTuple2D(1.0, Diffeo.identity(grid), 1.25, Path.constant(grid, 0.0))
    assert float(polar.alpha) == pytest.approx(0.25)


def test_polar_tuple_validation(grid):
    """Test r > 0 and eta(0) = 0 are required."""
    with pytest.raises(DomainError):
        PolarTuple2D(0.0, Diffeo.identity(grid), 0.0, Path.constant(grid, 0.0))
    with pytest.raises(DomainError):
        PolarTuple2D(1.0, Diffeo.identity(grid), 0.0, Path.constant(grid, 0.5))


def test_l_inv_vanishing_path(grid):
    """Test a path through the origin is rejected."""
    z = ComplexPath.from_values(grid, grid.nodes + 0j)
    with pytest.raises(VanishingPath):
        l_inv(z)


def test_l_inv_branch_jump():
    """Test an unresolvable winding raises BranchJump."""
    grid = GridSpec(33)
    z = ComplexPath.from_values(grid, np.exp(1j * 40.0 * math.pi * grid.nodes))
    with pytest.raises(BranchJump):
        l_inv(z)


def test_complex_path_shapes(grid):
    """Test re and im must share grid and shape."""
    with pytest.raises(GridError):
        ComplexPath(Path.constant(grid, 1.0), Path.constant(GridSpec(9), 1.0))


def test_complex_csv_round_trip(tmp_path, grid):
    """Test a written complex path reads back unchanged."""
    z = spiral(grid)
    filepath = tmp_path / "z.csv"
    write_complex_csv(filepath, z)
    loaded = read_complex_csv(filepath)
    assert np.array_equal(loaded.values, z.values)


def test_sample_wc_shapes(coarse_grid):
    """Test the planar sampler returns weighted batches."""
    sample = sample_wc(1.0, coarse_grid, Proposal("normal", 0.7), RngStream(1, 0), 64)
    assert sample.paths.values.shape == (64, coarse_grid.n_points)
    assert np.all(sample.weights > 0)


def test_sample_varsigma_weights(coarse_grid):
    """Test polar-form samples carry finite non-negative weights and radii."""
    sample = sample_varsigma(1.0, coarse_grid, Proposal("rayleigh", 1.0), RngStream(2, 0), 256)
    assert sample.radii.shape == (256,)
    assert np.all(np.isfinite(sample.weights))
    assert np.all(sample.weights >= 0)
    assert np.all(np.isfinite(sample.paths.values))


def test_sample_varsigma_zero_weights_flat_charts():
    """Test small radii at full chunk size are zero-weighted instead of raising."""
    broken = 0
    for stream_seed in range(4):
        sample = sample_varsigma(1.0, GridSpec(33), Proposal("rayleigh", 1.0), RngStream(stream_seed, 0), 4096)
        assert np.all(np.isfinite(sample.paths.values))
        assert np.all(np.isfinite(sample.weights))
        assert np.count_nonzero(sample.weights == 0.0) >= sample.n_broken
        broken += sample.n_broken
    assert broken > 0


def test_l_map_rejects_flat_phi():
    """Test l_map raises a domain error when phi cannot be inverted."""
    grid = GridSpec(33)
    xi = Path(grid, 2000.0 * np.sin(3.0 * math.pi * grid.nodes))
    polar = PolarTuple2D(0.01, a_inv(xi), 0.0, Path(grid, np.zeros(33)))
    with pytest.raises(DomainError):
        l_map(polar)


def test_sample_varsigma_requires_positive_radius(coarse_grid):
    """Test r needs a proposal supported on (0, inf)."""
    with pytest.raises(ProposalMismatch):
        sample_varsigma(1.0, coarse_grid, Proposal("normal"), RngStream(3, 0), 8)


def test_theorem4_lhs_mass(seed):
    """Test the damped planar mass is pi sigma^2/a^2 with a matched proposal."""
    cfg = EstimatorConfig(n_samples=2000, grid=GridSpec(33), seed=seed)
    left = theorem4_lhs(cfg, [get_functional("complex", "one")])[0]
    assert math.isclose(left.mean, math.pi, rel_tol=1e-12)
    assert left.std_err < 1e-12


def test_theorem4_sweep_selection():
    """Test the sweep selects the only agreeing combination."""
    left = MCEstimate(1.0, 0.01, 100)
    sweep = Theorem4Sweep(["one"], [left], threshold=3.0)
    sweep.rights[(0.0, 1.0)] = [MCEstimate(1.0 / (2.0 * math.pi), 0.01, 100)]
    sweep.rights[(0.0, 2.0 * math.pi)] = [MCEstimate(1.0, 0.01, 100)]
    assert sweep.passing == [(0.0, 2.0 * math.pi)]
    assert sweep.selected == (0.0, 2.0 * math.pi)
    sweep.rights[(0.125, 2.0 * math.pi)] = [MCEstimate(1.01, 0.01, 100)]
    assert sweep.selected is None


def test_theorem4_full_turn_weight(seed):
    """Test the polar form with a full-turn angle measure matches the planar mass."""
    cfg = EstimatorConfig(n_samples=20000, grid=GridSpec(33), seed=seed, chunk_size=4096)
    left, right = verify_theorem4(cfg, get_functional("complex", "one"), 0.0, 2.0 * math.pi)
    assert math.isclose(left.mean, math.pi, rel_tol=1e-12)
    assert abs(compare(left, right)) <= 4.0


def test_theorem4_phase_functional(seed):
    """Test the polar form reproduces the winding law through cos(arg z(1) - arg z(0))."""
    cfg = EstimatorConfig(n_samples=20000, grid=GridSpec(33), seed=seed, chunk_size=4096)
    left, right = verify_theorem4(cfg, get_functional("complex", "cos_phase"), 0.0, 2.0 * math.pi)
    assert 0.0 < left.mean < math.pi
    assert abs(compare(left, right)) <= 4.0
