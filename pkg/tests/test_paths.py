"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Unit tests for grids, paths, samplers, interpolation and CSV I/O
"""
import math

import numpy as np
import pytest
from scipy import stats

from src.errors import DomainError, GridError
from src.paths.csv_io import read_path_csv, write_path_csv
from src.paths.grid import Dispersion, GridSpec, Path, as_sigma, cumulative_integral, integrate
from src.paths.interpolation import hermite, linear_on_grid, monotone_hermite, pchip, pchip_slopes
from src.paths.sampling import (
    RngStream,
    bridge_survival,
    grid_positive,
    sample_bridge,
    sample_brownian,
    sample_w0,
)


def test_grid_spec_nodes():
    """Test uniform nodes include both endpoints."""
    grid = GridSpec(5)
    assert grid.dt == 0.25
    assert np.allclose(grid.nodes, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert grid.refine().n_points == 9
    assert grid.index_of(0.5) == 2


def test_grid_spec_rejects_small_grids():
    """Test grids need at least three nodes."""
    with pytest.raises(GridError):
        GridSpec(2)
    with pytest.raises(GridError):
        GridSpec(10.5)


def test_path_length_must_match_grid():
    """Test a path with the wrong number of values is rejected."""
    with pytest.raises(GridError):
        Path(GridSpec(5), np.ones(4))


def test_path_values_read_only():
    """Test stored values cannot be modified in place."""
    p = Path.constant(GridSpec(5), 2.0)
    with pytest.raises(ValueError):
        p.values[0] = 1.0


def test_dispersion_validation():
    """Test non-positive dispersions are domain errors."""
    assert as_sigma(Dispersion(2.0)) == 2.0
    with pytest.raises(DomainError):
        as_sigma(0.0)
    with pytest.raises(DomainError):
        Dispersion(-1.0)


def test_integrate_trapezoid_order(grid):
    """Test the trapezoid rule error on t^2 is O(dt^2)."""
    p = Path.from_function(grid, lambda t: t ** 2)
    assert abs(integrate(p) - 1.0 / 3.0) <= grid.dt ** 2


def test_cumulative_integral_starts_at_zero(grid):
    """Test the running integral of 1 is t."""
    running = cumulative_integral(np.ones(grid.n_points), grid.dt)
    assert running[0] == 0.0
    assert np.allclose(running, grid.nodes, atol=1e-12)


def test_sample_w0_pinned_and_reproducible(grid):
    """Test W0 paths start at 0 and equal stream keys give equal paths."""
    first = sample_w0(1.0, grid, RngStream(3, 1), size=4)
    second = sample_w0(1.0, grid, RngStream(3, 1), size=4)
    other = sample_w0(1.0, grid, RngStream(3, 2), size=4)
    assert first.values.shape == (4, grid.n_points)
    assert np.all(first.start == 0.0)
    assert np.array_equal(first.values, second.values)
    assert not np.array_equal(first.values, other.values)


def test_sample_w0_endpoint_distribution(coarse_grid):
    """Test x(1) is N(0, sigma^2) (Kolmogorov-Smirnov)."""
    sigma = 2.0
    paths = sample_w0(sigma, coarse_grid, RngStream(11, 0), size=4000)
    result = stats.kstest(paths.end / sigma, 'norm')
    assert result.pvalue > 1e-3


def test_sample_w0_increments_normal(coarse_grid):
    """Test W0 increments are N(0, sigma^2 dt) (Kolmogorov-Smirnov)."""
    sigma = 0.7
    paths = sample_w0(sigma, coarse_grid, RngStream(12, 0), size=200)
    increments = np.diff(paths.values, axis=-1) / (sigma * math.sqrt(coarse_grid.dt))
    result = stats.kstest(increments.ravel(), "norm")
    assert result.pvalue > 1e-3


def test_sample_bridge_marginal_normal(coarse_grid):
    """Test the bridge at t = 1/4 is N(start + (end - start) t, sigma^2 t (1 - t))."""
    sigma, start, end, t = 1.5, 1.0, 3.0, 0.25
    paths = sample_bridge(sigma, coarse_grid, start, end, RngStream(13, 0), size=4000)
    column = paths.values[:, coarse_grid.index_of(t)]
    scaled = (column - start - (end - start) * t) / (sigma * math.sqrt(t * (1.0 - t)))
    result = stats.kstest(scaled, "norm")
    assert result.pvalue > 1e-3


def test_sample_bridge_increments_normal(coarse_grid):
    """Test one bridge increment is N((end - start) dt, sigma^2 dt (1 - dt))."""
    sigma, start, end = 1.0, 0.0, 2.0
    dt = coarse_grid.dt
    paths = sample_bridge(sigma, coarse_grid, start, end, RngStream(14, 0), size=4000)
    increment = paths.values[:, 41] - paths.values[:, 40]
    scaled = (increment - (end - start) * dt) / (sigma * math.sqrt(dt * (1.0 - dt)))
    result = stats.kstest(scaled, "norm")
    assert result.pvalue > 1e-3


def test_sample_brownian_start(coarse_grid):
    """Test free paths start at the given points."""
    starts = np.array([0.5, 1.0, 2.0])
    paths = sample_brownian(1.0, coarse_grid, starts, RngStream(5, 0))
    assert np.array_equal(paths.start, starts)


def test_sample_bridge_endpoints_and_variance(coarse_grid):
    """Test bridge endpoints are exact and the midpoint variance is sigma^2/4."""
    paths = sample_bridge(1.0, coarse_grid, 1.0, 3.0, RngStream(8, 0), size=20000)
    assert np.all(paths.start == 1.0)
    assert np.all(paths.end == 3.0)
    mid = paths.values[:, coarse_grid.index_of(0.5)]
    assert abs(mid.mean() - 2.0) < 0.02
    assert abs(mid.var() - 0.25) < 0.0125


def test_bridge_survival_two_intervals():
    """Test the per-interval survival product."""
    values = np.array([1.0, 1.0, 1.0])
    expected = (1.0 - math.exp(-4.0)) ** 2
    assert abs(bridge_survival(values, 1.0, 0.5) - expected) < 1e-15


def test_bridge_survival_zero_when_grid_not_positive():
    """Test a non-positive node kills the path."""
    values = np.array([[1.0, -0.1, 1.0], [1.0, 2.0, 1.0]])
    survival = bridge_survival(values, 1.0, 0.5)
    assert survival[0] == 0.0
    assert survival[1] > 0.0
    assert np.array_equal(grid_positive(values), [0.0, 1.0])


def test_hermite_reproduces_cubics():
    """Test Hermite interpolation with exact slopes is exact on cubics."""
    nodes = np.linspace(0.0, 1.0, 5)
    at = np.linspace(0.0, 1.0, 37)
    result = hermite(nodes, nodes ** 3 - nodes, 3 * nodes ** 2 - 1, at)
    assert np.allclose(result, at ** 3 - at, atol=1e-13)


def test_hermite_batched_rows():
    """Test each row of a batch is interpolated on its own nodes."""
    nodes = np.array([[0.0, 0.5, 1.0], [0.0, 0.25, 1.0]])
    values = 2.0 * nodes
    slopes = np.full_like(nodes, 2.0)
    result = hermite(nodes, values, slopes, np.array([0.3, 0.9]))
    assert np.allclose(result, [[0.6, 1.8], [0.6, 1.8]])


def test_monotone_hermite_stays_monotone():
    """Test clipped slopes keep steep increasing data monotone."""
    nodes = np.linspace(0.0, 1.0, 6)
    values = np.array([0.0, 0.01, 0.02, 0.9, 0.95, 1.0])
    slopes = np.full(6, 5.0)
    result = monotone_hermite(nodes, values, slopes, np.linspace(0.0, 1.0, 501))
    assert np.all(np.diff(result) >= -1e-15)


def test_pchip_keeps_positive_data_positive():
    """Test shape-preserving slopes never undershoot zero."""
    grid = GridSpec(9)
    values = np.array([1.0, 0.01, 1.0, 0.02, 3.0, 0.01, 0.5, 0.01, 2.0])
    at = np.linspace(0.0, 1.0, 801)
    result = hermite(grid.nodes, values, pchip_slopes(values, grid.dt), at)
    assert result.min() > 0.0


def test_pchip_rows_match_shared_points():
    """Test per-row evaluation points give the same values as shared ones."""
    grid = GridSpec(9)
    values = np.vstack([2.0 + np.cos(3.0 * grid.nodes), np.exp(grid.nodes)])
    at = np.linspace(0.0, 1.0, 41)
    shared = pchip(grid.nodes, values, at)
    rowwise = pchip(grid.nodes, values, np.tile(at, (2, 1)))
    assert shared.shape == (2, 41)
    assert np.allclose(shared, rowwise, atol=1e-12)
    assert np.allclose(shared[:, ::5], values, atol=1e-12)


def test_linear_on_grid_endpoints():
    """Test linear interpolation is exact at nodes and endpoints."""
    values = np.array([1.0, 3.0, 2.0])
    assert np.allclose(linear_on_grid(values, np.array([0.0, 0.25, 0.5, 1.0])), [1.0, 2.0, 3.0, 2.0])


def test_path_csv_round_trip(tmp_path, grid, smooth_positive):
    """Test a written path reads back unchanged."""
    p = Path.from_function(grid, smooth_positive)
    filepath = tmp_path / "path.csv"
    write_path_csv(filepath, p)
    loaded = read_path_csv(filepath)
    assert loaded.grid == grid
    assert np.array_equal(loaded.values, p.values)


def test_path_csv_rejects_bad_header(tmp_path):
    """Test a CSV without the t,value header is rejected."""
    filepath = tmp_path / "bad.csv"
    filepath.write_text("time,x\n0,1\n0.5,1\n1,1\n")
    with pytest.raises(GridError):
        read_path_csv(filepath)


def test_path_csv_rejects_non_uniform_grid(tmp_path):
    """Test a non-uniform t column is rejected."""
    filepath = tmp_path / "skewed.csv"
    filepath.write_text("t,value\n0,1\n0.4,1\n1,1\n")
    with pytest.raises(GridError):
        read_path_csv(filepath)
