"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Batched piecewise-cubic Hermite interpolation

All routines act along the last axis and broadcast over leading batch axes,
so one call interpolates a whole chunk of Monte Carlo paths. Data on the
shared grid is handed to scipy; the evaluators here cover nodes that differ
per row, such as the phi^{-1} nodes phi(t_i).
"""
import numpy as np
from scipy.interpolate import PchipInterpolator


def _flatten_rows(nodes, values, slopes, at):
    nodes, values, slopes = np.broadcast_arrays(
        np.asarray(nodes, dtype=float),
        np.asarray(values, dtype=float),
        np.asarray(slopes, dtype=float),
    )
    at = np.asarray(at, dtype=float)
    if at.ndim == 0:
        at = at[None]
    batch = np.broadcast_shapes(nodes.shape[:-1], at.shape[:-1])
    n = nodes.shape[-1]
    m = at.shape[-1]

    def rows(arr, width):
        return np.broadcast_to(arr, batch + (width,)).reshape(-1, width)

    return (rows(nodes, n), rows(values, n), rows(slopes, n), rows(at, m)), batch


def _bracket(nodes: np.ndarray, at: np.ndarray) -> np.ndarray:
    """
    Row-wise interval index k with nodes[k] <= at < nodes[k+1].

    Rows are shifted apart so a single searchsorted on the flattened,
    globally increasing array brackets every row at once.
    """
    n_rows, n = nodes.shape
    low = min(nodes.min(), at.min())
    width = max(nodes.max(), at.max()) - low + 1.0
    offset = width * np.arange(n_rows)[:, None]
    flat = (nodes - low + offset).ravel()
    query = (at - low + offset).ravel()
    k = np.searchsorted(flat, query, side='right').reshape(at.shape) - 1
    k -= n * np.arange(n_rows)[:, None]
    return np.clip(k, 0, n - 2)


def hermite(nodes, values, slopes, at) -> np.ndarray:
    """
    Evaluate the cubic Hermite interpolant with prescribed node slopes.

    Args:
        nodes: Increasing abscissae, shape (..., n)
        values: Ordinates, shape (..., n)
        slopes: Derivatives at the nodes, shape (..., n)
        at: Evaluation points, shape (..., m)

    Returns:
        Interpolated values, shape broadcast(...) + (m,)
    """
    (x, y, d, q), batch = _flatten_rows(nodes, values, slopes, at)
    k = _bracket(x, q)
    x0 = np.take_along_axis(x, k, axis=-1)
    h = np.take_along_axis(x, k + 1, axis=-1) - x0
    y0 = np.take_along_axis(y, k, axis=-1)
    y1 = np.take_along_axis(y, k + 1, axis=-1)
    d0 = np.take_along_axis(d, k, axis=-1)
    d1 = np.take_along_axis(d, k + 1, axis=-1)

    s = (q - x0) / h
    s2 = s * s
    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
    h10 = s * (1.0 - s) ** 2
    h01 = s2 * (3.0 - 2.0 * s)
    h11 = s2 * (s - 1.0)
    out = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    return out.reshape(batch + (q.shape[-1],))


def monotone_hermite(nodes, values, slopes, at) -> np.ndarray:
    """
    Shape-preserving Hermite interpolation of increasing data.

    Exact slopes are kept wherever they already satisfy the Hyman
    condition 0 <= d_i <= 3 min(adjacent secants); otherwise they are
    clipped into it, which keeps the interpolant monotone.

    Args:
        nodes: Increasing abscissae, shape (..., n)
        values: Increasing ordinates, shape (..., n)
        slopes: Derivatives at the nodes, shape (..., n)
        at: Evaluation points, shape (..., m)

    Returns:
        Interpolated values, shape broadcast(...) + (m,)
    """
    nodes, values, slopes = np.broadcast_arrays(
        np.asarray(nodes, dtype=float),
        np.asarray(values, dtype=float),
        np.asarray(slopes, dtype=float),
    )
    with np.errstate(divide='ignore'):
        secant = np.diff(values, axis=-1) / np.diff(nodes, axis=-1)
    limit = np.empty_like(values)
    limit[..., 0] = 3.0 * secant[..., 0]
    limit[..., -1] = 3.0 * secant[..., -1]
    limit[..., 1:-1] = 3.0 * np.minimum(secant[..., :-1], secant[..., 1:])
    return hermite(nodes, values, np.clip(slopes, 0.0, limit), at)


def pchip_slopes(values: np.ndarray, dt: float) -> np.ndarray:
    """
    Fritsch-Carlson node slopes of data on a uniform grid, from scipy's PCHIP.

    The Hermite interpolant with these slopes never leaves the range of the
    two bracketing values, so positive data stays positive.

    Args:
        values: Ordinates, shape (..., n), n >= 3
        dt: Grid spacing

    Returns:
        Node slopes, same shape as values
    """
    values = np.asarray(values, dtype=float)
    nodes = dt * np.arange(values.shape[-1])
    return PchipInterpolator(nodes, values, axis=-1).derivative()(nodes)


def pchip(nodes, values, at) -> np.ndarray:
    """
    PCHIP interpolation of rows sharing the abscissae nodes.

    Shared evaluation points go straight to scipy; points that differ per
    row go through the batched Hermite evaluator with scipy's slopes.

    Args:
        nodes: Increasing abscissae, shape (n,)
        values: Ordinates, shape (..., n)
        at: Evaluation points, shape (m,) or (..., m)

    Returns:
        Interpolated values, shape broadcast(...) + (m,)
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    at = np.asarray(at, dtype=float)
    interpolant = PchipInterpolator(nodes, values, axis=-1)
    if at.ndim <= 1:
        return interpolant(at)
    return hermite(nodes, values, interpolant.derivative()(nodes), at)


def linear_on_grid(values: np.ndarray, at: np.ndarray) -> np.ndarray:
    """
    Linear interpolation of uniform-grid data on [0, 1].

    Args:
        values: Ordinates at t_i = i/(n-1), shape (..., n)
        at: Points in [0, 1], shape (..., m)

    Returns:
        Interpolated values, shape broadcast(...) + (m,)
    """
    values = np.asarray(values, dtype=float)
    at = np.asarray(at, dtype=float)
    n = values.shape[-1]
    batch = np.broadcast_shapes(values.shape[:-1], at.shape[:-1])
    values = np.broadcast_to(values, batch + (n,))
    at = np.broadcast_to(at, batch + (at.shape[-1],))

    position = np.clip(at, 0.0, 1.0) * (n - 1)
    k = np.clip(np.floor(position).astype(np.intp), 0, n - 2)
    frac = position - k
    left = np.take_along_axis(values, k, axis=-1)
    right = np.take_along_axis(values, k + 1, axis=-1)
    return (1.0 - frac) * left + frac * right
