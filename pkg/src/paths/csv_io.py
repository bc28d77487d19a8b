"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
CSV persistence of grid data (paths, diffeomorphisms, complex paths)
"""
import csv
import logging
from pathlib import Path as FilePath
from typing import Dict, List, Sequence, Union

import numpy as np

from src.errors import GridError
from src.paths.grid import GridSpec, Path

logger = logging.getLogger(__name__)

UNIFORMITY_TOLERANCE = 1e-12


def write_columns(filepath: Union[str, FilePath], grid: GridSpec, columns: Dict[str, np.ndarray]):
    """
    Write grid columns as CSV with a leading t column.

    Args:
        filepath: Output file
        grid: Grid the columns live on
        columns: Ordered mapping header -> values (length n_points)
    """
    names = list(columns)
    data = [np.asarray(columns[name], dtype=float) for name in names]
    for name, values in zip(names, data):
        if values.shape != (grid.n_points,):
            raise GridError(f"Column {name} has shape {values.shape}, expected ({grid.n_points},)")

    with open(filepath, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['t'] + names)
        for i, t in enumerate(grid.nodes):
            writer.writerow([repr(float(t))] + [repr(float(values[i])) for values in data])
    logger.debug(f"Wrote {grid.n_points} rows to {filepath}")


def read_columns(filepath: Union[str, FilePath], expected: Sequence[str]):
    """
    Read a grid CSV and validate its header and grid uniformity.

    Args:
        filepath: Input file
        expected: Column names after t

    Returns:
        (GridSpec, dict of column arrays)
    """
    with open(filepath, 'r', newline='') as f:
        reader = csv.reader(f)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise GridError(f"{filepath} is empty")
        if header != ['t'] + list(expected):
            raise GridError(f"{filepath}: header {header}, expected {['t'] + list(expected)}")
        rows: List[List[float]] = []
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise GridError(f"{filepath}:{line_number}: non-numeric value in {row}")
            if len(row) != len(header):
                raise GridError(f"{filepath}:{line_number}: expected {len(header)} fields")

    table = np.array(rows, dtype=float)
    if table.shape[0] < 3:
        raise GridError(f"{filepath}: need at least 3 grid rows, found {table.shape[0]}")
    grid = GridSpec(table.shape[0])
    deviation = np.max(np.abs(table[:, 0] - grid.nodes))
    if deviation > UNIFORMITY_TOLERANCE:
        raise GridError(f"{filepath}: grid not uniform on [0, 1] (max deviation {deviation:.3e})")

    return grid, {name: table[:, i + 1] for i, name in enumerate(expected)}


def write_path_csv(filepath: Union[str, FilePath], path: Path):
    """Write a single path as `t,value`."""
    if path.is_batch:
        raise GridError("write_path_csv expects a single path")
    write_columns(filepath, path.grid, {'value': path.values})


def read_path_csv(filepath: Union[str, FilePath]) -> Path:
    """Read a `t,value` CSV into a Path."""
    grid, columns = read_columns(filepath, ['value'])
    return Path(grid, columns['value'])
