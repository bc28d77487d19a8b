"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Test configuration for pytest
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
root_path = Path(__file__).parent.parent
sys.path.insert(0, str(root_path))

from src.paths.grid import GridSpec  # noqa: E402
from src.paths.sampling import RngStream  # noqa: E402

SEED = 20250101


@pytest.fixture
def grid():
    """Default 513-node grid."""
    return GridSpec(513)


@pytest.fixture
def coarse_grid():
    return GridSpec(129)


@pytest.fixture
def seed():
    return SEED


@pytest.fixture
def gen():
    """Generator on a fixed test stream."""
    return RngStream(SEED, 999).generator()


@pytest.fixture
def smooth_positive():
    """Smooth path bounded away from zero."""
    return lambda t: np.exp(0.5 * np.sin(2.0 * np.pi * t) + 0.3 * t)
