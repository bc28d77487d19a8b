"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Configuration loading: YAML defaults, environment and command-line overrides
"""
import copy
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "default.yaml"
OUTPUT_DIR_ENV = "POLARWIENER_OUTPUT_DIR"

# Used when the YAML file is missing or unreadable
FALLBACK_CONFIG: Dict[str, Any] = {
    "grid": {"n_points": 513},
    "sampling": {"seed": 7, "chunk_size": 4096, "workers": 4},
    "estimators": {
        "sigma": 1.0,
        "a": 1.0,
        "beta": 1.0,
        "theta": 4.0,
        "rho": 1.0,
        "kappa": 0.125,
        "kappa_candidates": [0.125, 0.25],
        "n_samples": 200000,
        "positivity": "bridge",
        "min_ess_fraction": 0.01,
        "functionals": {
            "path": ["median_indicator", "exp_neg_integral_sq", "exp_neg_midpoint_sq"],
            "diffeo": ["one", "exp_neg_dphi0"],
            "complex": ["one", "cos_phase", "modulus_integral"],
        },
        "proposals": {
            "q0": {"kind": "halfnormal"},
            "rho": {"kind": "lognormal", "shape": 0.6},
            "rho_alternative": {"kind": "halfcauchy"},
            "r": {"kind": "rayleigh"},
        },
    },
    "verification": {
        "lemma1_a": [0.5, 1.0, 2.0],
        "lemma4_points": [[1.0, 1.0, 1.0], [0.5, 2.0, 1.0]],
        "theorem3_betas": [0.5, 1.0],
        "exponential_c": 0.5,
        "roundtrip_n_points": [129, 257, 513, 1025],
        "lemma5_samples": 20,
        "discretization_n_points": [129, 257, 513, 1025],
    },
    "schwarzian": {"n_points": 2049, "tolerance": 1e-12, "max_iterations": 64},
    "oracles": {
        "rel_tolerance": 1e-8,
        "epsrel": 1e-11,
        "consistency_betas": [-0.5, 0.5, 1.0, 2.0, 5.0],
    },
    "planar": {
        "max_phase_step": math.pi / 2,
        "min_modulus": 1e-10,
        "radial_kappas": [0.0, 0.125, 0.25],
        "angle_measures": [1.0, 2 * math.pi],
    },
    "report": {
        "output_dir": "./output",
        "schema_version": 1,
        "z_threshold": 3.0,
        "format": "json",
    },
    "logging": {
        "level": "INFO",
        "file": "polarwiener.log",
        "max_size_mb": 10,
        "backup_count": 3,
    },
}


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from a YAML file.

    Args:
        config_path: Path to a YAML file (default: config/default.yaml)

    Returns:
        Nested configuration dictionary; built-in defaults if the file
        cannot be read
    """
    if not config_path:
        config_path = DEFAULT_CONFIG_PATH

    try:
        with open(config_path, 'r') as f:
            loaded = yaml.safe_load(f) or {}
        config = merge_overrides(FALLBACK_CONFIG, loaded)
    except Exception as e:
        logger.warning(f"Failed to load config from {config_path}: {e}, using defaults")
        config = copy.deepcopy(FALLBACK_CONFIG)

    env_output = os.getenv(OUTPUT_DIR_ENV)
    if env_output:
        config["report"]["output_dir"] = env_output

    return config


def merge_overrides(config: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Deep-merge overrides into a copy of config.

    None values in overrides are ignored so that unset command-line flags
    leave the file value in place.

    Args:
        config: Base configuration
        overrides: Nested dictionary of replacement values

    Returns:
        New merged dictionary
    """
    merged = copy.deepcopy(dict(config))
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = merge_overrides(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged
