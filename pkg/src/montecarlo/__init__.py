"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Monte Carlo estimators of the decomposition identities

The planar estimators and the verification checks import this package,
so they are not re-exported here (see src.planar and
src.montecarlo.verification).
"""
from .engine import (
    MCEstimate,
    z_score,
    effective_sample_size,
    summarize,
    compare,
    run_chunks,
    se_slope,
)
from .proposals import Proposal
from .functionals import TestFunctional, get_functional, get_functionals
from .estimate import (
    EstimatorConfig,
    ComparisonResult,
    KappaSelection,
    DiscretizationStudy,
    estimate_lemma1,
    estimate_j,
    estimate_lemma4,
    estimate_i2,
    theorem1_lhs,
    theorem1_rhs,
    theorem2_lhs,
    theorem2_rhs,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_density_mass,
    select_kappa,
    discretization_study,
    se_scaling_study,
)

__all__ = [
    'MCEstimate',
    'z_score',
    'effective_sample_size',
    'summarize',
    'compare',
    'run_chunks',
    'se_slope',
    'Proposal',
    'TestFunctional',
    'get_functional',
    'get_functionals',
    'EstimatorConfig',
    'ComparisonResult',
    'KappaSelection',
    'DiscretizationStudy',
    'estimate_lemma1',
    'estimate_j',
    'estimate_lemma4',
    'estimate_i2',
    'theorem1_lhs',
    'theorem1_rhs',
    'theorem2_lhs',
    'theorem2_rhs',
    'verify_theorem1',
    'verify_theorem2',
    'verify_theorem3',
    'verify_density_mass',
    'select_kappa',
    'discretization_study',
    'se_scaling_study',
]
