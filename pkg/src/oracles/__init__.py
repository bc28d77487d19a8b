"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Closed-form values and quadrature oracles
"""
from .closed_form import (
    FormulaId,
    ClosedFormValue,
    a_of_beta,
    alpha_of_beta,
    conjugate_beta,
    lemma1_rhs,
    theorem2_lhs_closed,
    damped_mass_closed,
    j_closed,
    lemma4_rhs,
    i2_closed,
    gauss_integrals,
    closed_form_value,
)
from .quadrature import OracleCheck, quadrature_oracle, run_oracle_suite

__all__ = [
    'FormulaId',
    'ClosedFormValue',
    'a_of_beta',
    'alpha_of_beta',
    'conjugate_beta',
    'lemma1_rhs',
    'theorem2_lhs_closed',
    'damped_mass_closed',
    'j_closed',
    'lemma4_rhs',
    'i2_closed',
    'gauss_integrals',
    'closed_form_value',
    'OracleCheck',
    'quadrature_oracle',
    'run_oracle_suite',
]
