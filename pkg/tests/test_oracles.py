"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Unit tests for closed forms and quadrature oracles
"""
import math

import pytest

from src.errors import DomainError, QuadratureFailure
from src.oracles.closed_form import (
    FormulaId,
    a_of_beta,
    closed_form_value,
    conjugate_beta,
    damped_mass_closed,
    gauss_integrals,
    i2_closed,
    j_closed,
    lemma1_rhs,
    lemma4_rhs,
    theorem2_lhs_closed,
)
from src.oracles.quadrature import OracleCheck, quadrature_oracle, run_oracle_suite


def test_lemma1_values():
    """Test lemma1_rhs at a = 1 and a = 1/2."""
    assert abs(lemma1_rhs(1.0) - 0.1494292) < 1e-7
    assert abs(lemma1_rhs(0.5) - 0.4714045) < 1e-7
    assert lemma1_rhs(1e8) < 1e-8


def test_j_closed_values():
    """Test J at beta = 0 and at (1, 1, 1)."""
    assert math.isclose(j_closed(0.0, 2.0, 1.0), 2.0 / math.sqrt(2.0 * math.pi), rel_tol=1e-15)
    assert abs(j_closed(1.0, 1.0, 1.0) - 0.3137480) < 1e-7


def test_lemma4_values():
    """Test lemma4_rhs at (1, 1, 1) and its beta -> 0 limit."""
    assert abs(lemma4_rhs(1.0, 1.0, 1.0) - 0.2899648) < 1e-7
    limit = math.sqrt(2.0 / math.pi) / 2.0
    assert math.isclose(lemma4_rhs(1e-10, 1.0, 1.0), limit, rel_tol=1e-9)
    assert math.isclose(lemma4_rhs(1e-4, 1.0, 1.0), limit, rel_tol=1e-4)


def test_lemma4_positive():
    """Test the Lemma 4 value is positive on both sides of zero."""
    for beta in (-0.9, -0.5, 0.3, 4.0):
        assert lemma4_rhs(beta, 1.0, 1.0) > 0


def test_i2_closed_values():
    """Test I2 at beta = 1 and its conjugate symmetry."""
    assert math.isclose(i2_closed(1.0), math.sqrt(2.0) / 3.0, rel_tol=1e-15)
    assert math.isclose(i2_closed(-0.5), i2_closed(conjugate_beta(-0.5)), rel_tol=1e-14)
    assert math.isclose(i2_closed(1e-6) * 2e-6, 1.0, rel_tol=1e-5)


@pytest.mark.parametrize("beta", [-0.5, 0.5, 1.0, 2.0, 5.0])
def test_consistency_chain(beta):
    """Test lemma1_rhs(a(beta)) = i2_closed(beta)."""
    assert math.isclose(lemma1_rhs(a_of_beta(beta)), i2_closed(beta), rel_tol=1e-12)


def test_gauss_integrals_values():
    """Test the closed forms at a = b = 1 and their ratios."""
    ia, ib, ic = gauss_integrals(1.0, 1.0)
    assert abs(ia - 0.9221370) < 1e-7
    assert abs(ib - 0.4610685) < 1e-7
    assert math.isclose(ib, ic, rel_tol=1e-15)
    ia, ib, ic = gauss_integrals(0.3, 2.0)
    assert math.isclose(ia, 2.0 * ib, rel_tol=1e-15)
    assert math.isclose(0.3 * ic, ib, rel_tol=1e-14)


def test_theorem2_reduces_to_lemma1():
    """Test the endpoint-ratio mass at theta = 1 is the Lemma 1 value."""
    for a in (0.5, 1.0, 2.0):
        assert math.isclose(theorem2_lhs_closed(a, 1.0), lemma1_rhs(a), rel_tol=1e-15)


def test_domain_errors():
    """Test parameters outside the domain raise DomainError."""
    with pytest.raises(DomainError):
        lemma1_rhs(0.0)
    with pytest.raises(DomainError):
        i2_closed(0.0)
    with pytest.raises(DomainError):
        j_closed(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        lemma4_rhs(1.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        gauss_integrals(1.0, 0.0)
    with pytest.raises(ValueError):
        lemma1_rhs(-2.0)


def test_closed_form_value_dispatch():
    """Test dispatch by formula id string."""
    value = closed_form_value("Ic", {"a": 1.0, "b": 1.0})
    assert value.formula_id is FormulaId.IC
    assert math.isclose(value.value, gauss_integrals(1.0, 1.0)[2], rel_tol=1e-15)
    assert math.isclose(closed_form_value(FormulaId.LEMMA1, {"a": 1.0}).value, lemma1_rhs(1.0))


@pytest.mark.parametrize("formula_id", ["Ia", "Ib", "Ic"])
def test_gauss_quadrature(formula_id):
    """Test adaptive quadrature of the Gaussian integrands at a = b = 1."""
    params = {"a": 1.0, "b": 1.0}
    computed = quadrature_oracle(formula_id, params)
    assert math.isclose(computed, closed_form_value(formula_id, params).value, rel_tol=1e-8)


def test_i2_quadrature():
    """Test the radial integral of the Lemma 4 value reproduces I2."""
    computed = quadrature_oracle(FormulaId.I2, {"beta": 1.0, "sigma": 1.0})
    assert math.isclose(computed, i2_closed(1.0), rel_tol=1e-8)


@pytest.mark.parametrize("formula_id,params", [
    ("Lemma1", {"a": 1.0}),
    ("Lemma3_J", {"beta": 1.0, "rho": 1.0, "sigma": 1.0}),
    ("Lemma4", {"beta": 1.0, "rho": 1.0, "sigma": 1.0}),
    ("Theorem2", {"a": 1.0, "theta": 4.0}),
    ("DampedMass", {"a": 1.0, "sigma": 1.0}),
])
def test_closed_forms_against_quadrature(formula_id, params):
    """Test every closed form against its defining integral."""
    computed = quadrature_oracle(formula_id, params)
    assert math.isclose(computed, closed_form_value(formula_id, params).value, rel_tol=1e-8)


def test_damped_mass_scales_with_sigma():
    """Test the damped mass is linear in sigma."""
    assert math.isclose(damped_mass_closed(0.7, 3.0), 3.0 * damped_mass_closed(0.7, 1.0), rel_tol=1e-14)


def test_large_b_vanishes():
    """Test strong Gaussian damping drives both sides to zero."""
    computed = quadrature_oracle("Ic", {"a": 1.0, "b": 6.0})
    assert computed < 1e-14
    assert gauss_integrals(1.0, 6.0)[2] < 1e-14


def test_quadrature_failure_on_impossible_tolerance():
    """Test an unreachable tolerance raises QuadratureFailure."""
    with pytest.raises(QuadratureFailure):
        quadrature_oracle("Lemma4", {"beta": 1.0, "rho": 1.0, "sigma": 1.0}, rel_tolerance=1e-18)


def test_oracle_check_failed_on_error():
    """Test a check carrying an error never passes."""
    check = OracleCheck("gauss", "Ia", {}, 1.0, 1.0, 1e-8, error="QuadratureFailure: x")
    assert not check.passed
    assert math.isinf(check.rel_error)


def test_run_oracle_suite():
    """Test the full deterministic suite passes."""
    checks = run_oracle_suite()
    names = {c.name for c in checks}
    assert {"consistency", "gauss", "i2_assembly", "closed_vs_quadrature"} <= names
    assert len([c for c in checks if c.name == "gauss"]) == 75
    failed = [(c.name, c.formula_id, c.params, c.rel_error) for c in checks if not c.passed]
    assert failed == []
