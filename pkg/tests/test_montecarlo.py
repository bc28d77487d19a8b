"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Unit tests for the Monte Carlo engine, proposals, functionals and estimators
"""
import math

import numpy as np
import pytest

from src.errors import DegenerateWeights, DomainError, ProposalMismatch
from src.montecarlo.engine import (
    MCEstimate,
    chunk_sizes,
    compare,
    effective_sample_size,
    run_chunks,
    se_slope,
    summarize,
    z_score,
)
from src.montecarlo.estimate import (
    ComparisonResult,
    EstimatorConfig,
    KappaSelection,
    discretization_study,
    estimate_i2,
    estimate_j,
    estimate_lemma1,
    estimate_lemma4,
    select_kappa,
    verify_proposal_swap,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
)
from src.montecarlo.functionals import get_functional, median_indicator
from src.montecarlo.proposals import Proposal
from src.oracles.closed_form import j_closed
from src.paths.grid import GridSpec, Path
from src.paths.sampling import RngStream

Z_LIMIT = 4.0


@pytest.fixture
def small_cfg(seed):
    """Cheap estimator settings on a coarse grid."""
    return EstimatorConfig(n_samples=20000, grid=GridSpec(65), seed=seed,
                           positivity="closed_form", chunk_size=4096)


def test_z_score_cases():
    """Test z-scores for random and deterministic estimates."""
    assert z_score(1.2, 1.0, 0.1) == pytest.approx(2.0)
    assert z_score(1.0, 1.0, 0.0) == 0.0
    assert z_score(1.0 + 1e-14, 1.0, 0.0) == 0.0
    assert z_score(1.1, 1.0, 0.0) == math.inf
    assert z_score(0.9, 1.0, 0.0) == -math.inf


def test_estimate_within():
    """Test the threshold check with and without a target."""
    assert MCEstimate(1.0, 0.1, 100).within()
    assert MCEstimate(1.2, 0.1, 100, target=1.0).within(3.0)
    assert not MCEstimate(1.5, 0.1, 100, target=1.0).within(3.0)


def test_summarize_mean_and_error():
    """Test the mean and the standard error of the mean."""
    estimate = summarize([1.0, 2.0, 3.0, 4.0], target=2.5)
    assert estimate.mean == 2.5
    assert estimate.std_err == pytest.approx(math.sqrt(5.0 / 3.0) / 2.0)
    assert estimate.z_score == 0.0
    with pytest.raises(ValueError):
        summarize([1.0])


def test_effective_sample_size():
    """Test Kish ESS on equal and concentrated weights."""
    assert effective_sample_size(np.ones(50)) == pytest.approx(50.0)
    assert effective_sample_size([1.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert effective_sample_size(np.zeros(3)) == 0.0


def test_summarize_degenerate_weights():
    """Test a collapsed ESS raises DegenerateWeights."""
    weights = np.zeros(1000)
    weights[0] = 1.0
    with pytest.raises(DegenerateWeights):
        summarize(weights, weights, min_ess_fraction=0.01)


def test_compare_combines_errors():
    """Test the combined z-score of two estimates."""
    first = MCEstimate(1.0, 0.3, 10)
    second = MCEstimate(2.0, 0.4, 10)
    assert compare(first, second) == pytest.approx(-2.0)


def test_chunk_sizes():
    """Test fixed chunks cover the sample count."""
    assert chunk_sizes(10, 4) == [4, 4, 2]
    assert chunk_sizes(8, 4) == [4, 4]
    with pytest.raises(ValueError):
        chunk_sizes(0, 4)


def test_run_chunks_independent_of_workers():
    """Test concatenated samples do not depend on the thread count."""
    def sampler(gen, m):
        return gen.normal(size=m), np.ones(m)

    single = run_chunks(sampler, 1000, 42, chunk_size=64, workers=1)
    threaded = run_chunks(sampler, 1000, 42, chunk_size=64, workers=4)
    assert single[0].shape == (1000,)
    assert np.array_equal(single[0], threaded[0])
    assert not np.array_equal(single[0], run_chunks(sampler, 1000, 43, chunk_size=64)[0])


def test_run_chunks_stream_assignment():
    """Test chunk k uses stream stream_base + k."""
    def sampler(gen, m):
        return gen.random(m), np.ones(m)

    contributions, _ = run_chunks(sampler, 20, 5, chunk_size=10, stream_base=100)
    expected = RngStream(5, 101).generator().random(10)
    assert np.array_equal(contributions[10:], expected)


def test_run_chunks_stacked_contributions():
    """Test (k, m) contributions concatenate along the sample axis."""
    def sampler(gen, m):
        return np.stack([np.ones(m), 2 * np.ones(m)]), np.ones(m)

    contributions, weights = run_chunks(sampler, 25, 1, chunk_size=10)
    assert contributions.shape == (2, 25)
    assert weights.shape == (25,)


def test_se_slope():
    """Test the log-log slope of exact n^-1/2 errors."""
    sizes = [100, 1000, 10000]
    assert se_slope(sizes, [1.0 / math.sqrt(n) for n in sizes]) == pytest.approx(-0.5)


def test_proposal_validation():
    """Test unknown kinds and bad scales are rejected."""
    with pytest.raises(DomainError):
        Proposal("uniform")
    with pytest.raises(DomainError):
        Proposal("halfnormal", scale=0.0)


def test_proposal_support():
    """Test a normal proposal cannot serve a positive variable."""
    with pytest.raises(ProposalMismatch):
        Proposal("normal").require_positive_support()
    Proposal("halfcauchy").require_positive_support()


def test_proposal_samples_positive(gen):
    """Test positive proposals sample positive values with finite log density."""
    for kind in ("halfnormal", "halfcauchy", "lognormal", "rayleigh"):
        x = Proposal(kind, 0.7).sample(gen, 500)
        assert np.all(x > 0)
        assert np.all(np.isfinite(Proposal(kind, 0.7).logpdf(x)))


def test_proposal_from_settings():
    """Test the configured scale factor multiplies the natural scale."""
    proposal = Proposal.from_settings({"kind": "lognormal", "shape": 0.4, "scale_factor": 2.0}, 0.5)
    assert proposal == Proposal("lognormal", 1.0, 0.4)
    assert Proposal.from_settings(None, 3.0).kind == "halfnormal"


def test_median_indicator(coarse_grid):
    """Test the midpoint indicator on constant paths."""
    values = np.stack([np.full(coarse_grid.n_points, 0.5), np.full(coarse_grid.n_points, 2.0)])
    assert np.array_equal(median_indicator()(Path(coarse_grid, values)), [1.0, 0.0])


def test_get_functional_unknown():
    """Test unknown functional ids list the known ones."""
    assert get_functional("diffeo", "one").kind == "diffeo"
    with pytest.raises(KeyError):
        get_functional("path", "nope")


def test_estimator_config_validation():
    """Test domain checks on estimator parameters."""
    with pytest.raises(DomainError):
        EstimatorConfig(beta=-1.0)
    with pytest.raises(DomainError):
        EstimatorConfig(a=0.0)
    with pytest.raises(DomainError):
        EstimatorConfig(positivity="sometimes")
    with pytest.raises(DomainError):
        EstimatorConfig(kappa=-0.1)


def test_estimator_config_from_settings():
    """Test settings are read and None overrides are ignored."""
    settings = {
        "grid": {"n_points": 129},
        "sampling": {"seed": 3, "chunk_size": 100, "workers": 2},
        "estimators": {"a": 2.0, "n_samples": 500, "proposals": {"q0": {"kind": "halfcauchy"}}},
    }
    cfg = EstimatorConfig.from_settings(settings, a=None, beta=0.5)
    assert cfg.a == 2.0
    assert cfg.beta == 0.5
    assert cfg.grid == GridSpec(129)
    assert cfg.seed == 3
    assert cfg.proposal("q0", 1.0).kind == "halfcauchy"
    assert cfg.proposal("r", 1.0).kind == "rayleigh"


def test_estimator_config_planar_proposal():
    """Test the planar radius proposal is read from settings and roles are checked."""
    settings = {"estimators": {"proposals": {"r": {"kind": "halfnormal", "scale_factor": 2.0}}}}
    cfg = EstimatorConfig.from_settings(settings)
    proposal = cfg.proposal("r", 0.5)
    assert proposal.kind == "halfnormal"
    assert proposal.scale == pytest.approx(1.0)
    with pytest.raises(DomainError):
        cfg.proposal("theta", 1.0)


def test_estimator_reproducible(small_cfg):
    """Test equal seeds give identical estimates."""
    first = estimate_lemma1(small_cfg.replace(n_samples=2000))
    second = estimate_lemma1(small_cfg.replace(n_samples=2000, workers=3, chunk_size=256))
    third = estimate_lemma1(small_cfg.replace(n_samples=2000, chunk_size=256))
    assert second.mean == third.mean
    assert first.n == 2000


@pytest.mark.parametrize("positivity", ["closed_form", "bridge"])
def test_lemma1_estimate(small_cfg, positivity):
    """Test the Lemma 1 estimator against its closed form."""
    estimate = estimate_lemma1(small_cfg.replace(positivity=positivity))
    assert abs(estimate.z_score) <= Z_LIMIT


def test_j_estimates(small_cfg):
    """Test both J routes against the closed form."""
    pullback = estimate_j(small_cfg, route="pullback")
    assert pullback.std_err > 0.0
    assert pullback.target == pytest.approx(j_closed(1.0, 1.0, 1.0))
    assert abs(pullback.z_score) <= Z_LIMIT
    bridge = estimate_j(small_cfg)
    assert abs(bridge.z_score) <= Z_LIMIT
    assert abs(compare(pullback, bridge)) <= Z_LIMIT
    with pytest.raises(DomainError):
        estimate_j(small_cfg, route="direct")


def test_j_pullback_negative_beta(small_cfg):
    """Test the translated J estimate for a contracting Mobius index."""
    pullback = estimate_j(small_cfg.replace(beta=-0.5), route="pullback")
    assert pullback.std_err > 0.0
    assert abs(pullback.z_score) <= Z_LIMIT


def test_lemma4_estimate(small_cfg):
    """Test the Lemma 4 estimator at (1, 1, 1)."""
    estimate = estimate_lemma4(small_cfg)
    assert abs(estimate.z_score) <= Z_LIMIT
    with pytest.raises(DomainError):
        estimate_lemma4(small_cfg, rho=0.0)


def test_i2_importance_estimate(small_cfg):
    """Test the radial importance estimator of I2."""
    estimate = estimate_i2(small_cfg)
    assert abs(estimate.z_score) <= Z_LIMIT
    with pytest.raises(DomainError):
        estimate_i2(small_cfg, method="grid")


def test_theorem2_both_sides(small_cfg):
    """Test both sides of the endpoint-ratio identity at theta = 4."""
    left, right = verify_theorem2(small_cfg)
    assert abs(left.z_score) <= Z_LIMIT
    assert abs(right.z_score) <= Z_LIMIT
    assert abs(compare(left, right)) <= Z_LIMIT


def test_theorem1_damped_mass(small_cfg):
    """Test both sides of Theorem 1 with F = 1 against the damped mass."""
    left, right = verify_theorem1(small_cfg, get_functional("path", "one"))
    assert abs(left.z_score) <= Z_LIMIT
    assert abs(right.z_score) <= Z_LIMIT


def test_theorem3_mass(small_cfg):
    """Test the translated mass is exactly one and the density has mass one."""
    translated, reweighted = verify_theorem3(small_cfg.replace(beta=0.05), get_functional("diffeo", "one"))
    assert translated.mean == 1.0
    assert translated.std_err == 0.0
    assert abs(reweighted.z_score) <= Z_LIMIT


@pytest.mark.parametrize("functional_id", ["exp_neg_dphi0", "phi_half"])
def test_theorem3_nonconstant_functional(small_cfg, functional_id):
    """Test translation and reweighting agree for functionals that depend on phi."""
    translated, reweighted = verify_theorem3(small_cfg.replace(beta=0.25), get_functional("diffeo", functional_id))
    assert translated.std_err > 0.0
    assert abs(compare(translated, reweighted)) <= Z_LIMIT


def test_select_kappa_at_sample_size(small_cfg):
    """Test exactly one radial constant passes Theorem 1 with real draws."""
    selection = select_kappa(small_cfg.replace(n_samples=80000), [get_functional("path", "one")],
                             threshold=Z_LIMIT)
    assert selection.passing == [0.125]
    assert selection.selected == 0.125


def test_theorem2_proposal_swap(small_cfg):
    """Test the Theorem 2 right side does not depend on the rho proposal."""
    configured, swapped = verify_proposal_swap(small_cfg, {"kind": "halfcauchy"})
    assert abs(configured.z_score) <= Z_LIMIT
    assert abs(swapped.z_score) <= Z_LIMIT
    assert abs(compare(configured, swapped)) <= Z_LIMIT


def test_kappa_selection_unique():
    """Test selection picks the only constant passing every functional."""
    left = MCEstimate(1.0, 0.01, 100)
    comparisons = {
        0.125: [ComparisonResult("f", left, MCEstimate(1.01, 0.01, 100))],
        0.25: [ComparisonResult("f", left, MCEstimate(1.5, 0.01, 100))],
    }
    selection = KappaSelection([0.125, 0.25], comparisons, 3.0)
    assert selection.passing == [0.125]
    assert selection.selected == 0.125


def test_kappa_selection_ambiguous():
    """Test no constant is selected when two pass."""
    left = MCEstimate(1.0, 0.1, 100)
    close = [ComparisonResult("f", left, MCEstimate(1.05, 0.1, 100))]
    selection = KappaSelection([0.125, 0.25], {0.125: close, 0.25: close})
    assert selection.selected is None
    assert len(selection.passing) == 2


def test_discretization_study_structure(small_cfg):
    """Test the study returns one point per grid and a finite extrapolation."""
    study = discretization_study(small_cfg.replace(n_samples=2000), (33, 65))
    assert [p.n_points for p in study.points] == [33, 65]
    assert math.isfinite(study.extrapolated_bias)
    assert study.extrapolated_std_err > 0
