"""Monte Carlo harness: determinism, aggregation, and distance recomputation."""

import math

import pytest

from rgiso.errors import BudgetExhausted, DomainError
from rgiso.graphs import Graph, ProbPair
from rgiso.montecarlo import (
    DistributionReport,
    copy_count_distribution,
    estimate_containment,
    fixed_pattern_containment,
    heatmap_containment,
    log_copy_statistic,
    mcis_concentration,
    round9,
    wilson_interval,
)
from rgiso.rng import Seed
from rgiso.solver import SearchBudget
from rgiso.thresholds import limit_variance, squashed_normal_cdf, threshold_offset


def test_round9_trims_to_nine_significant_digits():
    assert round9(0.123456789123) == 0.123456789
    assert round9(1.0) == 1.0
    assert round9(-2.5e-7) == -2.5e-7
    assert round9(123456789123.0) == 123456789000.0


def test_wilson_interval_limits_and_order():
    lo, hi = wilson_interval(0, 50)
    assert lo == 0.0 and 0.0 < hi < 0.2
    lo, hi = wilson_interval(50, 50)
    assert hi == 1.0 and 0.8 < lo < 1.0
    lo, hi = wilson_interval(25, 50)
    assert 0.0 < lo < 0.5 < hi < 1.0


def test_wilson_interval_closed_form():
    s, n, z = 8, 10, 1.959963984540054
    phat = s / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    lo, hi = wilson_interval(s, n)
    assert abs(lo - (center - half)) <= 1e-12
    assert abs(hi - (center + half)) <= 1e-12


def test_estimate_containment_deterministic_across_workers():
    args = (5, 0.5, 30, 0.5, 40, Seed(21))
    serial = estimate_containment(*args, None, 1)
    pooled = estimate_containment(*args, None, 3)
    assert serial == pooled


def test_estimate_containment_monotone_in_pattern_size():
    shared = dict(trials=60, seed=Seed(22))
    small = estimate_containment(4, 0.5, 40, 0.5, **shared)
    large = estimate_containment(12, 0.5, 40, 0.5, **shared)
    assert small.rate >= large.rate


def test_estimate_containment_validates():
    with pytest.raises(DomainError):
        estimate_containment(5, 0.5, 30, 0.5, 0, Seed(0))
    with pytest.raises(DomainError):
        estimate_containment(5, 1.5, 30, 0.5, 10, Seed(0))
    with pytest.raises(DomainError):
        estimate_containment(-1, 0.5, 30, 0.5, 10, Seed(0))


def test_all_timeouts_raise():
    with pytest.raises(BudgetExhausted):
        estimate_containment(
            10, 0.5, 40, 0.5, 10, Seed(23), SearchBudget(max_nodes=1), 1
        )


def test_copy_count_distribution_histogram_and_distance():
    rep = copy_count_distribution(8, 20, 0.5, 0.5, 200, Seed(24), None, 2)
    assert sum(rep.counts) == rep.trials - rep.timeouts
    assert list(rep.values) == sorted(rep.values)
    assert rep.reference == "poisson"
    assert rep.distance_kind == "tv"
    recomputed = DistributionReport.tv_distance(
        rep.values, rep.counts, rep.trials - rep.timeouts, rep.reference_params["mu"]
    )
    assert recomputed == rep.distance
    assert 0.0 <= rep.distance <= 1.0


def test_copy_count_distribution_needs_half_density_target():
    with pytest.raises(DomainError):
        copy_count_distribution(8, 20, 0.5, 0.4, 10, Seed(0))


def test_log_copy_statistic_reference_and_samples():
    rep = log_copy_statistic(9, 40, 0.5, 0.3, 100, Seed(25), None, 2)
    assert rep.reference == "squashed_normal"
    assert rep.distance_kind == "ks"
    pp = ProbPair(0.5, 0.3)
    assert rep.reference_params["mu"] == round9(-threshold_offset(9, pp, 40))
    assert rep.reference_params["sigma2"] == round9(limit_variance(pp))
    assert all(v >= 0.0 for v in rep.values)
    assert list(rep.values) == sorted(rep.values)
    recomputed = DistributionReport.ks_distance(
        rep.values,
        rep.counts,
        rep.trials - rep.timeouts,
        rep.reference_params["mu"],
        rep.reference_params["sigma2"],
    )
    assert recomputed == rep.distance


def test_ks_distance_atom_handling_is_left_continuous():
    # all empirical mass at the atom: the only gap is the missing upper tail.
    # comparing the pre-jump empirical CDF against the reference value AT 0
    # (instead of its left limit, 0) would wrongly report the atom mass itself.
    mu, s2 = -0.5, 0.4
    atom = squashed_normal_cdf(0.0, mu, s2)
    d = DistributionReport.ks_distance((0.0,), (100,), 100, mu, s2)
    assert abs(d - (1.0 - atom)) <= 1e-12


def test_fixed_pattern_containment_triangle():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    rep = fixed_pattern_containment(tri, 30, 0.5, 50, Seed(26), None, 2)
    assert rep.rate == 1.0
    assert rep == fixed_pattern_containment(tri, 30, 0.5, 50, Seed(26), None, 1)


def test_fixed_pattern_validates_target_density():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(DomainError):
        fixed_pattern_containment(tri, 30, 0.0, 10, Seed(0))


def test_heatmap_layout_and_determinism():
    rep1 = heatmap_containment(20, 5, 8, 10, Seed(27), None, 1)
    rep2 = heatmap_containment(20, 5, 8, 10, Seed(27), None, 3)
    assert rep1 == rep2
    assert rep1.grid_k == 8 and len(rep1.cells) == 64
    axis = [(i + 1) / 9 for i in range(8)]
    assert sorted({c.x for c in rep1.cells}) == axis
    assert sorted({c.y for c in rep1.cells}) == axis
    for c in rep1.cells:
        if c.rate is not None:
            assert 0.0 <= c.ci_lo <= c.rate <= c.ci_hi <= 1.0


def test_heatmap_rate_falls_as_target_thins():
    # fix the densest pattern column; the containment rate cannot rise much
    # as the target loses edges below it
    rep = heatmap_containment(25, 6, 8, 30, Seed(28), None, 2)
    col = sorted(
        (c for c in rep.cells if abs(c.x - 5 / 9) < 1e-12), key=lambda c: c.y
    )
    dense_half = [c.rate for c in col if c.y >= 0.5]
    sparse_edge = col[0].rate
    assert sparse_edge <= max(dense_half) + 0.1


def test_mcis_concentration_tiny_target_support():
    rep = mcis_concentration(2, 0.5, 0.5, 30, Seed(29), None, 1)
    assert set(rep.values) <= {1, 2}
    assert rep.n_N is None and rep.hit_rate is None
    assert sum(rep.counts) == rep.trials - rep.timeouts


def test_mcis_concentration_reports_theory_at_moderate_size():
    rep = mcis_concentration(16, 0.5, 0.5, 5, Seed(30), None, 1, slack=1)
    assert rep.n_N is not None and rep.eps_N is not None
    assert rep.interval_lo == math.floor(rep.n_N - rep.eps_N)
    assert rep.interval_hi == math.floor(rep.n_N + rep.eps_N)
    assert rep.hit_rate is not None and 0.0 <= rep.hit_rate <= 1.0
    assert rep.slack == 1
