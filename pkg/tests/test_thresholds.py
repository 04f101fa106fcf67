"""Closed-form predictions: pinned reference values plus structural invariants.

Reference values were computed independently (exact rational arithmetic where
possible, high-precision bisection elsewhere) before being frozen here.
"""

import math
from fractions import Fraction

import pytest

from rgiso.errors import DomainError
from rgiso.graphs import ProbPair
from rgiso.rng import Seed, uniform
from rgiso.thresholds import (
    ContainmentForecast,
    classify_region,
    common_density,
    containment_base,
    containment_limit,
    cost_family,
    critical_size,
    critical_size_asymptotic,
    edge_deviation,
    envelope_minimizer,
    joint_critical_size,
    limit_variance,
    log_expected_copies,
    mcis_location,
    poisson_copy_mean,
    predict_fixed_pattern_containment,
    squashed_normal_cdf,
    threshold_location,
    threshold_offset,
    threshold_report,
    threshold_window,
    two_point_interval,
)

EPS = 2.220446049250313e-16  # double-precision machine epsilon


def grid01(k):
    return [(i + 1) / (k + 1) for i in range(k)]


# ------------------------------------------------------------ exact algebra


def test_base_is_two_at_half_target_density():
    # exact at p1 = 1/2; elsewhere pow rounding costs a couple of ulps
    assert containment_base(ProbPair(0.5, 0.5)) == 2.0
    for p1 in grid01(19):
        assert abs(containment_base(ProbPair(p1, 0.5)) - 2.0) <= 2e-15


def test_variance_vanishes_at_half_target_density():
    for p1 in grid01(19):
        assert limit_variance(ProbPair(p1, 0.5)) == 0.0


def test_variance_positive_off_half_and_complement_invariant():
    for p1 in (0.2, 0.5, 0.8):
        for p2 in (0.1, 0.3, 0.45, 0.7):
            v = limit_variance(ProbPair(p1, p2))
            assert v > 0.0
            # flipping both densities to their complements preserves the law
            flipped = limit_variance(ProbPair(1.0 - p1, 1.0 - p2))
            assert abs(v - flipped) <= 1e-12 * max(1.0, v)


def test_common_density_of_complementary_pair_is_half():
    assert abs(common_density(ProbPair(0.3, 0.7)) - 0.5) <= EPS
    assert abs(common_density(ProbPair(0.1, 0.9)) - 0.5) <= EPS


def test_common_density_closed_form_on_diagonal():
    for p in grid01(9):
        expect = p * p / (p * p + (1.0 - p) * (1.0 - p))
        assert abs(common_density(ProbPair(p, p)) - expect) <= 1e-15


def test_joint_base_matches_diagonal_closed_form():
    # for p1 = p2 = p the joint cost at the common density is 1/(p^2 + (1-p)^2)
    for p in grid01(9):
        fam = cost_family(ProbPair(p, p))
        got = fam.joint(fam.common_density)
        expect = 1.0 / (p * p + (1.0 - p) * (1.0 - p))
        assert abs(got - expect) <= 1e-12 * expect


def test_side_costs_are_one_at_their_natural_densities():
    for p1, p2 in [(0.5, 0.5), (0.3, 0.6), (0.8, 0.2), (0.55, 0.45)]:
        fam = cost_family(ProbPair(p1, p2))
        assert fam.log_first(p1) == 0.0
        assert fam.log_second(p2) == 0.0


def test_joint_cost_minimum_is_match_probability_reciprocal():
    # min over p of the joint cost is 1/(p1 p2 + (1-p1)(1-p2)), at the common density
    for p1, p2 in [(0.5, 0.5), (0.3, 0.6), (0.8, 0.2), (0.55, 0.45)]:
        fam = cost_family(ProbPair(p1, p2))
        match = p1 * p2 + (1.0 - p1) * (1.0 - p2)
        v = fam.log_joint(fam.common_density)
        assert abs(v - (-math.log(match))) <= 1e-14
        for p in grid01(30):
            assert fam.log_joint(p) >= v - 1e-14


def test_base_exceeds_one_everywhere():
    for p1 in grid01(50):
        for p2 in grid01(50):
            assert containment_base(ProbPair(p1, p2)) > 1.0


def test_envelope_is_midpoint_convex():
    key = Seed(31).key()
    fams = [cost_family(ProbPair(0.3, 0.6)), cost_family(ProbPair(0.7, 0.2))]
    for fam in fams:
        for i in range(200):
            x = 0.01 + 0.98 * uniform(key, 2 * i)
            y = 0.01 + 0.98 * uniform(key, 2 * i + 1)
            mid = 0.5 * (x + y)
            lhs = fam.log_envelope(mid)
            rhs = 0.5 * (fam.log_envelope(x) + fam.log_envelope(y))
            assert lhs <= rhs + 1e-12


# --------------------------------------------------------- implicit solver


def test_critical_size_pinned_point():
    assert abs(critical_size(2.0, 20.0 / math.e) - 5.0) <= 1e-9


def test_critical_size_residuals_on_random_inputs():
    key = Seed(17).key()
    for i in range(1000):
        b = 1.0 + 9.0 * uniform(key, 2 * i)
        N = 10.0 ** (1.0 + 11.0 * uniform(key, 2 * i + 1))
        x = critical_size(b, N)
        residual = x * b ** ((x - 1.0) / 2.0) - math.e * N
        assert abs(residual) <= 1e-9 * math.e * N


def test_critical_size_degenerate_base():
    assert critical_size(1.0, 100.0) == math.e * 100.0


def test_asymptotic_gap_shrinks():
    gaps = [
        abs(critical_size(2.0, 10.0**k) - critical_size_asymptotic(2.0, 10.0**k))
        for k in (6, 9, 12)
    ]
    assert gaps[0] > gaps[1] > gaps[2]


def test_critical_size_rejects_bad_base():
    with pytest.raises(DomainError):
        critical_size(0.99, 100.0)


# ----------------------------------------------------- threshold quantities


def test_threshold_report_pinned_values():
    rep = threshold_report(ProbPair(0.5, 0.3), 100)
    assert abs(rep.a - 2.182178902359924) <= 1e-14
    assert abs(rep.n_star - 12.803227707491892) <= 1e-11
    assert abs(rep.sigma2 - 0.589511708) <= 1e-9
    assert abs(rep.psi - (-1.0858284469757378)) <= 1e-13
    assert abs(rep.eps_N - 0.5064476480324351) <= 1e-14


def test_threshold_location_matches_base():
    for p1, p2, N in [(0.5, 0.3, 100), (0.2, 0.6, 1000), (0.5, 0.5, 150)]:
        pp = ProbPair(p1, p2)
        a = containment_base(pp)
        expect = 2.0 * math.log(N) / math.log(a) + 1.0
        assert abs(threshold_location(pp, N) - expect) <= 1e-10


def test_threshold_offset_centers_on_location():
    pp = ProbPair(0.5, 0.3)
    n_star = threshold_location(pp, 100)
    assert abs(threshold_offset(13, pp, 100) - (13 - n_star)) <= 1e-12
    assert abs(threshold_offset(13, pp, 100) - 0.19677229250810768) <= 1e-12


def test_window_shrinks_slowly():
    w100 = threshold_window(100)
    w6 = threshold_window(10**6)
    w12 = threshold_window(10**12)
    assert w100 > w6 > w12 > 0.0
    assert abs(w100 - (math.log(math.log(100))) ** 2 / math.log(100)) <= 1e-15


def test_squashed_normal_cdf_shape():
    mu, s2 = -0.196772293, 0.589511708
    assert squashed_normal_cdf(-1e-9, mu, s2) == 0.0
    # mu/s2 are the 9-digit rounded parameters, which shifts the atom ~1e-10
    atom = squashed_normal_cdf(0.0, mu, s2)
    assert abs(atom - 0.6011333666368341) <= 2e-9
    assert squashed_normal_cdf(10.0, mu, s2) > 0.999999
    xs = [0.1 * i for i in range(40)]
    cdf = [squashed_normal_cdf(x, mu, s2) for x in xs]
    assert all(a <= b for a, b in zip(cdf, cdf[1:]))


def test_containment_limit_is_decreasing_profile():
    pp = ProbPair(0.5, 0.3)
    cs = [-3.0 + 0.25 * i for i in range(25)]
    fs = [containment_limit(pp, c) for c in cs]
    assert all(a >= b for a, b in zip(fs, fs[1:]))
    assert fs[0] > 0.99 and fs[-1] < 0.01


# -------------------------------------------------------------- copy counts


def test_poisson_copy_mean_exact_rational():
    # (N)_n * 2^{-C(n,2)} carried out in exact arithmetic
    expect = Fraction(1)
    for i in range(10):
        expect *= 30 - i
    expect /= Fraction(2) ** 45
    got = poisson_copy_mean(30, 10)
    assert got == float(expect)
    assert abs(got - 3.098743673945137) <= 1e-15


def test_poisson_copy_mean_extremes():
    assert poisson_copy_mean(10**6, 2) > 0.0
    # pair exponent crushes the falling factorial: mean underflows to 0
    assert poisson_copy_mean(10**9, 10**8) == 0.0
    # tiny pattern in an astronomically large target overflows to inf
    assert math.isinf(poisson_copy_mean(10**200, 2))


def test_log_expected_copies_small_case():
    # N=6, n=3, m=2, p=0.4: ln( (6*5*4/aut) * p^2 * (1-p)^1 )
    expect = math.log((6 * 5 * 4 / 2) * 0.4**2 * 0.6)
    got = log_expected_copies(6, 3, 2, 0.4, 2)
    assert abs(got - expect) <= 1e-12


# ------------------------------------------------------------- region logic


def test_region_pinned_pair_and_swap():
    region, p0, amb = classify_region(ProbPair(0.5, 0.05))
    assert region == "B1" and not amb
    assert abs(p0 - 0.10436267675981982) <= 1e-10
    region_t, p0_t, _ = classify_region(ProbPair(0.05, 0.5))
    assert region_t == "B2"
    assert abs(p0_t - p0) <= 1e-10


def test_region_diagonal_is_joint():
    for p in grid01(19):
        region, p0, _ = classify_region(ProbPair(p, p))
        assert region == "A"


def test_region_swap_symmetry_grid():
    for p1 in grid01(12):
        for p2 in grid01(12):
            r, _, _ = classify_region(ProbPair(p1, p2))
            rt, _, _ = classify_region(ProbPair(p2, p1))
            assert {r, rt} in ({"A"}, {"B1", "B2"}) or (r == rt == "A")


def test_mcis_location_joint_region_pinned():
    rep = mcis_location(ProbPair(0.5, 0.5), 1000)
    assert rep.region == "A"
    assert rep.p_opt == 0.5
    assert abs(rep.n_N - 33.11456052769472) <= 1e-9
    assert abs(rep.n_N - joint_critical_size(ProbPair(0.5, 0.5), 0.5, 1000)) <= 1e-6
    assert (rep.interval_lo, rep.interval_hi) == (32, 33)
    assert abs(rep.eps_N - 0.54071337456006) <= 1e-14
    assert rep.x1 == rep.x2 == math.e * 1000


def test_mcis_location_side_region_pinned_and_swap():
    rep = mcis_location(ProbPair(0.5, 0.05), 1000)
    assert rep.region == "B1"
    assert abs(rep.p_opt - 0.13477875205261203) <= 1e-8
    assert abs(rep.n_N - 31.03933816913548) <= 1e-8
    swapped = mcis_location(ProbPair(0.05, 0.5), 1000)
    assert swapped.region == "B2"
    assert abs(swapped.n_N - rep.n_N) <= 1e-8
    assert abs(swapped.p_opt - rep.p_opt) <= 1e-8


def test_mcis_location_requires_moderate_size():
    with pytest.raises(DomainError):
        mcis_location(ProbPair(0.5, 0.5), 15)


def test_two_point_interval_is_floor_pair():
    for p1, p2, N in [(0.5, 0.5, 1000), (0.5, 0.05, 1000), (0.3, 0.7, 800)]:
        pp = ProbPair(p1, p2)
        rep = mcis_location(pp, N)
        lo, hi = two_point_interval(pp, N)
        assert (lo, hi) == (rep.interval_lo, rep.interval_hi)
        assert lo == math.floor(rep.n_N - rep.eps_N)
        assert hi == math.floor(rep.n_N + rep.eps_N)


def test_envelope_minimizer_beats_neighbors():
    for pair in [(0.5, 0.05), (0.3, 0.6), (0.9, 0.2)]:
        pp = ProbPair(*pair)
        fam = cost_family(pp)
        p = envelope_minimizer(pp)
        v = fam.log_envelope(p)
        assert v <= fam.log_envelope(min(p + 1e-4, 0.999999)) + 1e-12
        assert v <= fam.log_envelope(max(p - 1e-4, 1e-6)) + 1e-12


# ----------------------------------------------------- fixed-size forecasts


def test_forecast_pinned_indeterminate():
    verdict = predict_fixed_pattern_containment(13, 39, 100, ProbPair(0.5, 0.3))
    assert verdict is ContainmentForecast.INDETERMINATE


def test_forecast_matches_inequalities():
    pp = ProbPair(0.5, 0.3)
    rep = threshold_report(pp, 100)
    for n in (6, 10, 13, 16, 20):
        for m in range(0, math.comb(n, 2) + 1, 3):
            verdict = predict_fixed_pattern_containment(n, m, 100, pp)
            score = rep.psi * edge_deviation(n, m, 0.5) - threshold_offset(n, pp, 100)
            if score >= rep.eps_N:
                assert verdict is ContainmentForecast.ONE_WHP
            elif score <= -rep.eps_N:
                assert verdict is ContainmentForecast.ZERO_WHP
            else:
                assert verdict is ContainmentForecast.INDETERMINATE


def test_forecast_covers_all_three_verdicts():
    pp = ProbPair(0.5, 0.3)
    seen = set()
    for n in range(4, 22):
        for m in range(0, math.comb(n, 2) + 1):
            seen.add(predict_fixed_pattern_containment(n, m, 100, pp))
    assert seen == {
        ContainmentForecast.ONE_WHP,
        ContainmentForecast.ZERO_WHP,
        ContainmentForecast.INDETERMINATE,
    }
