"""Exact property checks: hand-built graphs with known verdicts, witness audits."""

import math
from itertools import combinations

import pytest

from rgiso.errors import DomainError
from rgiso.graphs import Graph, edge_count, gen_gnp, induced_subgraph
from rgiso.pseudorandom import (
    GraphModel,
    check_A,
    check_E,
    check_F,
    estimate_property_rate,
)
from rgiso.rng import Seed
from rgiso.solver import automorphism_count, is_asymmetric


def complete(n):
    return Graph.from_edges(n, list(combinations(range(n), 2)))


# ------------------------------------------------------- subset asymmetry


def test_check_A_trivial_sizes():
    assert check_A(Graph.from_edges(0, [])).holds
    assert check_A(Graph.from_edges(1, [])).holds
    # a 2-vertex graph always has the swap automorphism
    verdict = check_A(Graph.from_edges(2, [(0, 1)]))
    assert not verdict.holds and verdict.witness == (0, 1)


def test_check_A_clique_fails_with_whole_vertex_set():
    verdict = check_A(complete(5))
    assert not verdict.holds
    assert verdict.witness == (0, 1, 2, 3, 4)


def test_check_A_asymmetric_graph_still_fails_on_subsets():
    # globally asymmetric, but a 5-subset is symmetric, and the property
    # quantifies over all induced subgraphs above the size cutoff
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 5)])
    assert is_asymmetric(g)
    verdict = check_A(g)
    assert not verdict.holds
    assert verdict.witness is not None
    assert not is_asymmetric(induced_subgraph(g, verdict.witness))
    size_floor = max(math.ceil(6 - 6 ** (2.0 / 3.0)), 1)
    assert len(verdict.witness) >= size_floor


def test_check_A_hexagonal_example():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2), (0, 3)])
    assert automorphism_count(g) == 2
    assert not check_A(g).holds


def test_check_A_cap():
    with pytest.raises(DomainError):
        check_A(Graph.from_edges(41, []))


# ---------------------------------------------------- edge equidistribution


def test_check_E_complete_graph_holds():
    g = complete(8)
    assert check_E(g, edge_count(g)).holds


def test_check_E_clique_plus_isolates_holds():
    # K4 with four isolated vertices: deviations stay inside the wide allowance
    g = Graph.from_edges(8, list(combinations(range(4), 2)))
    assert check_E(g, 6).holds


def test_check_E_star_violates_and_witness_rechecks():
    star = Graph.from_edges(16, [(0, i) for i in range(1, 16)])
    verdict = check_E(star, 15)
    assert not verdict.holds
    w = verdict.witness
    assert w is not None and len(w) >= 1
    s = len(w)
    n, m = 16, 15
    observed = edge_count(induced_subgraph(star, w))
    share = math.comb(s, 2) * m / math.comb(n, 2)
    allowance = n ** (2.0 / 3.0) * (n - s)
    assert abs(observed - share) > allowance


def test_check_E_validates_edge_count_and_cap():
    g = complete(4)
    with pytest.raises(DomainError):
        check_E(g, 5)
    with pytest.raises(DomainError):
        check_E(Graph.from_edges(25, []), 0)


def test_check_E_empty_graph():
    assert check_E(Graph.from_edges(0, []), 0).holds


# ------------------------------------------------------------ global density


def test_check_F_inclusive_densities():
    g = complete(10)
    assert check_F(g, 1.0).holds
    assert check_F(Graph.from_edges(10, []), 0.0).holds


def test_check_F_violation_names_every_vertex():
    g = complete(20)
    verdict = check_F(g, 0.1)
    assert not verdict.holds
    assert verdict.witness == tuple(range(20))
    # deviation really does exceed the allowance
    assert abs(edge_count(g) - math.comb(20, 2) * 0.1) > 20 ** (4.0 / 3.0)


def test_check_F_typical_random_graph_holds():
    for t in range(20):
        g = gen_gnp(30, 0.5, Seed(400 + t))
        assert check_F(g, 0.5).holds


def test_check_F_rejects_bad_density():
    with pytest.raises(DomainError):
        check_F(complete(3), 1.5)


# ------------------------------------------------------------ sampled rates


def test_graph_model_validation_and_density():
    with pytest.raises(DomainError):
        GraphModel("other", 5)
    with pytest.raises(DomainError):
        GraphModel("gnp", 5)
    with pytest.raises(DomainError):
        GraphModel("gnm", 5)
    assert GraphModel("gnp", 10, p=0.3).density() == 0.3
    assert GraphModel("gnm", 10, m=9).density() == 9 / 45


def test_graph_model_sampling_is_deterministic():
    model = GraphModel("gnm", 12, m=30)
    a = model.sample(Seed(5))
    b = model.sample(Seed(5))
    assert edge_count(a) == 30
    assert a.words().tobytes() == b.words().tobytes()


def test_estimate_property_rate_f_is_high_at_matching_density():
    rep = estimate_property_rate("F", GraphModel("gnp", 30, p=0.5), 50, Seed(2))
    assert rep.rate >= 0.9
    assert rep.trials == 50 and rep.timeouts == 0
    assert 0.0 <= rep.ci_lo <= rep.rate <= rep.ci_hi <= 1.0


def test_estimate_property_rate_a_is_zero_for_tiny_graphs():
    # 3-vertex graphs always carry a symmetric subset at the cutoff
    rep = estimate_property_rate("A", GraphModel("gnp", 3, p=0.5), 30, Seed(3))
    assert rep.rate == 0.0


def test_estimate_property_rate_validates():
    with pytest.raises(DomainError):
        estimate_property_rate("Z", GraphModel("gnp", 5, p=0.5), 10, Seed(0))
    with pytest.raises(DomainError):
        estimate_property_rate("A", GraphModel("gnp", 50, p=0.5), 10, Seed(0))
    with pytest.raises(DomainError):
        estimate_property_rate("E", GraphModel("gnp", 30, p=0.5), 10, Seed(0))
    with pytest.raises(DomainError):
        estimate_property_rate("F", GraphModel("gnp", 5, p=0.5), 0, Seed(0))


def test_combined_properties_are_conjunctions():
    # on a seed where F holds but A fails, AF must fail
    model = GraphModel("gnp", 8, p=0.5)
    a = estimate_property_rate("A", model, 40, Seed(6))
    f = estimate_property_rate("F", model, 40, Seed(6))
    af = estimate_property_rate("AF", model, 40, Seed(6))
    assert af.rate <= min(a.rate, f.rate) + 1e-12
