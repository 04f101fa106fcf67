"""Graph container, samplers, and text round-trip."""

import math

import pytest

from rgiso.errors import DomainError
from rgiso.graphs import (
    Graph,
    ProbPair,
    edge_count,
    from_text,
    gen_gnm,
    gen_gnp,
    induced_subgraph,
    relabel,
    to_text,
)
from rgiso.rng import Seed


def test_probpair_validates_open_interval():
    ProbPair(0.3, 0.7)
    for bad in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(DomainError):
            ProbPair(bad, 0.5)
        with pytest.raises(DomainError):
            ProbPair(0.5, bad)


def test_probpair_swapped():
    pp = ProbPair(0.2, 0.9)
    assert pp.swapped() == ProbPair(0.9, 0.2)


def test_from_edges_and_edge_count():
    g = Graph.from_edges(4, [(0, 1), (2, 3), (1, 2)])
    assert g.n == 4
    assert edge_count(g) == 3
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)


def test_gnp_deterministic_and_extreme_densities():
    a = gen_gnp(30, 0.4, Seed(5))
    b = gen_gnp(30, 0.4, Seed(5))
    assert to_text(a) == to_text(b)
    assert edge_count(gen_gnp(20, 0.0, Seed(1))) == 0
    assert edge_count(gen_gnp(20, 1.0, Seed(1))) == math.comb(20, 2)


def test_gnp_edge_rate_near_p():
    total = sum(edge_count(gen_gnp(40, 0.3, Seed(100 + t))) for t in range(30))
    rate = total / (30 * math.comb(40, 2))
    assert abs(rate - 0.3) < 0.02


def test_gnm_exact_edge_count_and_determinism():
    g = gen_gnm(25, 117, Seed(8))
    assert edge_count(g) == 117
    assert to_text(g) == to_text(gen_gnm(25, 117, Seed(8)))
    assert to_text(g) != to_text(gen_gnm(25, 117, Seed(9)))
    with pytest.raises(DomainError):
        gen_gnm(5, 11, Seed(0))


def test_induced_subgraph_keeps_exactly_internal_edges():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
    h = induced_subgraph(g, (0, 1, 2, 5))
    assert h.n == 4
    # vertex order defines the relabeling: 0->0, 1->1, 2->2, 5->3
    assert h.has_edge(0, 1) and h.has_edge(1, 2) and h.has_edge(0, 3)
    assert not h.has_edge(2, 3)
    assert edge_count(h) == 3


def test_relabel_is_isomorphic_permutation():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    perm = (4, 3, 2, 1, 0)
    h = relabel(g, perm)
    assert edge_count(h) == edge_count(g)
    assert h.has_edge(4, 3) and h.has_edge(3, 2) and h.has_edge(1, 0)


def test_text_round_trip():
    g = gen_gnp(12, 0.5, Seed(77))
    assert to_text(from_text(to_text(g))) == to_text(g)
    text = to_text(g)
    assert text.splitlines()[0] == f"12 {edge_count(g)}"


def test_from_text_rejects_malformed():
    for bad in ("", "3", "3 1\n0", "3 1\n0 3", "3 2\n0 1", "3 1\n0 1\n1 2"):
        with pytest.raises(DomainError):
            from_text(bad)
