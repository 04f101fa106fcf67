"""Exact decision procedures for three pseudorandomness properties.

A graph is subset-asymmetric when every induced subgraph above a size
threshold has a trivial automorphism group; edge-regular when every vertex
subset carries close to its proportional share of the edges; and
density-typical when its total edge count sits near a stated density. Each
check is exhaustive over the quantified subsets within a documented size cap,
so verdicts are exact, and every negative verdict carries a re-checkable
witness subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels as k
from .errors import DomainError
from .graphs import Graph, edge_count, gen_gnm, gen_gnp
from .montecarlo import EstimateReport, _map_trials, wilson_interval
from .rng import Seed
from .solver import is_rigid_subset

__all__ = [
    "GraphModel",
    "PropertyVerdict",
    "check_A",
    "check_E",
    "check_F",
    "estimate_property_rate",
]


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of a property check; witness is a violating vertex subset."""

    holds: bool
    witness: tuple[int, ...] | None = None


def check_A(g: Graph) -> PropertyVerdict:
    """Every induced subgraph on at least ceil(n - n^(2/3)) vertices is asymmetric.

    Subset sizes are scanned from n downward with early exit on the first
    symmetric induced subgraph; violations concentrate at small sizes, so the
    scan order shapes witness quality, not correctness. The fractional size
    bound is resolved with ceil. Exact enumeration caps n at 40.
    """
    if g.n > 40:
        raise DomainError(
            f"exact subset-asymmetry check is capped at 40 vertices, got {g.n}"
        )
    threshold = max(math.ceil(g.n - g.n ** (2.0 / 3.0)), 1) if g.n else 1
    for size in range(g.n, threshold - 1, -1):
        for sub in combinations(range(g.n), size):
            if not is_rigid_subset(g, sub):
                return PropertyVerdict(False, sub)
    return PropertyVerdict(True, None)


def _mask_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def check_E(g: Graph, m: int) -> PropertyVerdict:
    """Every nonempty vertex subset induces its proportional share of m edges.

    The allowed deviation for a subset of size s is n^(2/3) * (n - s), ties
    inclusive. A Gray-code walk over all subsets tracks per-size extreme edge
    counts; the deviation test cross-multiplies by the pair count so the
    observed side stays in exact integers against the double-precision bound.
    Hard cap n <= 24.
    """
    if g.n > 24:
        raise DomainError(
            f"exhaustive subset scan is capped at 24 vertices, got {g.n}"
        )
    if m != edge_count(g):
        raise DomainError(f"stated edge count {m} != actual {edge_count(g)}")
    n = g.n
    if n == 0:
        return PropertyVerdict(True, None)
    pairs = math.comb(n, 2)
    rows = np.ascontiguousarray(g.words()[:, 0])
    min_e, max_e, min_mask, max_mask = k.subset_scan(rows, n)
    unit = n ** (2.0 / 3.0) * pairs
    for size in range(n, 0, -1):
        share = math.comb(size, 2) * m
        allowance = unit * (n - size)
        if int(max_e[size]) * pairs - share > allowance:
            return PropertyVerdict(False, _mask_vertices(int(max_mask[size])))
        if share - int(min_e[size]) * pairs > allowance:
            return PropertyVerdict(False, _mask_vertices(int(min_mask[size])))
    return PropertyVerdict(True, None)


def check_F(g: Graph, p: float) -> PropertyVerdict:
    """The total edge count deviates from its mean at density p by at most n^(4/3)."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"density must be in [0, 1], got {p}")
    deviation = abs(edge_count(g) - math.comb(g.n, 2) * p)
    if deviation <= g.n ** (4.0 / 3.0):
        return PropertyVerdict(True, None)
    return PropertyVerdict(False, tuple(range(g.n)))


@dataclass(frozen=True)
class GraphModel:
    """Sampling model: independent edges at density p, or a uniform m-edge graph."""

    kind: str
    n: int
    p: float | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind not in ("gnp", "gnm"):
            raise DomainError(f"model kind must be gnp or gnm, got {self.kind!r}")
        if self.n < 0:
            raise DomainError(f"graph size must be non-negative, got {self.n}")
        if self.kind == "gnp" and self.p is None:
            raise DomainError("gnp model needs an edge probability")
        if self.kind == "gnm" and self.m is None:
            raise DomainError("gnm model needs an edge count")

    def sample(self, seed: Seed) -> Graph:
        if self.kind == "gnp":
            return gen_gnp(self.n, self.p, seed)
        return gen_gnm(self.n, self.m, seed)

    def density(self) -> float:
        if self.kind == "gnp":
            return self.p
        return self.m / math.comb(self.n, 2) if self.n >= 2 else 0.0


_PROPERTIES = {
    "A": ("A",),
    "E": ("E",),
    "F": ("F",),
    "AE": ("A", "E"),
    "AF": ("A", "F"),
}


def _property_trial(arg) -> bool:
    parts, model, seed, t = arg
    g = model.sample(seed.child(t, 0))
    for part in parts:
        if part == "A":
            ok = check_A(g).holds
        elif part == "E":
            ok = check_E(g, edge_count(g)).holds
        else:
            ok = check_F(g, model.density()).holds
        if not ok:
            return False
    return True


def estimate_property_rate(
    property: str,
    model: GraphModel,
    trials: int,
    seed: Seed,
    workers: int = 1,
) -> EstimateReport:
    """Fraction of sampled graphs satisfying the property, with Wilson bounds.

    property is one of A, E, F, AE, AF; the conjunctions check the asymmetry
    part first since it fails fastest. The edge-regularity part always tests
    against the sampled graph's own edge count; the density part uses the
    model's density. Checks are exhaustive, so there are no timeouts.
    """
    if property not in _PROPERTIES:
        raise DomainError(
            f"property must be one of {sorted(_PROPERTIES)}, got {property!r}"
        )
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials}")
    parts = _PROPERTIES[property]
    if "A" in parts and model.n > 40:
        raise DomainError(
            f"exact subset-asymmetry check is capped at 40 vertices, got {model.n}"
        )
    if "E" in parts and model.n > 24:
        raise DomainError(
            f"exhaustive subset scan is capped at 24 vertices, got {model.n}"
        )
    args = [(parts, model, seed, t) for t in range(trials)]
    hits = _map_trials(_property_trial, args, workers)
    yes = sum(hits)
    lo, hi = wilson_interval(yes, trials)
    return EstimateReport(yes / trials, lo, hi, trials, 0, seed)
