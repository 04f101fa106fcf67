"""Exact search routines: induced-subgraph containment and counting, automorphism
counting, rigidity tests, maximum common induced subgraphs, canonical forms.

All searches are deterministic for fixed inputs. Budgets cap the number of
search nodes and optionally wall-clock time; node caps are the reproducible
knob (reruns visit identical trees), the wall clock is a safety net.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels as k
from .errors import DomainError
from .graphs import Graph

_NO_NODE_CAP = 1 << 62
_NO_COUNT_CAP = 1 << 62


@dataclass(frozen=True)
class SearchBudget:
    """Limits for one search: max_nodes caps branch nodes tried, wall_ms caps
    elapsed milliseconds. None means unlimited."""

    max_nodes: int | None = None
    wall_ms: float | None = None

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes < 1:
            raise DomainError("max_nodes must be positive")
        if self.wall_ms is not None and self.wall_ms <= 0:
            raise DomainError("wall_ms must be positive")

    def _node_cap(self) -> int:
        return self.max_nodes if self.max_nodes is not None else _NO_NODE_CAP

    def _deadline(self) -> float:
        if self.wall_ms is None:
            return 0.0
        return time.monotonic() + self.wall_ms / 1000.0


class Outcome(Enum):
    YES = "yes"
    NO = "no"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class ContainsResult:
    outcome: Outcome
    nodes: int


@dataclass(frozen=True)
class CountResult:
    count: int | None  # None when the search timed out
    nodes: int
    timed_out: bool


@dataclass(frozen=True)
class McisResult:
    size: int
    exact: bool  # False: budget hit, size is a lower bound
    nodes: int


def _bool_matrix(g: Graph) -> np.ndarray:
    m = np.zeros((g.n, g.n), np.uint8)
    for v in range(g.n):
        row = g.adj[v]
        while row:
            low = row & -row
            m[v, low.bit_length() - 1] = 1
            row ^= low
    return m


def _pack_rows(mat: np.ndarray) -> np.ndarray:
    """Pack a boolean (r, c) matrix into little-endian uint64 rows."""
    r, c = mat.shape
    w = max(1, (c + 63) // 64)
    packed = np.packbits(mat, axis=1, bitorder="little")
    out = np.zeros((r, w * 8), np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view(np.uint64)


def _degree_domains(pattern: Graph, target: Graph) -> np.ndarray:
    """Initial candidate sets: image degree must dominate pattern degree in
    both the graph and its complement."""
    pdeg = np.array([pattern.degree(v) for v in range(pattern.n)], np.int64)
    tdeg = np.array([target.degree(v) for v in range(target.n)], np.int64)
    pn, tn = pattern.n, target.n
    ok = (tdeg[None, :] >= pdeg[:, None]) & (
        (tn - 1) - tdeg[None, :] >= (pn - 1) - pdeg[:, None]
    )
    return _pack_rows(ok)


def _color_domains(g: Graph) -> np.ndarray:
    """Candidate sets for automorphism search: equal refinement colors."""
    colors, _ = _wl(g)
    same = colors[:, None] == colors[None, :]
    return _pack_rows(same)


def _full_mask(n: int) -> np.ndarray:
    w = max(1, (n + 63) // 64)
    mask = np.zeros(w, np.uint64)
    for v in range(n):
        mask[v >> 6] |= np.uint64(1) << np.uint64(v & 63)
    return mask


def _wl(g: Graph, lmask: np.ndarray | None = None):
    if lmask is None:
        lmask = _full_mask(g.n)
    return k.wl_colors(g.words(), g.n, lmask)


def _embedding_search(
    pattern: Graph,
    target: Graph,
    dom0: np.ndarray,
    count_limit: int,
    budget: SearchBudget | None,
):
    budget = budget or SearchBudget()
    status, nodes, count = k.si_count(
        _bool_matrix(pattern),
        pattern.n,
        target.words(),
        target.n,
        dom0,
        count_limit,
        budget._node_cap(),
        budget._deadline(),
    )
    return int(status), int(nodes), int(count)


def contains_induced(
    pattern: Graph, target: Graph, budget: SearchBudget | None = None
) -> ContainsResult:
    """Decide whether target has an induced subgraph isomorphic to pattern."""
    if pattern.n == 0:
        return ContainsResult(Outcome.YES, 0)
    if pattern.n > target.n:
        return ContainsResult(Outcome.NO, 0)
    dom0 = _degree_domains(pattern, target)
    status, nodes, count = _embedding_search(pattern, target, dom0, 1, budget)
    if status == k.STATUS_TIMEOUT:
        return ContainsResult(Outcome.TIMEOUT, nodes)
    return ContainsResult(Outcome.YES if count > 0 else Outcome.NO, nodes)


def count_induced_embeddings(
    pattern: Graph, target: Graph, budget: SearchBudget | None = None
) -> CountResult:
    """Count injective maps preserving edges and non-edges."""
    if pattern.n == 0:
        return CountResult(1, 0, False)
    if pattern.n > target.n:
        return CountResult(0, 0, False)
    dom0 = _degree_domains(pattern, target)
    status, nodes, count = _embedding_search(pattern, target, dom0, _NO_COUNT_CAP, budget)
    if status == k.STATUS_TIMEOUT:
        return CountResult(None, nodes, True)
    return CountResult(count, nodes, False)


def count_induced_subsets(
    pattern: Graph, target: Graph, budget: SearchBudget | None = None
) -> CountResult:
    """Count vertex subsets of target inducing a copy of pattern.

    Embedding count divided by the pattern's automorphism count; the division
    is exact by orbit counting and asserted.
    """
    emb = count_induced_embeddings(pattern, target, budget)
    if emb.timed_out:
        return emb
    aut = automorphism_count(pattern)
    assert emb.count % aut == 0, "embedding count not divisible by |Aut|"
    return CountResult(emb.count // aut, emb.nodes, False)


def automorphism_count(g: Graph) -> int:
    """Exact size of the automorphism group.

    Exact counting is limited to n <= 20 when the refinement partition is not
    discrete (the count itself stays within int64 there); is_asymmetric covers
    larger graphs.
    """
    if g.n <= 1:
        return 1
    colors, ncolors = _wl(g)
    if ncolors == g.n:
        return 1
    if g.n > 20:
        raise DomainError("exact automorphism counting requires n <= 20 here")
    dom0 = _color_domains(g)
    status, nodes, count = _embedding_search(g, g, dom0, _NO_COUNT_CAP, None)
    assert status == k.STATUS_EXHAUSTED
    return count


def is_asymmetric(g: Graph) -> bool:
    """True when the only automorphism is the identity."""
    if g.n <= 1:
        return True
    _, ncolors = _wl(g)
    if ncolors == g.n:
        return True
    dom0 = _color_domains(g)
    status, nodes, count = _embedding_search(g, g, dom0, 2, None)
    return count == 1


def is_rigid_subset(g: Graph, vertices: tuple[int, ...]) -> bool:
    """True when the induced subgraph on `vertices` is asymmetric.

    Runs refinement on the subset mask without materialising the subgraph;
    falls back to the exact decision only when the partition is not discrete.
    """
    nl = len(vertices)
    if nl <= 1:
        return True
    w = max(1, (g.n + 63) // 64)
    lmask = np.zeros(w, np.uint64)
    for v in vertices:
        lmask[v >> 6] |= np.uint64(1) << np.uint64(v & 63)
    _, ncolors = k.wl_colors(g.words(), g.n, lmask)
    if ncolors == nl:
        return True
    from .graphs import induced_subgraph

    return is_asymmetric(induced_subgraph(g, vertices))


def mcis_size(g1: Graph, g2: Graph, budget: SearchBudget | None = None) -> McisResult:
    res, _ = mcis_witness(g1, g2, budget)
    return res


def mcis_witness(
    g1: Graph, g2: Graph, budget: SearchBudget | None = None
) -> tuple[McisResult, list[tuple[int, int]]]:
    """Maximum common induced subgraph size plus one optimal vertex pairing.

    Pairs are (g1 vertex, g2 vertex); on timeout the pairing is the best found
    so far and size is a lower bound.
    """
    budget = budget or SearchBudget()
    swap = g1.n > g2.n
    a, b = (g2, g1) if swap else (g1, g2)
    if a.n == 0:
        return McisResult(0, True, 0), []
    best, status, nodes, bg, bh = k.mcis_search(
        a.words(), a.n, b.words(), b.n, budget._node_cap(), budget._deadline()
    )
    best = int(best)
    pairs = [(int(bg[i]), int(bh[i])) for i in range(best)]
    if swap:
        pairs = [(h, g) for (g, h) in pairs]
    pairs.sort()
    return McisResult(best, status != k.STATUS_TIMEOUT, int(nodes)), pairs


def canonical_form(g: Graph) -> bytes:
    """Canonical bytes: equal for isomorphic graphs, distinct otherwise (n <= 10)."""
    if g.n > 10:
        raise DomainError("canonical_form is exhaustive and limited to n <= 10")
    code = k.canonical_code(_bool_matrix(g), g.n)
    return bytes([g.n]) + int(code).to_bytes(8, "big")
