"""Bitset graphs and seeded random-graph models.

Graphs are undirected, simple, on vertex set {0, ..., n-1}; each adjacency row
is a Python int used as a bitmask, which keeps induced-subgraph and neighbor
operations single bitwise instructions. The two generators are the standard
models: G(n, p) flips one seeded uniform per vertex pair (pairs visited in
lexicographic order), and G(n, m) picks a uniformly random m-subset of pairs
via a partial Fisher-Yates shuffle driven by rejection-sampled draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DomainError
from .rng import Seed, randbelow, uniforms

__all__ = [
    "Graph",
    "ProbPair",
    "Seed",
    "gen_gnp",
    "gen_gnm",
    "induced_subgraph",
    "relabel",
    "edge_count",
    "to_text",
    "from_text",
]


@dataclass(frozen=True)
class ProbPair:
    """An (edge probability for the pattern, edge probability for the target) pair.

    Both probabilities must lie strictly inside (0, 1); the analytic
    quantities built from them are undefined at the endpoints.
    """

    p1: float
    p2: float

    def __post_init__(self):
        for name, value in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 < value < 1.0:
                raise DomainError(f"{name} must be in the open interval (0, 1), got {value}")

    def swapped(self) -> "ProbPair":
        return ProbPair(self.p2, self.p1)


class Graph:
    """Immutable undirected simple graph with int-bitmask adjacency rows."""

    __slots__ = ("n", "adj", "_words")

    def __init__(self, n: int, adj: tuple[int, ...]):
        self.n = n
        self.adj = adj
        self._words = None

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise DomainError(f"bad edge ({u}, {v}) for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """Edge list sorted lexicographically with u < v."""
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1)
            v = u + 1
            while row:
                if row & 1:
                    out.append((u, v))
                row >>= 1
                v += 1
        return out

    def words(self) -> np.ndarray:
        """Adjacency rows as a (n, ceil(n/64)) uint64 matrix, cached."""
        if self._words is None:
            w = max(1, (self.n + 63) // 64)
            mat = np.zeros((self.n, w), dtype=np.uint64)
            for i, row in enumerate(self.adj):
                mat[i] = np.frombuffer(row.to_bytes(w * 8, "little"), dtype=np.uint64)
            self._words = mat
        return self._words

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={edge_count(self)})"


def edge_count(g: Graph) -> int:
    return sum(row.bit_count() for row in g.adj) // 2


def _graph_from_pair_bits(n: int, bits: np.ndarray) -> Graph:
    """Assemble a Graph from C(n,2) booleans in lexicographic pair order."""
    if n <= 1:
        return Graph(n, tuple([0] * n))
    mat = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    mat[iu] = bits
    mat |= mat.T
    packed = np.packbits(mat, axis=1, bitorder="little")
    adj = tuple(int.from_bytes(packed[i].tobytes(), "little") for i in range(n))
    return Graph(n, adj)


def gen_gnp(n: int, p: float, seed: Seed) -> Graph:
    """Binomial random graph: each pair is an edge independently with probability p.

    Pair k in lexicographic (i, j) order consumes uniform draw k of the seed's
    stream, so the graph is a pure function of (n, p, seed).
    """
    if n < 0:
        raise DomainError("vertex count must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability must be in [0, 1], got {p}")
    k = comb(n, 2)
    bits = uniforms(seed.key(), k) < p
    return _graph_from_pair_bits(n, bits)


def gen_gnm(n: int, m: int, seed: Seed) -> Graph:
    """Uniform random graph with exactly m edges.

    A partial Fisher-Yates shuffle of the lexicographic pair list selects a
    uniformly random m-subset; index draws are rejection-sampled so the
    selection is exactly uniform. Intended for modest n (the pair list is
    materialized).
    """
    if n < 0:
        raise DomainError("vertex count must be non-negative")
    k = comb(n, 2)
    if not 0 <= m <= k:
        raise DomainError(f"edge count must be in [0, {k}] for n={n}, got {m}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    key = seed.key()
    counter = 0
    for t in range(m):
        r, counter = randbelow(key, counter, k - t)
        pairs[t], pairs[t + r] = pairs[t + r], pairs[t]
    return Graph.from_edges(n, pairs[:m])


def induced_subgraph(g: Graph, vertices) -> Graph:
    """Subgraph induced on the given distinct vertices, relabeled 0..k-1 in the given order."""
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        raise DomainError("induced subgraph vertices must be distinct")
    for v in vs:
        if not 0 <= v < g.n:
            raise DomainError(f"vertex {v} out of range for n={g.n}")
    k = len(vs)
    rows = [0] * k
    for a, u in enumerate(vs):
        src = g.adj[u]
        r = 0
        for b, v in enumerate(vs):
            if b != a and (src >> v) & 1:
                r |= 1 << b
        rows[a] = r
    return Graph(k, tuple(rows))


def relabel(g: Graph, perm) -> Graph:
    """Image of g under a permutation: vertex v of g becomes perm[v]."""
    pv = list(perm)
    if sorted(pv) != list(range(g.n)):
        raise DomainError("relabel requires a permutation of range(n)")
    rows = [0] * g.n
    for u in range(g.n):
        src = g.adj[u]
        v = 0
        r = 0
        while src >> v:
            if (src >> v) & 1:
                r |= 1 << pv[v]
            v += 1
        rows[pv[u]] = r
    return Graph(g.n, tuple(rows))


def to_text(g: Graph) -> str:
    """Canonical text form: 'n m' header then one 'u v' line per edge, u < v, sorted."""
    lines = [f"{g.n} {edge_count(g)}"]
    for u, v in g.edges():
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    """Parse the canonical text form; rejects malformed or unsorted input."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty graph text")
    head = lines[0].split()
    if len(head) != 2:
        raise DomainError(f"bad header {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise DomainError(f"bad header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise DomainError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise DomainError(f"bad edge line {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise DomainError(f"edge lines must have u < v, got {ln!r}")
        edges.append((u, v))
    if edges != sorted(edges):
        raise DomainError("edge lines must be sorted lexicographically")
    if len(set(edges)) != len(edges):
        raise DomainError("duplicate edge")
    return Graph.from_edges(n, edges)
