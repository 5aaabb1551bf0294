"""Host-graph families: projective-plane incidence graphs, G(n,p), and small fixtures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph

__all__ = [
    "GnpSpec",
    "projective_plane_graph",
    "gnp_graph",
    "cycle_graph",
    "path_graph",
    "complete_graph",
    "complete_bipartite_graph",
    "fixture_graph",
]


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _projective_triples(q: int) -> np.ndarray:
    """Canonical representatives of the projective points of F_q^3.

    Each 1-dimensional subspace is represented by its unique scaling with
    first nonzero coordinate equal to 1; representatives are listed in
    lexicographic order, which fixes the vertex numbering.
    """
    out = [(0, 0, 1)]
    out += [(0, 1, c) for c in range(q)]
    out += [(1, b, c) for b in range(q) for c in range(q)]
    out.sort()
    return np.array(out, dtype=np.int64)


def projective_plane_graph(q: int) -> Graph:
    """Point-line incidence graph of the projective plane of prime order q.

    Vertices 0..q^2+q are the projective points, the rest are the lines
    (each line is the set of points orthogonal to a fixed triple mod q).
    The graph is bipartite, (q+1)-regular, has 2(q^2+q+1) vertices and
    contains no 4-cycle. Only prime q is supported: prime-power orders
    would need extension-field arithmetic for no extra experimental value.
    """
    if not _is_prime(q):
        raise ValueError("q must be prime")
    triples = _projective_triples(q)
    count = triples.shape[0]
    edges = []
    chunk = 512
    for lo in range(0, count, chunk):
        block = triples[lo:lo + chunk]
        prod = triples @ block.T
        np.mod(prod, q, out=prod)
        pts, lns = np.nonzero(prod == 0)
        edges.append(np.stack([pts, lns + lo + count], axis=1))
    g = Graph.from_edges(2 * count, np.concatenate(edges))
    return g


@dataclass(frozen=True)
class GnpSpec:
    """Parameters of a seeded Erdos-Renyi draw."""

    n: int
    p: float
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


def gnp_graph(spec: GnpSpec) -> Graph:
    """Sample G(n, p): every unordered pair is an edge independently with probability p.

    Sampling runs in O(m) expected time by geometric skipping: unordered
    pairs (i, j), i < j, are indexed lexicographically by
    t in [0, n(n-1)/2), and the sampled indices are the running sums of a
    Geometric(p) stream (support 1, 2, ...) drawn from
    numpy.random.Generator(PCG64(seed)), truncated at the last index. The
    edge set is a prefix of that stream, so it does not depend on internal
    batching and is reproducible from the seed alone.
    """
    n, p = spec.n, spec.p
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.from_edges(n, np.zeros((0, 2), dtype=np.int64))
    rng = np.random.default_rng(np.random.PCG64(spec.seed))
    positions = []
    cur = -1
    batch = max(1024, int(1.2 * p * total) + 16)
    while cur < total - 1:
        skips = rng.geometric(p, size=batch)
        # a draw that overflows int64 comes back nonpositive; any skip past
        # the final index terminates sampling, so clamp both cases to total
        skips = np.where(skips <= 0, total, np.minimum(skips, total))
        pos = cur + np.cumsum(skips)
        keep = pos[pos <= total - 1]
        positions.append(keep)
        if keep.size < pos.size:
            break
        cur = int(pos[-1])
        remaining = total - 1 - cur
        batch = max(1024, int(1.2 * p * remaining) + 16)
    idx = np.concatenate(positions) if positions else np.zeros(0, dtype=np.int64)
    # row i holds pairs (i, j), j > i, starting at linear index i(2n-i-1)/2
    i_range = np.arange(n, dtype=np.int64)
    row_starts = i_range * (2 * n - i_range - 1) // 2
    rows = np.searchsorted(row_starts, idx, side="right") - 1
    cols = idx - row_starts[rows] + rows + 1
    return Graph.from_edges(n, np.stack([rows, cols], axis=1))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return Graph.from_edges(n, edges)


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs at least 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs at least 1 vertex")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("both parts need at least 1 vertex")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def fixture_graph(kind: str, **params) -> Graph:
    """Dispatch to one of the named fixture constructors (CLI plumbing)."""
    if kind == "cycle":
        return cycle_graph(params["n"])
    if kind == "path":
        return path_graph(params["n"])
    if kind == "complete":
        return complete_graph(params["n"])
    if kind == "complete_bipartite":
        return complete_bipartite_graph(params["a"], params["b"])
    raise ValueError(f"unknown fixture kind: {kind!r}")
