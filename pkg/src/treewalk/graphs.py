"""Immutable undirected simple graphs in compressed sparse adjacency form."""

from __future__ import annotations

from typing import Iterable

import numpy as np

__all__ = [
    "Graph",
    "NeighborCap",
    "min_degree",
    "make_neighbor_cap",
    "load_edge_list",
    "save_edge_list",
]


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Adjacency is stored as an offset array into a flat neighbor array; each
    per-vertex slice is strictly increasing. Instances are immutable after
    construction (the arrays are marked read-only) and safe to share across
    threads and forked workers.
    """

    __slots__ = ("vertex_count", "edge_count", "offsets", "neighbors", "_lists")

    def __init__(self, offsets: np.ndarray, neighbors: np.ndarray):
        offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        neighbors = np.ascontiguousarray(neighbors, dtype=np.int64)
        if offsets.ndim != 1 or offsets.size == 0 or offsets[0] != 0:
            raise ValueError("malformed offset array")
        if np.any(np.diff(offsets) < 0):
            raise ValueError("offsets must be nondecreasing")
        if neighbors.ndim != 1 or int(offsets[-1]) != neighbors.size:
            raise ValueError("offsets do not match neighbor array")
        if neighbors.size % 2 != 0:
            raise ValueError("total adjacency length must be even")
        offsets.setflags(write=False)
        neighbors.setflags(write=False)
        self.offsets = offsets
        self.neighbors = neighbors
        self.vertex_count = int(offsets.size - 1)
        self.edge_count = int(neighbors.size // 2)
        self._lists: tuple[list[int], ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph from an iterable of undirected edges.

        Edges may be given in either orientation; self-loops and duplicate
        edges are rejected.
        """
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be pairs")
        if n < 0:
            raise ValueError("negative vertex count")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loops are not allowed")
        both = np.concatenate([arr, arr[:, ::-1]]) if arr.size else arr
        order = np.lexsort((both[:, 1], both[:, 0])) if both.size else slice(0)
        both = both[order]
        if both.shape[0] > 1:
            dup = np.all(both[1:] == both[:-1], axis=1)
            if np.any(dup):
                raise ValueError("duplicate edges are not allowed")
        counts = np.bincount(both[:, 0], minlength=n) if both.size else np.zeros(n, dtype=np.int64)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        return cls(offsets, both[:, 1].copy() if both.size else np.zeros(0, dtype=np.int64))

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def neighbors_of(self, v: int) -> np.ndarray:
        """Sorted neighbor indices of v (read-only view)."""
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        lo, hi = int(self.offsets[u]), int(self.offsets[u + 1])
        pos = int(np.searchsorted(self.neighbors[lo:hi], v))
        return pos < hi - lo and int(self.neighbors[lo + pos]) == v

    def adjacency_lists(self) -> tuple[list[int], ...]:
        """Per-vertex neighbor lists as plain Python ints, cached.

        Hot loops (the embedding walk) iterate neighborhoods millions of
        times; plain lists avoid per-element numpy scalar overhead.
        """
        if self._lists is None:
            flat = self.neighbors.tolist()
            off = self.offsets.tolist()
            self._lists = tuple(flat[off[v]:off[v + 1]] for v in range(self.vertex_count))
        return self._lists

    def edge_array(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, lexicographically sorted."""
        rows = np.repeat(np.arange(self.vertex_count, dtype=np.int64), self.degrees())
        mask = rows < self.neighbors
        return np.stack([rows[mask], self.neighbors[mask]], axis=1)

    def validate(self) -> None:
        """Full invariant scan; raises ValueError on any violation."""
        n = self.vertex_count
        nbrs = self.neighbors
        if nbrs.size and (nbrs.min() < 0 or nbrs.max() >= n):
            raise ValueError("neighbor index out of range")
        rows = np.repeat(np.arange(n, dtype=np.int64), self.degrees())
        if np.any(rows == nbrs):
            raise ValueError("self-loop present")
        if nbrs.size > 1:
            same_row = rows[1:] == rows[:-1]
            if np.any(same_row & (nbrs[1:] <= nbrs[:-1])):
                raise ValueError("neighbor lists must be strictly increasing")
        fwd = np.lexsort((nbrs, rows))
        rev = np.lexsort((rows, nbrs))
        if not (np.array_equal(rows[fwd], nbrs[rev]) and np.array_equal(nbrs[fwd], rows[rev])):
            raise ValueError("adjacency is not symmetric")
        if self.edge_count * 2 != nbrs.size:
            raise ValueError("edge count does not match adjacency length")

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


class NeighborCap:
    """A fixed subset of exactly ``cap_size`` neighbors for every vertex.

    The capped embedding variants draw children only from these subsets.
    ``selected`` is an (n, cap_size) array with sorted, duplicate-free rows.
    """

    __slots__ = ("cap_size", "selected", "_lists", "_rev_offsets", "_rev_flat")

    def __init__(self, cap_size: int, selected: np.ndarray):
        selected = np.ascontiguousarray(selected, dtype=np.int64)
        if selected.ndim != 2 or selected.shape[1] != cap_size:
            raise ValueError("selected must be an (n, cap_size) array")
        if selected.shape[1] and np.any(np.diff(selected, axis=1) <= 0):
            raise ValueError("cap rows must be sorted and duplicate-free")
        selected.setflags(write=False)
        self.cap_size = int(cap_size)
        self.selected = selected
        self._lists: tuple[list[int], ...] | None = None
        self._rev_offsets: np.ndarray | None = None
        self._rev_flat: np.ndarray | None = None

    @property
    def vertex_count(self) -> int:
        return self.selected.shape[0]

    def row(self, v: int) -> np.ndarray:
        return self.selected[v]

    def as_lists(self) -> tuple[list[int], ...]:
        if self._lists is None:
            self._lists = tuple(row for row in self.selected.tolist())
        return self._lists

    def reverse_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Reverse mapping in CSR form: for each w, all v with w in the cap of v.

        Cap membership is not symmetric, so occupancy accounting for the
        capped variants needs this inverse. Built lazily, cached.
        """
        if self._rev_offsets is None:
            n, d = self.selected.shape
            flat = self.selected.ravel()
            owners = np.repeat(np.arange(n, dtype=np.int64), d)
            order = np.argsort(flat, kind="stable")
            counts = np.bincount(flat, minlength=n)
            offsets = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(counts, out=offsets[1:])
            self._rev_offsets = offsets
            self._rev_flat = owners[order]
        return self._rev_offsets, self._rev_flat

    def validate(self, g: Graph) -> None:
        """Check every cap row is a subset of the corresponding neighborhood."""
        if self.vertex_count != g.vertex_count:
            raise ValueError("cap does not match graph")
        for v in range(g.vertex_count):
            row = self.selected[v]
            nb = g.neighbors_of(v)
            pos = np.searchsorted(nb, row)
            ok = (pos < nb.size) & (nb[np.minimum(pos, nb.size - 1)] == row)
            if not np.all(ok):
                raise ValueError(f"cap row of vertex {v} is not a subset of its neighborhood")


def min_degree(g: Graph) -> int:
    """Smallest vertex degree of g; errors on the empty graph."""
    if g.vertex_count == 0:
        raise ValueError("empty graph")
    return int(g.degrees().min())


def make_neighbor_cap(g: Graph, d: int, seed: int | None = None) -> NeighborCap:
    """Fix a d-element neighbor subset for every vertex.

    By default selects the d smallest-index neighbors, which makes the cap a
    pure function of the graph. Passing a seed instead draws a uniform
    d-subset of each neighborhood from numpy's PCG64 stream.
    """
    if d < 1:
        raise ValueError("cap size must be at least 1")
    if d > min_degree(g):
        raise ValueError("cap exceeds minimum degree")
    n = g.vertex_count
    if seed is None:
        idx = g.offsets[:-1, None] + np.arange(d, dtype=np.int64)[None, :]
        selected = g.neighbors[idx]
    else:
        rng = np.random.default_rng(np.random.PCG64(seed))
        selected = np.empty((n, d), dtype=np.int64)
        for v in range(n):
            nb = g.neighbors_of(v)
            selected[v] = np.sort(rng.choice(nb, size=d, replace=False))
    return NeighborCap(d, selected)


def save_edge_list(g: Graph, path: str) -> None:
    """Write the canonical edge-list text format: "n m" header, then "u v" lines.

    Edges are written with u < v in lexicographic order, so a load/save
    round trip is byte-identical.
    """
    edges = g.edge_array()
    with open(path, "w") as fh:
        fh.write(f"{g.vertex_count} {g.edge_count}\n")
        for u, v in edges.tolist():
            fh.write(f"{u} {v}\n")


def load_edge_list(path: str) -> Graph:
    """Read the edge-list text format written by save_edge_list."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("malformed header, expected 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = np.zeros((m, 2), dtype=np.int64)
        for i in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise ValueError(f"malformed edge line {i + 2}")
            u, v = int(parts[0]), int(parts[1])
            if not 0 <= u < v < n:
                raise ValueError(f"edge ({u}, {v}) violates 0 <= u < v < n")
            edges[i] = (u, v)
    g = Graph.from_edges(n, edges)
    g.validate()
    return g
