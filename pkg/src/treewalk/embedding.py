"""Randomized tree embedding: self-avoiding tree-indexed random walks.

Four variants of one process. The tree is traversed in BFS order; each
vertex's children are placed one by one, each drawn uniformly among the
currently unoccupied vertices of the parent image's candidate set:

    a1  candidates are the full neighborhood; root placed uniformly in V
    a2  candidates are a fixed neighbor cap; root placed uniformly in V
    a3  like a2, but the root is placed at the end of a warmup random walk
        of warmup_k moves inside the cap (walk vertices occupy nothing)
    a4  full neighborhoods, root placed after a warmup_k-move walk over
        full neighborhoods

A run fails at the first tree vertex whose unoccupied-candidate count drops
below its remaining child count (checked child by child). The process never
backtracks. Identical (graph, tree, params) always reproduce the identical
run, trace included.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, NeighborCap
from .trees import RootedTree

__all__ = ["EmbedParams", "Embedding", "EmbedTrace", "embed", "verify_embedding"]

VARIANTS = ("a1", "a2", "a3", "a4")


@dataclass(frozen=True)
class EmbedParams:
    """Variant selection plus the per-run random stream.

    ``cap`` is required by a2/a3 and forbidden otherwise; ``warmup_k`` is
    required by a3/a4 and forbidden otherwise. ``start_vertex`` pins the
    root image (a1/a2) or the walk start (a3/a4) instead of drawing it
    uniformly from the seed.
    """

    variant: str
    cap: NeighborCap | None = None
    warmup_k: int | None = None
    seed: int = 0
    record_trace: bool = True
    start_vertex: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        needs_cap = self.variant in ("a2", "a3")
        needs_walk = self.variant in ("a3", "a4")
        if needs_cap and self.cap is None:
            raise ValueError(f"variant {self.variant} requires a neighbor cap")
        if not needs_cap and self.cap is not None:
            raise ValueError(f"variant {self.variant} does not take a neighbor cap")
        if needs_walk:
            if self.warmup_k is None or self.warmup_k < 0:
                raise ValueError(f"variant {self.variant} requires warmup_k >= 0")
        elif self.warmup_k is not None:
            raise ValueError(f"variant {self.variant} does not take warmup moves")


@dataclass
class Embedding:
    """Map from tree vertices to graph vertices; -1 marks unassigned."""

    assignment: list[int]

    @property
    def is_total(self) -> bool:
        return all(v >= 0 for v in self.assignment)

    @property
    def assigned_count(self) -> int:
        return sum(1 for v in self.assignment if v >= 0)


@dataclass
class EmbedTrace:
    """Per-run instrumentation.

    available_choices has one entry per placed tree vertex, in placement
    (= tree BFS) order: the number of unoccupied candidates at the moment
    of that placement. The root entry is |V| for a1/a2 and 1 for a3/a4
    (its position is fixed by the walk). occupancy_max maps each graph
    vertex whose candidate set was ever hit to the maximum count, over the
    run, of occupied vertices in that set, not counting children of the
    vertex embedded there; the count never decreases, so it equals the
    final value. walk_prefix lists the warmup walk from start to root
    image (a3/a4 only).
    """

    success: bool
    failed_at: int | None
    available_choices: list[int] = field(default_factory=list)
    occupancy_max: dict[int, int] | None = None
    walk_prefix: list[int] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "success": self.success,
            "failed_at": self.failed_at,
            "available_choices": list(self.available_choices),
            "occupancy_max": (
                None
                if self.occupancy_max is None
                else {str(v): c for v, c in sorted(self.occupancy_max.items())}
            ),
            "walk_prefix": list(self.walk_prefix),
        }


def embed(g: Graph, t: RootedTree, params: EmbedParams) -> tuple[Embedding, EmbedTrace]:
    """Run one embedding attempt; returns the (possibly partial) map and its trace.

    Raises on inconsistent inputs (tree larger than the graph, cap built
    for a different graph, walk stuck at an isolated vertex); a run that
    merely runs out of unoccupied candidates is reported through
    trace.success / trace.failed_at, not an exception.
    """
    n = g.vertex_count
    if t.vertex_count > n:
        raise ValueError("tree larger than graph")
    if params.cap is not None and params.cap.vertex_count != n:
        raise ValueError("neighbor cap does not match graph")
    if params.start_vertex is not None and not 0 <= params.start_vertex < n:
        raise ValueError("start vertex out of range")

    rng = random.Random(params.seed)
    use_cap = params.variant in ("a2", "a3")
    cand = params.cap.as_lists() if use_cap else g.adjacency_lists()

    walk: list[int] = []
    if params.variant in ("a1", "a2"):
        root_img = params.start_vertex if params.start_vertex is not None else rng.randrange(n)
    else:
        cur = params.start_vertex if params.start_vertex is not None else rng.randrange(n)
        walk.append(cur)
        walk_cand = params.cap.as_lists() if params.variant == "a3" else g.adjacency_lists()
        for _ in range(params.warmup_k):
            nb = walk_cand[cur]
            if not nb:
                raise ValueError("warmup walk reached a vertex with no candidates")
            cur = nb[rng.randrange(len(nb))]
            walk.append(cur)
        root_img = cur

    assignment = [-1] * t.vertex_count
    occupied = bytearray(n)
    assignment[t.root] = root_img
    occupied[root_img] = 1
    avail_counts = [n if params.variant in ("a1", "a2") else 1]

    failed_at: int | None = None
    for u in t.order:
        kids = t.children[u]
        if not kids:
            continue
        fu = assignment[u]
        cu = cand[fu]
        for j, c in enumerate(kids):
            avail = [w for w in cu if not occupied[w]]
            if len(avail) < len(kids) - j:
                failed_at = u
                break
            w = avail[rng.randrange(len(avail))]
            assignment[c] = w
            occupied[w] = 1
            avail_counts.append(len(avail))
        if failed_at is not None:
            break

    trace = EmbedTrace(
        success=failed_at is None,
        failed_at=failed_at,
        available_choices=avail_counts if params.record_trace else [],
        occupancy_max=_occupancy_counts(g, t, params, assignment) if params.record_trace else None,
        walk_prefix=walk,
    )
    return Embedding(assignment), trace


def _occupancy_counts(
    g: Graph, t: RootedTree, params: EmbedParams, assignment: list[int]
) -> dict[int, int]:
    """Occupied-candidate counts per graph vertex, excluding children of its occupant.

    The count for any vertex only grows as the run proceeds (occupation is
    permanent and children arrive after their parent), so the maximum over
    time equals the count over the final placement, computed here in one
    vectorized pass.
    """
    n = g.vertex_count
    placed = [(tv, gv) for tv, gv in enumerate(assignment) if gv >= 0]
    if not placed:
        return {}
    if params.variant in ("a2", "a3"):
        offsets, flat = params.cap.reverse_csr()
    else:
        offsets, flat = g.offsets, g.neighbors
    ws = np.fromiter((gv for _, gv in placed), dtype=np.int64, count=len(placed))
    lens = offsets[ws + 1] - offsets[ws]
    total = int(lens.sum())
    counts = np.zeros(n, dtype=np.int64)
    if total:
        starts = offsets[ws]
        cum = np.cumsum(lens) - lens
        idx = np.arange(total, dtype=np.int64) + np.repeat(starts - cum, lens)
        counts = np.bincount(flat[idx], minlength=n)
    parent_imgs = [assignment[t.parent[tv]] for tv, _ in placed if tv != t.root]
    if parent_imgs:
        counts -= np.bincount(np.asarray(parent_imgs, dtype=np.int64), minlength=n)
    hit = np.nonzero(counts > 0)[0]
    return {int(v): int(counts[v]) for v in hit}


def verify_embedding(g: Graph, t: RootedTree, e: Embedding) -> bool:
    """True iff the total map is injective and sends every tree edge to a graph edge."""
    if len(e.assignment) != t.vertex_count:
        raise ValueError("embedding does not match tree")
    if not e.is_total:
        raise ValueError("embedding incomplete")
    if len(set(e.assignment)) != t.vertex_count:
        return False
    for v in range(t.vertex_count):
        p = t.parent[v]
        if p == -1:
            continue
        if not g.has_edge(e.assignment[p], e.assignment[v]):
            return False
    return True
