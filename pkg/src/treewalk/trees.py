"""Rooted tree patterns and level utilities.

Tree size is always the vertex count in this package (edge count is one
less); every size bound elsewhere follows that convention.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from typing import Sequence

__all__ = [
    "RootedTree",
    "random_tree",
    "random_tree_prufer",
    "adversarial_tree",
    "adversarial_special_vertex",
    "path_tree",
    "star_tree",
    "descendants_at_depth",
    "level_partition",
    "save_tree",
    "load_tree",
]


class RootedTree:
    """Rooted tree given by a parent array (parent[root] == -1).

    ``order`` is the BFS ordering from the root with children visited in
    increasing index order; every vertex appears after its parent, and the
    embedding algorithms place vertices in exactly this order.
    """

    __slots__ = ("vertex_count", "root", "parent", "children", "order", "depths", "max_degree")

    def __init__(self, parent: Sequence[int]):
        parent = [int(p) for p in parent]
        n = len(parent)
        if n == 0:
            raise ValueError("tree must have at least one vertex")
        roots = [v for v, p in enumerate(parent) if p == -1]
        if len(roots) != 1:
            raise ValueError("tree must have exactly one root")
        root = roots[0]
        children: list[list[int]] = [[] for _ in range(n)]
        for v, p in enumerate(parent):
            if p == -1:
                continue
            if not 0 <= p < n:
                raise ValueError(f"parent of {v} out of range")
            children[p].append(v)
        for ch in children:
            ch.sort()
        order = []
        depths = [-1] * n
        depths[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for c in children[u]:
                depths[c] = depths[u] + 1
                queue.append(c)
        if len(order) != n:
            raise ValueError("parent pointers do not form a tree")
        self.vertex_count = n
        self.root = root
        self.parent = parent
        self.children = children
        self.order = order
        self.depths = depths
        self.max_degree = max(
            len(children[v]) + (0 if v == root else 1) for v in range(n)
        )

    def __repr__(self) -> str:
        return f"RootedTree(n={self.vertex_count}, max_degree={self.max_degree})"


def random_tree(n: int, max_deg: int, seed: int) -> RootedTree:
    """Random tree by uniform attachment under a degree cap.

    Vertices arrive one at a time; each picks its parent uniformly among the
    existing vertices that still have degree capacity (the root may host
    max_deg children, every other vertex max_deg - 1). Deterministic per
    seed. This is not the uniform distribution over labeled trees; see
    random_tree_prufer for that alternative at small n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n >= 3 and max_deg < 2:
        raise ValueError("max_deg must be at least 2 for n >= 3")
    if n == 2 and max_deg < 1:
        raise ValueError("max_deg must be at least 1 for n == 2")
    rng = random.Random(seed)
    parent = [-1] * n
    capacity = [0] * n
    capacity[0] = max_deg
    avail = [0] if max_deg > 0 else []
    for v in range(1, n):
        if not avail:
            raise ValueError("degree cap makes the tree infeasible")
        i = rng.randrange(len(avail))
        p = avail[i]
        parent[v] = p
        capacity[p] -= 1
        if capacity[p] == 0:
            avail[i] = avail[-1]
            avail.pop()
        capacity[v] = max_deg - 1
        if capacity[v] > 0:
            avail.append(v)
    return RootedTree(parent)


def random_tree_prufer(n: int, max_deg: int, seed: int, max_tries: int = 100000) -> RootedTree:
    """Uniform labeled tree (via a random Prufer sequence), rejecting until
    the degree cap holds. Only sensible for small n, where rejection is rare."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return RootedTree([-1])
    if n == 2:
        return RootedTree([-1, 0])
    if max_deg < 2:
        raise ValueError("max_deg must be at least 2 for n >= 3")
    rng = random.Random(seed)
    for _ in range(max_tries):
        seq = [rng.randrange(n) for _ in range(n - 2)]
        deg = [1] * n
        for x in seq:
            deg[x] += 1
        if max(deg) > max_deg:
            continue
        # standard Prufer decoding
        degree = deg[:]
        edges = []
        leaves = [v for v in range(n) if degree[v] == 1]
        heapq.heapify(leaves)
        for x in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, x))
            degree[x] -= 1
            if degree[x] == 1:
                heapq.heappush(leaves, x)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges.append((u, v))
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        parent = [-1] * n
        seen = [False] * n
        seen[0] = True
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    queue.append(y)
        return RootedTree(parent)
    raise ValueError("degree cap rejection did not terminate")


def adversarial_tree(d: int, eps: float) -> RootedTree:
    """Depth-3 tree that stresses one neighborhood of a degree-d host.

    With s = floor(sqrt(d)): the root has s children, each level-1 vertex
    has s - 1 children (undirected degree s), and each level-2 vertex has
    floor(eps*d) - 1 children except one special vertex with
    floor((1-eps)*d) - 1 children. The special vertex is the last level-2
    vertex in BFS order, so its children are embedded after everything
    else. Total size is about eps*d^2 plus lower-order terms.
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if d < 16:
        raise ValueError("d must be at least 16")
    s = math.isqrt(d)
    if s < 2:
        raise ValueError("floor(sqrt(d)) must be at least 2")
    light = math.floor(eps * d)
    if light < 2:
        raise ValueError("floor(eps*d) must be at least 2")
    heavy = math.floor((1 - eps) * d)
    parent = [-1]
    level1 = []
    for _ in range(s):
        parent.append(0)
        level1.append(len(parent) - 1)
    level2 = []
    for v in level1:
        for _ in range(s - 1):
            parent.append(v)
            level2.append(len(parent) - 1)
    special = level2[-1]
    for w in level2:
        count = (heavy - 1) if w == special else (light - 1)
        for _ in range(count):
            parent.append(w)
    return RootedTree(parent)


def adversarial_special_vertex(d: int) -> int:
    """Index of the heavy level-2 vertex in adversarial_tree(d, eps).

    The construction numbers the root 0, level 1 as 1..s and level 2 as
    s+1..s+s(s-1); the special vertex is the last level-2 index.
    """
    s = math.isqrt(d)
    return s + s * (s - 1)


def path_tree(n: int) -> RootedTree:
    if n < 1:
        raise ValueError("n must be at least 1")
    return RootedTree([-1] + list(range(n - 1)))


def star_tree(n: int) -> RootedTree:
    if n < 1:
        raise ValueError("n must be at least 1")
    return RootedTree([-1] + [0] * (n - 1))


def descendants_at_depth(t: RootedTree, x: int, depth: int) -> set[int]:
    """All vertices exactly ``depth`` levels below x in its subtree."""
    if not 0 <= x < t.vertex_count:
        raise ValueError("vertex out of range")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    frontier = {x}
    for _ in range(depth):
        frontier = {c for v in frontier for c in t.children[v]}
        if not frontier:
            break
    return frontier


def level_partition(t: RootedTree, k: int) -> list[set[int]]:
    """Partition vertices by depth residue mod k.

    Block j collects the vertices at depth congruent to j mod k, where depth
    counts from the root. (Equivalently, depth + k mod k: prepending a
    k-vertex path above the root shifts all depths by k, which leaves the
    residues unchanged.)
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    blocks: list[set[int]] = [set() for _ in range(k)]
    for v in range(t.vertex_count):
        blocks[t.depths[v] % k].add(v)
    return blocks


def save_tree(t: RootedTree, path: str) -> None:
    """Write the tree text format: "n root" header, then "child parent" lines."""
    with open(path, "w") as fh:
        fh.write(f"{t.vertex_count} {t.root}\n")
        for v in range(t.vertex_count):
            if v != t.root:
                fh.write(f"{v} {t.parent[v]}\n")


def load_tree(path: str) -> RootedTree:
    """Read the tree text format written by save_tree."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("malformed header, expected 'n root'")
        n, root = int(header[0]), int(header[1])
        if n < 1 or not 0 <= root < n:
            raise ValueError("header values out of range")
        parent: list[int | None] = [None] * n
        parent[root] = -1
        for _ in range(n - 1):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise ValueError("malformed child/parent line")
            c, p = int(parts[0]), int(parts[1])
            if not (0 <= c < n and 0 <= p < n):
                raise ValueError(f"vertex pair ({c}, {p}) out of range")
            if parent[c] is not None:
                raise ValueError(f"vertex {c} assigned twice")
            parent[c] = p
    if any(p is None for p in parent):
        raise ValueError("missing parent assignments")
    return RootedTree(parent)  # type: ignore[arg-type]
