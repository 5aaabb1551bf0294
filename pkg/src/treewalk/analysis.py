"""Structural verification and bound calculators.

Exact girth and simple-path counting, certification of the bounded
path-count property, complete-bipartite freeness, cap-overlap statistics,
the supermartingale tail bound with an empirical simulator, and the
tree-size/degree threshold calculators for each host-graph regime.
"""

from __future__ import annotations

import math
import random
import warnings
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graphs import Graph, NeighborCap, min_degree

__all__ = [
    "girth",
    "count_paths",
    "PropertyReport",
    "check_property",
    "kst_free",
    "CommonNeighborStats",
    "common_neighbor_stats",
    "supermartingale_bound",
    "empirical_exceedance",
    "ThresholdSet",
    "thresholds_c4",
    "thresholds_girth",
    "thresholds_kst",
    "thresholds_pseudo",
    "pseudo_params",
    "select_k",
]

PATH_LENGTH_CAP = 6
PAIR_BUDGET = 10**8


def girth(g: Graph) -> int | None:
    """Length of the shortest cycle, or None for forests.

    One BFS per start vertex; a non-tree edge between vertices at depths
    a and b witnesses a closed walk of length a + b + 1 through the start,
    and the minimum over all starts is exact.
    """
    n = g.vertex_count
    adj = g.adjacency_lists()
    best: int | None = None
    dist = [-1] * n
    par = [-1] * n
    for s in range(n):
        for i in range(n):
            dist[i] = -1
        dist[s] = 0
        par[s] = -1
        queue = [s]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            dx = dist[x]
            if best is not None and 2 * dx + 1 >= best:
                break
            for w in adj[x]:
                if w == par[x]:
                    continue
                if dist[w] >= 0:
                    cand = dx + dist[w] + 1
                    if best is None or cand < best:
                        best = cand
                else:
                    dist[w] = dx + 1
                    par[w] = x
                    queue.append(w)
        if best == 3:
            break
    return best


def count_paths(g: Graph, u: int, v: int, k: int, limit: int = PATH_LENGTH_CAP) -> int:
    """Exact number of simple u-v paths with k edges (paths, not walks).

    Depth-limited search; cost grows like degree^k, so k is capped
    (default 6) and raising the cap is an explicit opt-in.
    """
    if u == v:
        raise ValueError("endpoints must be distinct")
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > limit:
        raise ValueError("path length cap exceeded")
    if k > PATH_LENGTH_CAP:
        warnings.warn(f"counting length-{k} paths costs roughly degree^{k} work", stacklevel=2)
    adj = g.adjacency_lists()
    visited = bytearray(g.vertex_count)
    visited[u] = 1

    def rec(x: int, rem: int) -> int:
        if rem == 1:
            return 1 if g.has_edge(x, v) else 0
        total = 0
        for w in adj[x]:
            if not visited[w] and w != v:
                visited[w] = 1
                total += rec(w, rem - 1)
                visited[w] = 0
        return total

    return rec(u, k)


def _paths_len2(g: Graph, u: int, v: int) -> int:
    a = g.neighbors_of(u)
    b = g.neighbors_of(v)
    return int(np.intersect1d(a, b, assume_unique=True).size)


def _paths_len3(g: Graph, u: int, v: int) -> int:
    # Sum over a in N(u) of |N(a) cap N(v)|, then drop the walks that revisit
    # u or pass through v: if u ~ v those number deg(u) + deg(v) - 1.
    off, flat = g.offsets, g.neighbors
    a = flat[off[u]:off[u + 1]]
    b = flat[off[v]:off[v + 1]]
    if a.size == 0 or b.size == 0:
        return 0
    lens = off[a + 1] - off[a]
    total = int(lens.sum())
    if total == 0:
        return 0
    starts = off[a]
    cum = np.cumsum(lens) - lens
    idx = np.arange(total, dtype=np.int64) + np.repeat(starts - cum, lens)
    second = flat[idx]
    pos = np.searchsorted(b, second)
    member = (pos < b.size) & (b[np.minimum(pos, b.size - 1)] == second)
    count = int(member.sum())
    if g.has_edge(u, v):
        count -= g.degree(u) + g.degree(v) - 1
    return count


def _paths_fast(g: Graph, u: int, v: int, k: int) -> int:
    """Dispatch to closed-form counters for k <= 3, generic search beyond."""
    if k == 1:
        return 1 if g.has_edge(u, v) else 0
    if k == 2:
        return _paths_len2(g, u, v)
    if k == 3:
        return _paths_len3(g, u, v)
    return count_paths(g, u, v, k, limit=max(k, PATH_LENGTH_CAP))


@dataclass
class PropertyReport:
    """Certificate of the bounded path-count property on one graph.

    The property asks for minimum degree at least d, all length-k simple
    path counts at most d^(1/4), and all length-(k+1) counts at most
    d^(k+1)/t. Both ceiling comparisons are done in exact integer
    arithmetic (max^4 <= d and max*t <= d^(k+1)). A sampled report can
    certify a violation but never exhaustive success.
    """

    d: int
    k: int
    t: int
    min_degree_ok: bool
    max_paths_k: int
    argmax_pair_k: tuple[int, int] | None
    max_paths_k1: int
    argmax_pair_k1: tuple[int, int] | None
    cond2_ok: bool
    cond3_ok: bool
    exhaustive: bool
    sampled_pairs: int

    @property
    def holds(self) -> bool:
        return self.min_degree_ok and self.cond2_ok and self.cond3_ok

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "t": self.t,
            "min_degree_ok": self.min_degree_ok,
            "max_paths_k": self.max_paths_k,
            "argmax_pair_k": list(self.argmax_pair_k) if self.argmax_pair_k else None,
            "max_paths_k1": self.max_paths_k1,
            "argmax_pair_k1": list(self.argmax_pair_k1) if self.argmax_pair_k1 else None,
            "cond2_ok": self.cond2_ok,
            "cond3_ok": self.cond3_ok,
            "holds": self.holds,
            "exhaustive": self.exhaustive,
            "sampled_pairs": self.sampled_pairs,
        }


def check_property(
    g: Graph,
    d: int,
    k: int,
    t: int,
    sample: int | None = None,
    seed: int = 0,
    pair_budget: int = PAIR_BUDGET,
) -> PropertyReport:
    """Certify the bounded path-count property by direct counting.

    All ordered pairs are scanned when |V|^2 fits the budget; otherwise
    ``sample`` seeded uniform ordered pairs are checked and the report is
    marked non-exhaustive.
    """
    if min(d, k, t) < 1:
        raise ValueError("d, k and t must be positive")
    n = g.vertex_count
    exhaustive = n * n <= pair_budget and sample is None
    if exhaustive:
        pairs = ((u, v) for u in range(n) for v in range(n) if u != v)
        scanned = n * (n - 1)
    else:
        if sample is None:
            raise ValueError("graph exceeds the exhaustive pair budget; provide a sample size")
        if n < 2:
            raise ValueError("sampling needs at least two vertices")
        rng = random.Random(seed)

        def draw():
            for _ in range(sample):
                u = rng.randrange(n)
                v = rng.randrange(n - 1)
                yield (u, v + 1 if v >= u else v)

        pairs = draw()
        scanned = sample

    max_k, arg_k = -1, None
    max_k1, arg_k1 = -1, None
    for u, v in pairs:
        c = _paths_fast(g, u, v, k)
        if c > max_k:
            max_k, arg_k = c, (u, v)
        c1 = _paths_fast(g, u, v, k + 1)
        if c1 > max_k1:
            max_k1, arg_k1 = c1, (u, v)
    max_k = max(max_k, 0)
    max_k1 = max(max_k1, 0)
    return PropertyReport(
        d=d,
        k=k,
        t=t,
        min_degree_ok=min_degree(g) >= d,
        max_paths_k=max_k,
        argmax_pair_k=arg_k,
        max_paths_k1=max_k1,
        argmax_pair_k1=arg_k1,
        cond2_ok=max_k**4 <= d,
        cond3_ok=max_k1 * t <= d ** (k + 1),
        exhaustive=exhaustive,
        sampled_pairs=scanned,
    )


def kst_free(g: Graph, s: int, t: int, budget: int = 2 * 10**7) -> bool:
    """True iff no t-set of vertices has s or more common neighbors.

    Exhaustive: every vertex contributes each t-subset of its neighborhood
    once, so a t-set with c common neighbors is counted c times. Only
    t <= 3 is supported (the subset count explodes beyond), and the total
    subset count must fit the budget.
    """
    if not s >= t >= 2:
        raise ValueError("need s >= t >= 2")
    if t > 3:
        raise ValueError("exhaustive K_{s,t} check infeasible")
    degs = g.degrees()
    work = sum(math.comb(int(x), t) for x in degs)
    if work > budget:
        raise ValueError("exhaustive K_{s,t} check infeasible")
    counts: Counter = Counter()
    adj = g.adjacency_lists()
    for w in range(g.vertex_count):
        for combo in combinations(adj[w], t):
            counts[combo] += 1
            if counts[combo] >= s:
                return False
    return True


@dataclass
class CommonNeighborStats:
    """Distribution of pairwise cap overlaps and the heavy-overlap counts.

    For each scanned vertex v, ``heavy_counts[v]`` is the number of other
    vertices sharing strictly more than ``threshold`` cap-neighbors with v;
    the non-heavy vertices form the complementary (light) class.
    ``overlap_histogram`` aggregates overlap sizes over all scanned (v, w)
    pairs, w != v.
    """

    threshold: int
    scanned_vertices: list[int]
    overlap_histogram: dict[int, int]
    heavy_counts: dict[int, int]

    def light_count(self, v: int, n: int) -> int:
        return (n - 1) - self.heavy_counts[v]


def common_neighbor_stats(
    g: Graph,
    cap: NeighborCap,
    threshold: int,
    sample: int | None = None,
    seed: int = 0,
) -> CommonNeighborStats:
    """Overlap statistics of the fixed neighbor caps, exact per scanned vertex.

    Scans every vertex by default, or a seeded uniform sample of vertices;
    each scanned vertex is compared against all others.
    """
    if cap.vertex_count != g.vertex_count:
        raise ValueError("cap does not match graph")
    n = g.vertex_count
    if sample is None:
        scan = list(range(n))
    else:
        rng = random.Random(seed)
        scan = sorted(rng.sample(range(n), min(sample, n)))
    hist: Counter = Counter()
    heavy: dict[int, int] = {}
    indicator = np.zeros(n, dtype=bool)
    for v in scan:
        indicator[cap.row(v)] = True
        overlaps = indicator[cap.selected].sum(axis=1)
        indicator[cap.row(v)] = False
        mask = np.ones(n, dtype=bool)
        mask[v] = False
        vals, counts = np.unique(overlaps[mask], return_counts=True)
        for val, cnt in zip(vals.tolist(), counts.tolist()):
            hist[int(val)] += int(cnt)
        heavy[v] = int((overlaps[mask] > threshold).sum())
    return CommonNeighborStats(
        threshold=threshold,
        scanned_vertices=scan,
        overlap_histogram=dict(sorted(hist.items())),
        heavy_counts=heavy,
    )


def supermartingale_bound(mu: float, delta: float) -> float:
    """Tail bound exp(-delta^2 * mu / 3) for sums of [0,1] variables whose
    conditional means are dominated by a fixed sequence summing to mu.

    Valid for 0 < delta <= 1; mu may be any upper bound on the sum of the
    conditional mean ceilings.
    """
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    if mu <= 0:
        raise ValueError("mu must be positive")
    return math.exp(-(delta * delta) * mu / 3.0)


def empirical_exceedance(
    means: "np.ndarray | list[float]",
    deltas: list[float],
    n_samples: int,
    seed: int,
    distribution: str = "bernoulli",
) -> dict[float, float]:
    """Simulate sums of independent [0,1] variables with the given means and
    return, per delta, the fraction of samples exceeding (1 + delta) * mu.

    ``bernoulli`` draws indicator variables with the given means;
    ``uniform`` draws Uniform(0, 2*mean) (means must be at most 1/2).
    One shared sample set serves all deltas.
    """
    means_arr = np.asarray(means, dtype=float)
    if means_arr.ndim != 1 or means_arr.size == 0:
        raise ValueError("means must be a nonempty vector")
    if np.any(means_arr < 0) or np.any(means_arr > 1):
        raise ValueError("means must lie in [0, 1]")
    if distribution == "uniform" and np.any(means_arr > 0.5):
        raise ValueError("uniform mode needs means at most 1/2")
    if distribution not in ("bernoulli", "uniform"):
        raise ValueError(f"unknown distribution {distribution!r}")
    mu = float(means_arr.sum())
    rng = np.random.default_rng(np.random.PCG64(seed))
    exceed = {d: 0 for d in deltas}
    chunk = max(1, min(n_samples, 20000))
    done = 0
    while done < n_samples:
        size = min(chunk, n_samples - done)
        u = rng.random((size, means_arr.size))
        if distribution == "bernoulli":
            sums = (u < means_arr).sum(axis=1)
        else:
            sums = (u * (2.0 * means_arr)).sum(axis=1)
        for d in deltas:
            exceed[d] += int((sums > (1.0 + d) * mu).sum())
        done += size
    return {d: exceed[d] / n_samples for d in deltas}


@dataclass
class ThresholdSet:
    """Largest admissible tree size and maximum degree for one host regime."""

    theorem_tag: str
    max_tree_size: int
    max_tree_degree: int
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_tree_size < 0 or self.max_tree_degree < 0:
            raise ValueError("thresholds must be nonnegative")

    def to_json_dict(self) -> dict:
        return {
            "theorem_tag": self.theorem_tag,
            "max_tree_size": self.max_tree_size,
            "max_tree_degree": self.max_tree_degree,
            "inputs": dict(self.inputs),
        }


def thresholds_c4(d: int, eps: float) -> ThresholdSet:
    """Regime of 4-cycle-free hosts with minimum degree d: trees up to size
    eps*d^2 and maximum degree d - 2*eps*d - 2 (requires eps <= 1/8, d >= 24)."""
    if not 0 < eps <= 0.125:
        raise ValueError("eps must lie in (0, 1/8]")
    if d < 24:
        raise ValueError("d must be at least 24")
    return ThresholdSet(
        theorem_tag="c4",
        max_tree_size=math.floor(eps * d * d),
        max_tree_degree=math.floor(d - 2 * eps * d - 2),
        inputs={"d": d, "eps": eps},
    )


def thresholds_girth(d: int, k: int, eps: float) -> ThresholdSet:
    """Regime of hosts with girth 2k+1 and minimum degree d: trees up to
    size eps*d^k/4 and maximum degree d - 2*eps*d - 2 (eps <= 1/(2k))."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if not 0 < eps <= 1.0 / (2 * k):
        raise ValueError("eps must lie in (0, 1/(2k)]")
    return ThresholdSet(
        theorem_tag="girth",
        max_tree_size=math.floor(eps * d**k / 4),
        max_tree_degree=math.floor(d - 2 * eps * d - 2),
        inputs={"d": d, "k": k, "eps": eps},
    )


def thresholds_kst(d: int, s: int, t: int, strong_degree: bool = False) -> ThresholdSet:
    """Regime of hosts without a complete bipartite K_{s,t} (s >= t >= 2):
    trees up to size d^(t/(t-1)) / (64 s^(1/(t-1))); maximum degree d/(64t),
    or d/256 under the strong-degree variant."""
    if t < 2 or s < t:
        raise ValueError("need s >= t >= 2")
    size = math.floor(d ** (t / (t - 1)) / (64 * s ** (1.0 / (t - 1))))
    degree = d // 256 if strong_degree else d // (64 * t)
    return ThresholdSet(
        theorem_tag="kst",
        max_tree_size=size,
        max_tree_degree=degree,
        inputs={"d": d, "s": s, "t": t, "strong_degree": strong_degree},
    )


def pseudo_params(k: int, eps: float, delta: float) -> tuple[bool, float]:
    """Feasibility of the pseudorandom regime and its occupancy headroom.

    Feasible iff (2*k*eps)^(1/k) + delta + 1/k <= 1; the second value is
    alpha = 1 - (2*k*eps)^(1/k), the largest occupied fraction any
    neighborhood can reach before choices run short.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if eps <= 0 or delta <= 0:
        raise ValueError("eps and delta must be positive")
    spread = (2 * k * eps) ** (1.0 / k)
    return spread + delta + 1.0 / k <= 1.0, 1.0 - spread


def thresholds_pseudo(d: int, t: int, k: int, eps: float, delta: float) -> ThresholdSet:
    """Regime of hosts with the bounded path-count property: trees up to
    size eps*t and maximum degree delta*d, for feasible (eps, delta)."""
    feasible, alpha = pseudo_params(k, eps, delta)
    if not feasible:
        raise ValueError("(eps, delta) infeasible for this k")
    return ThresholdSet(
        theorem_tag="pseudo",
        max_tree_size=math.floor(eps * t),
        max_tree_degree=math.floor(delta * d),
        inputs={"d": d, "t": t, "k": k, "eps": eps, "delta": delta, "alpha": alpha},
    )


def select_k(n: int, p: float, k_max: int = 64) -> int:
    """Smallest k >= 1 with (1/4)(pn)^(-3/4) < p^k n^(k-1) <= (1/4)(pn)^(1/4).

    The admissible windows for consecutive k tile the positive axis, so the
    smallest feasible k is the unique one. Evaluated in log space.
    """
    if p > 0.5:
        raise ValueError("p must be at most 1/2")
    if p * n < 2:
        raise ValueError("p*n must be at least 2")
    log_pn = math.log(p * n)
    lo = math.log(0.25) - 0.75 * log_pn
    hi = math.log(0.25) + 0.25 * log_pn
    for k in range(1, k_max + 1):
        val = k * math.log(p) + (k - 1) * math.log(n)
        if lo < val <= hi:
            return k
    raise ValueError(f"no feasible k up to {k_max}")
