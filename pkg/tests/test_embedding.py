import pytest

from treewalk.embedding import EmbedParams, Embedding, embed, verify_embedding
from treewalk.generators import (
    GnpSpec,
    complete_graph,
    cycle_graph,
    gnp_graph,
    path_graph,
)
from treewalk.graphs import Graph, make_neighbor_cap
from treewalk.seeds import mix
from treewalk.trees import RootedTree, path_tree, random_tree

from .oracles import replay_occupancy


def test_params_variant_consistency():
    g = complete_graph(6)
    cap = make_neighbor_cap(g, 3)
    with pytest.raises(ValueError):
        EmbedParams(variant="a1", cap=cap)
    with pytest.raises(ValueError):
        EmbedParams(variant="a2")
    with pytest.raises(ValueError):
        EmbedParams(variant="a3", cap=cap)
    with pytest.raises(ValueError):
        EmbedParams(variant="a4", cap=cap, warmup_k=2)
    with pytest.raises(ValueError):
        EmbedParams(variant="a1", warmup_k=1)
    with pytest.raises(ValueError):
        EmbedParams(variant="zzz")
    EmbedParams(variant="a2", cap=cap)
    EmbedParams(variant="a3", cap=cap, warmup_k=0)
    EmbedParams(variant="a4", warmup_k=3)


def test_complete_host_always_succeeds():
    g = complete_graph(12)
    for seed in range(30):
        t = random_tree(12, 5, seed)
        emb, trace = embed(g, t, EmbedParams(variant="a1", seed=seed))
        assert trace.success
        assert verify_embedding(g, t, emb)


def test_cycle_host_path_pattern_always_succeeds():
    g = cycle_graph(5)
    t = path_tree(5)
    for seed in range(50):
        emb, trace = embed(g, t, EmbedParams(variant="a1", seed=seed))
        assert trace.success
        assert verify_embedding(g, t, emb)


def test_star_host_path_pattern_always_fails():
    # the star has no 3-edge path, so failure is structural
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    t = path_tree(4)
    for seed in range(40):
        emb, trace = embed(g, t, EmbedParams(variant="a1", seed=seed))
        assert not trace.success
        assert trace.failed_at is not None
        assert not emb.is_total


def test_tree_larger_than_graph_is_an_error():
    g = complete_graph(3)
    with pytest.raises(ValueError, match="tree larger than graph"):
        embed(g, path_tree(4), EmbedParams(variant="a1", seed=0))


def test_cap_from_other_graph_rejected():
    cap = make_neighbor_cap(complete_graph(5), 2)
    with pytest.raises(ValueError, match="does not match"):
        embed(complete_graph(6), path_tree(3), EmbedParams(variant="a2", cap=cap, seed=0))


def test_determinism():
    g = gnp_graph(GnpSpec(40, 0.2, 5))
    t = random_tree(20, 4, 77)
    params = EmbedParams(variant="a1", seed=1234)
    out1 = embed(g, t, params)
    out2 = embed(g, t, params)
    assert out1[0].assignment == out2[0].assignment
    assert out1[1].to_json_dict() == out2[1].to_json_dict()


def test_uniform_choice_on_triangle():
    # root pinned; the single child must split 50/50 between the two
    # remaining vertices (chi-square sanity of the uniform-choice contract)
    g = complete_graph(3)
    t = path_tree(2)
    counts = {1: 0, 2: 0}
    trials = 100000
    for seed in range(trials):
        emb, trace = embed(
            g, t, EmbedParams(variant="a1", seed=seed, start_vertex=0, record_trace=False)
        )
        counts[emb.assignment[1]] += 1
    freq = counts[1] / trials
    assert abs(freq - 0.5) <= 0.02


def test_available_choices_on_complete_host():
    g = complete_graph(6)
    t = path_tree(4)
    emb, trace = embed(g, t, EmbedParams(variant="a1", seed=3))
    assert trace.success
    assert trace.available_choices == [6, 5, 4, 3]
    assert all(c >= 1 for c in trace.available_choices)


def test_walk_variants():
    g = complete_graph(8)
    cap = make_neighbor_cap(g, 3, seed=2)
    emb3, tr3 = embed(g, path_tree(3), EmbedParams(variant="a3", cap=cap, warmup_k=4, seed=9))
    assert len(tr3.walk_prefix) == 5
    for a, b in zip(tr3.walk_prefix, tr3.walk_prefix[1:]):
        assert b in cap.row(a).tolist()
    assert emb3.assignment[0] == tr3.walk_prefix[-1]

    emb4, tr4 = embed(g, path_tree(3), EmbedParams(variant="a4", warmup_k=4, seed=9))
    assert len(tr4.walk_prefix) == 5
    for a, b in zip(tr4.walk_prefix, tr4.walk_prefix[1:]):
        assert g.has_edge(a, b)
    assert emb4.assignment[0] == tr4.walk_prefix[-1]


def test_warmup_walk_does_not_occupy():
    # a full-size pattern fits iff the walk left every vertex free
    g = complete_graph(5)
    for seed in range(50):
        t = random_tree(5, 4, seed)
        emb, trace = embed(g, t, EmbedParams(variant="a4", warmup_k=5, seed=seed))
        assert trace.success
        assert verify_embedding(g, t, emb)


def test_start_vertex_pins_walk_start():
    g = cycle_graph(7)
    _, tr = embed(g, path_tree(2), EmbedParams(variant="a4", warmup_k=3, seed=4, start_vertex=6))
    assert tr.walk_prefix[0] == 6


def test_walk_from_isolated_vertex_is_an_error():
    g = Graph.from_edges(4, [(0, 1), (1, 2)])  # vertex 3 isolated
    with pytest.raises(ValueError, match="no candidates"):
        embed(g, path_tree(2), EmbedParams(variant="a4", warmup_k=1, seed=0, start_vertex=3))


@pytest.mark.parametrize("variant", ["a1", "a2", "a3", "a4"])
def test_occupancy_matches_replay_oracle(variant):
    g = gnp_graph(GnpSpec(24, 0.35, 11))
    cap = make_neighbor_cap(g, 3, seed=1) if variant in ("a2", "a3") else None
    warmup = 3 if variant in ("a3", "a4") else None
    for seed in (0, 1, 2, 3):
        t = random_tree(12, 4, seed)
        params = EmbedParams(variant=variant, cap=cap, warmup_k=warmup, seed=seed)
        emb, trace = embed(g, t, params)
        assert trace.occupancy_max == replay_occupancy(g, t, emb.assignment, cap)
        if trace.success:
            assert verify_embedding(g, t, emb)
        if cap is not None:
            # children may only land inside their parent's cap row
            for c in range(t.vertex_count):
                p = t.parent[c]
                if p != -1 and emb.assignment[c] >= 0:
                    assert emb.assignment[c] in cap.row(emb.assignment[p]).tolist()


def test_prefix_monotonicity_of_failure():
    # a failed run truncated to its placed vertices must replay identically
    # and succeed on the truncated pattern
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    t = path_tree(4)
    checked = 0
    for seed in range(20):
        params = EmbedParams(variant="a1", seed=seed)
        emb, trace = embed(g, t, params)
        assert not trace.success
        placed = [u for u in t.order if emb.assignment[u] >= 0]
        if len(placed) < 2:
            continue
        rank = {u: i for i, u in enumerate(placed)}
        new_parent = [-1 if u == t.root else rank[t.parent[u]] for u in placed]
        trunc = RootedTree(new_parent)
        emb2, trace2 = embed(g, trunc, params)
        assert trace2.success
        assert [emb2.assignment[rank[u]] for u in placed] == [emb.assignment[u] for u in placed]
        checked += 1
    assert checked > 0


def test_prefix_monotonicity_on_sparse_random_host():
    # mid-run failures with branching patterns, not just root-level collapse
    g = gnp_graph(GnpSpec(14, 0.18, 5))
    mid_run = 0
    for seed in range(60):
        t = random_tree(10, 5, seed)
        params = EmbedParams(variant="a1", seed=seed)
        emb, trace = embed(g, t, params)
        if trace.success:
            continue
        placed = [u for u in t.order if emb.assignment[u] >= 0]
        if not 2 <= len(placed) < t.vertex_count:
            continue
        mid_run += 1
        rank = {u: i for i, u in enumerate(placed)}
        new_parent = [-1 if u == t.root else rank[t.parent[u]] for u in placed]
        trunc = RootedTree(new_parent)
        emb2, trace2 = embed(g, trunc, params)
        assert trace2.success
        assert [emb2.assignment[rank[u]] for u in placed] == [emb.assignment[u] for u in placed]
    assert mid_run >= 10


def test_verify_embedding_cases():
    g = path_graph(3)
    t = path_tree(3)
    assert verify_embedding(g, t, Embedding([0, 1, 2]))
    assert not verify_embedding(g, t, Embedding([0, 1, 1]))
    assert not verify_embedding(g, t, Embedding([0, 2, 1]))
    with pytest.raises(ValueError, match="embedding incomplete"):
        verify_embedding(g, t, Embedding([0, 1, -1]))


def test_soundness_across_random_hosts():
    for seed in range(15):
        g = gnp_graph(GnpSpec(30, 0.3, seed))
        t = random_tree(14, 4, seed)
        emb, trace = embed(g, t, EmbedParams(variant="a1", seed=mix(7, seed)))
        if trace.success:
            assert verify_embedding(g, t, emb)


def test_c4_free_host_monte_carlo(pp101):
    # 102-regular 4-cycle-free host; trees of 650 vertices and degree cap 74
    # sit inside the regime bounds at eps = 1/16; pinned seeds
    base = 424242
    successes = 0
    for i in range(200):
        t = random_tree(650, 74, mix(base, i, 1))
        emb, trace = embed(
            pp101, t, EmbedParams(variant="a1", seed=mix(base, i, 0), record_trace=False)
        )
        if trace.success:
            assert verify_embedding(pp101, t, emb)
            successes += 1
    assert successes / 200 >= 0.95
