import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treewalk.trees import (
    RootedTree,
    adversarial_special_vertex,
    adversarial_tree,
    descendants_at_depth,
    level_partition,
    load_tree,
    path_tree,
    random_tree,
    random_tree_prufer,
    save_tree,
    star_tree,
)

from .oracles import descendants_by_parent_walk


@st.composite
def small_trees(draw, max_n=20):
    n = draw(st.integers(min_value=1, max_value=max_n))
    parent = [-1] + [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, n)]
    return RootedTree(parent)


def undirected_degrees(t: RootedTree) -> list[int]:
    return [len(t.children[v]) + (0 if v == t.root else 1) for v in range(t.vertex_count)]


def test_single_vertex():
    t = random_tree(1, 5, 0)
    assert t.vertex_count == 1 and t.children[0] == []


def test_degree_cap_two_forces_path_shape():
    t = random_tree(5, 2, 123)
    degs = sorted(undirected_degrees(t))
    assert degs == [1, 1, 2, 2, 2]


def test_random_tree_large():
    t = random_tree(1000, 10, 7)
    assert t.vertex_count == 1000
    assert sum(len(c) for c in t.children) == 999
    assert t.max_degree <= 10


def test_random_tree_deterministic():
    a = random_tree(200, 5, 42)
    b = random_tree(200, 5, 42)
    c = random_tree(200, 5, 43)
    assert a.parent == b.parent
    assert a.parent != c.parent


def test_random_tree_infeasible():
    with pytest.raises(ValueError):
        random_tree(3, 1, 0)


@settings(max_examples=40)
@given(
    n=st.integers(min_value=1, max_value=60),
    max_deg=st.integers(min_value=2, max_value=8),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_random_tree_invariants(n, max_deg, seed):
    t = random_tree(n, max_deg, seed)
    assert t.vertex_count == n
    assert t.max_degree <= max(max_deg, 1)
    pos = {v: i for i, v in enumerate(t.order)}
    for v in range(n):
        if v != t.root:
            assert pos[t.parent[v]] < pos[v]


def test_prufer_tree_respects_cap_and_seed():
    a = random_tree_prufer(12, 4, 5)
    b = random_tree_prufer(12, 4, 5)
    assert a.parent == b.parent
    assert a.max_degree <= 4
    assert a.vertex_count == 12


def test_adversarial_tree_counts():
    t = adversarial_tree(100, 0.2)
    assert t.vertex_count == 1871
    level2 = [v for v in range(t.vertex_count) if t.depths[v] == 2]
    assert len(level2) == 90
    z = adversarial_special_vertex(100)
    assert len(t.children[z]) == 79
    assert t.max_degree == 80 == math.floor((1 - 0.2) * 100)
    # total stays within eps*d^2 plus a modest linear remainder
    assert t.vertex_count <= 0.2 * 100**2 + 2 * 100


def test_adversarial_special_vertex_is_last_level2_in_bfs():
    t = adversarial_tree(100, 0.2)
    z = adversarial_special_vertex(100)
    level2_in_order = [v for v in t.order if t.depths[v] == 2]
    assert level2_in_order[-1] == z
    assert max(t.depths) == 3


def test_adversarial_tree_preconditions():
    with pytest.raises(ValueError):
        adversarial_tree(15, 0.2)
    with pytest.raises(ValueError):
        adversarial_tree(100, 0.6)
    with pytest.raises(ValueError):
        adversarial_tree(100, 0.0)
    with pytest.raises(ValueError):
        adversarial_tree(16, 0.05)  # floor(eps*d) < 2


def test_descendants_on_path_and_star():
    p = path_tree(5)
    assert descendants_at_depth(p, p.root, 2) == {2}
    s = star_tree(6)
    assert descendants_at_depth(s, s.root, 1) == {1, 2, 3, 4, 5}
    assert descendants_at_depth(s, s.root, 2) == set()


def test_descendants_match_parent_walk_oracle():
    t = random_tree(50, 4, 99)
    for x in range(50):
        for depth in range(5):
            assert descendants_at_depth(t, x, depth) == descendants_by_parent_walk(t, x, depth)


def test_descendants_of_root_partition_vertices():
    t = random_tree(80, 5, 3)
    seen = set()
    for j in range(max(t.depths) + 1):
        level = descendants_at_depth(t, t.root, j)
        assert not (level & seen)
        seen |= level
    assert seen == set(range(80))


def test_level_partition_k1_and_path():
    t = random_tree(30, 4, 8)
    blocks = level_partition(t, 1)
    assert blocks == [set(range(30))]
    p = path_tree(4)
    assert level_partition(p, 2) == [{0, 2}, {1, 3}]


@settings(max_examples=30)
@given(t=small_trees(), k=st.integers(min_value=1, max_value=6))
def test_level_partition_is_partition(t, k):
    blocks = level_partition(t, k)
    assert len(blocks) == k
    union = set()
    total = 0
    for b in blocks:
        union |= b
        total += len(b)
    assert union == set(range(t.vertex_count))
    assert total == t.vertex_count


def test_rooted_tree_validation():
    with pytest.raises(ValueError, match="exactly one root"):
        RootedTree([0, 1])
    with pytest.raises(ValueError, match="exactly one root"):
        RootedTree([-1, -1])
    with pytest.raises(ValueError, match="do not form a tree"):
        RootedTree([-1, 2, 1])


def test_tree_file_round_trip(tmp_path):
    t = random_tree(40, 4, 17)
    path = str(tmp_path / "t.txt")
    save_tree(t, path)
    t2 = load_tree(path)
    assert t2.parent == t.parent
    assert t2.order == t.order


def test_load_tree_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 -1\n1 0\n2 0\n")
    with pytest.raises(ValueError, match="out of range"):
        load_tree(str(bad))
    bad.write_text("3 0\n1 0\n5 0\n")
    with pytest.raises(ValueError, match="out of range"):
        load_tree(str(bad))
    bad.write_text("3 0\n1 0\n1 0\n")
    with pytest.raises(ValueError, match="assigned twice"):
        load_tree(str(bad))
