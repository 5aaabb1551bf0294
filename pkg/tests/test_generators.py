import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treewalk.analysis import girth, kst_free
from treewalk.generators import (
    GnpSpec,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    fixture_graph,
    gnp_graph,
    path_graph,
    projective_plane_graph,
)

from .oracles import adjacency_sets, girth_by_edge_removal, is_bipartite_by_coloring


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_projective_plane_basics(q):
    g = projective_plane_graph(q)
    g.validate()
    n_side = q * q + q + 1
    assert g.vertex_count == 2 * n_side
    assert set(g.degrees().tolist()) == {q + 1}
    assert g.edge_count == n_side * (q + 1)
    assert is_bipartite_by_coloring(g)
    # parts by construction: points first, lines second, edges only across
    for u, v in g.edge_array().tolist():
        assert (u < n_side) != (v < n_side)


def test_projective_plane_heawood():
    g = projective_plane_graph(2)
    assert g.vertex_count == 14
    assert g.edge_count == 21
    assert girth(g) == 6


def test_projective_plane_q3_counts():
    g = projective_plane_graph(3)
    assert g.vertex_count == 26
    assert g.edge_count == 52
    assert set(g.degrees().tolist()) == {4}


def test_projective_plane_q5_girth_and_c4_freeness():
    g = projective_plane_graph(5)
    assert g.vertex_count == 62
    assert set(g.degrees().tolist()) == {6}
    assert girth_by_edge_removal(g) == 6
    assert girth(g) == 6
    assert kst_free(g, 2, 2)


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_projective_plane_unique_common_line(q):
    # any two distinct points lie on exactly one common line, and dually
    g = projective_plane_graph(q)
    adj = adjacency_sets(g)
    n_side = q * q + q + 1
    for part in (range(n_side), range(n_side, 2 * n_side)):
        both = list(part)
        for i, u in enumerate(both):
            for v in both[i + 1:]:
                assert len(adj[u] & adj[v]) == 1


@pytest.mark.parametrize("q", [0, 1, 4, 6, 9])
def test_projective_plane_rejects_nonprime(q):
    with pytest.raises(ValueError, match="q must be prime"):
        projective_plane_graph(q)


def test_gnp_degenerate_probabilities():
    assert gnp_graph(GnpSpec(100, 0.0, 1)).edge_count == 0
    assert gnp_graph(GnpSpec(50, 1.0, 1)).edge_count == 1225


def test_gnp_edge_count_within_four_sigma():
    # binomial over C(10^4, 2) pairs at p = 0.01: mean 499950, sigma ~ 703
    g = gnp_graph(GnpSpec(10000, 0.01, 20240517))
    assert abs(g.edge_count - 499950) <= 4 * 704


def test_gnp_per_pair_inclusion_frequency():
    # decode bias in the skip sampler would skew specific pair positions
    n, p, runs = 6, 0.3, 4000
    counts = {}
    for seed in range(runs):
        g = gnp_graph(GnpSpec(n, p, seed))
        for u, v in g.edge_array().tolist():
            counts[(u, v)] = counts.get((u, v), 0) + 1
    for u in range(n):
        for v in range(u + 1, n):
            freq = counts.get((u, v), 0) / runs
            assert abs(freq - p) <= 0.035  # 4.8 binomial sigma


def test_gnp_reproducible():
    a = gnp_graph(GnpSpec(300, 0.05, 9))
    b = gnp_graph(GnpSpec(300, 0.05, 9))
    c = gnp_graph(GnpSpec(300, 0.05, 10))
    assert np.array_equal(a.neighbors, b.neighbors)
    assert not np.array_equal(a.neighbors, c.neighbors)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=40),
    p=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_gnp_always_valid(n, p, seed):
    g = gnp_graph(GnpSpec(n, p, seed))
    g.validate()
    assert g.edge_count <= n * (n - 1) // 2


def test_gnp_spec_validation():
    with pytest.raises(ValueError):
        GnpSpec(0, 0.5, 1)
    with pytest.raises(ValueError):
        GnpSpec(10, 1.5, 1)


def test_fixture_cycle():
    g = cycle_graph(5)
    assert g.vertex_count == 5 and g.edge_count == 5
    assert girth(g) == 5


def test_fixture_complete():
    g = complete_graph(4)
    assert g.edge_count == 6
    assert set(g.degrees().tolist()) == {3}


def test_fixture_complete_bipartite():
    g = complete_bipartite_graph(3, 3)
    assert g.edge_count == 9
    assert girth(g) == 4


def test_fixture_path():
    g = path_graph(1)
    assert g.vertex_count == 1 and g.edge_count == 0
    assert girth(path_graph(6)) is None


def test_fixture_errors():
    with pytest.raises(ValueError):
        cycle_graph(2)
    with pytest.raises(ValueError):
        complete_graph(0)
    with pytest.raises(ValueError):
        complete_bipartite_graph(0, 3)


def test_fixture_dispatcher():
    assert fixture_graph("cycle", n=4).edge_count == 4
    assert fixture_graph("complete_bipartite", a=2, b=3).edge_count == 6
    with pytest.raises(ValueError, match="unknown fixture"):
        fixture_graph("hypercube", n=3)
