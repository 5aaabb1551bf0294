"""Randomized tree embedding in sparse graphs via self-avoiding tree-indexed random walks."""

from .analysis import (
    CommonNeighborStats,
    PropertyReport,
    ThresholdSet,
    check_property,
    common_neighbor_stats,
    count_paths,
    empirical_exceedance,
    girth,
    kst_free,
    pseudo_params,
    select_k,
    supermartingale_bound,
    thresholds_c4,
    thresholds_girth,
    thresholds_kst,
    thresholds_pseudo,
)
from .embedding import EmbedParams, Embedding, EmbedTrace, embed, verify_embedding
from .generators import (
    GnpSpec,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    fixture_graph,
    gnp_graph,
    path_graph,
    projective_plane_graph,
)
from .graphs import (
    Graph,
    NeighborCap,
    load_edge_list,
    make_neighbor_cap,
    min_degree,
    save_edge_list,
)
from .harness import (
    DepletionProbeResult,
    ExperimentConfig,
    ExperimentReport,
    clopper_pearson,
    depletion_probe,
    emit_results,
    run_experiment,
)
from .seeds import mix, splitmix64
from .trees import (
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

__version__ = "0.1.0"
