"""Seeded Monte Carlo experiment driver.

A run executes independent embedding trials against one immutable host
graph, with per-trial seeds derived from the base seed (see seeds.mix), and
aggregates success rates, occupancy tails and choice-depletion statistics
into a machine-readable report. Identical configs always produce identical
reports, apart from wall-clock fields, regardless of thread count.

Config file format: flat ``key = value`` text, one pair per line, ``#``
comments allowed. Keys:

    graph.family   pp | gnp | cycle | path | complete | kst | file
    graph.q        prime order (pp)
    graph.n        vertex count (gnp, cycle, path, complete)
    graph.p        edge probability (gnp)
    graph.seed     graph stream seed (gnp)
    graph.a/.b     part sizes (kst)
    graph.path     edge-list file (file)
    tree.model     random | prufer | adversarial | path | star
    tree.n         tree size (random, prufer, path, star)
    tree.max_degree  degree cap (random, prufer)
    tree.d/.eps    parameters of the adversarial shape
    tree.fixed     true to reuse one tree across trials (default false:
                   a fresh tree per trial, seeded independently)
    embed.variant  a1 | a2 | a3 | a4
    embed.cap      cap size (a2, a3)
    embed.cap_seed optional seed for a randomized cap (default: smallest-index cap)
    embed.warmup   warmup walk length (a3, a4)
    trials         number of trials (>= 1)
    base_seed      64-bit base seed
    theorem        optional: c4 | girth | kst | pseudo; enables threshold
                   validation of the tree parameters and the occupancy check
    theorem.eps/.k/.s/.t/.delta/.strong_degree   regime parameters
    collect.occupancy / collect.depletion / collect.traces   booleans

The regime degree d is the cap size when a cap is configured, else the
measured minimum degree of the built host. For the pseudo regime, theorem.t
defaults to half the host order. The occupancy check counts a trial as ok
when no vertex's candidate neighborhood ever held more than the regime
threshold of occupied vertices (2*eps*d + 2 for c4/girth, d/2 + 2t for kst,
d/k for pseudo), children of the vertex embedded there excluded.
"""

from __future__ import annotations

import json
import multiprocessing
import time
from dataclasses import dataclass, field
from typing import Any

from scipy.stats import beta as _beta

from . import trees as _trees
from .analysis import (
    thresholds_c4,
    thresholds_girth,
    thresholds_kst,
    thresholds_pseudo,
)
from .embedding import EmbedParams, embed, verify_embedding
from .generators import (
    GnpSpec,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    gnp_graph,
    path_graph,
    projective_plane_graph,
)
from .graphs import Graph, NeighborCap, load_edge_list, make_neighbor_cap, min_degree
from .seeds import mix
from .trees import RootedTree

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "depletion_probe",
    "DepletionProbeResult",
    "emit_results",
    "clopper_pearson",
]

CSV_COLUMNS = [
    "theorem_tag",
    "d",
    "eps",
    "k",
    "s",
    "t",
    "delta",
    "tree_size",
    "tree_degree",
    "trials",
    "successes",
    "rate",
    "ci_lo",
    "ci_hi",
    "occupancy_ok_fraction",
]


def _parse_scalar(text: str) -> Any:
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


@dataclass
class ExperimentConfig:
    """Parsed experiment description; see the module docstring for keys."""

    graph_family: str
    graph_params: dict
    tree_model: str
    tree_params: dict
    variant: str
    trials: int
    base_seed: int
    cap_size: int | None = None
    cap_seed: int | None = None
    warmup_k: int | None = None
    tree_fixed: bool = False
    theorem: str | None = None
    theorem_params: dict = field(default_factory=dict)
    collect_occupancy: bool = True
    collect_depletion: bool = True
    collect_traces: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        kv: dict[str, Any] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key = value")
            key, val = line.split("=", 1)
            kv[key.strip()] = _parse_scalar(val.strip())

        def group(prefix: str) -> dict:
            plen = len(prefix) + 1
            return {k[plen:]: v for k, v in kv.items() if k.startswith(prefix + ".")}

        try:
            return cls(
                graph_family=str(kv["graph.family"]),
                graph_params={k: v for k, v in group("graph").items() if k != "family"},
                tree_model=str(kv["tree.model"]),
                tree_params={
                    k: v for k, v in group("tree").items() if k not in ("model", "fixed")
                },
                variant=str(kv["embed.variant"]),
                trials=int(kv["trials"]),
                base_seed=int(kv["base_seed"]),
                cap_size=kv.get("embed.cap"),
                cap_seed=kv.get("embed.cap_seed"),
                warmup_k=kv.get("embed.warmup"),
                tree_fixed=bool(kv.get("tree.fixed", False)),
                theorem=kv.get("theorem"),
                theorem_params=group("theorem"),
                collect_occupancy=bool(kv.get("collect.occupancy", True)),
                collect_depletion=bool(kv.get("collect.depletion", True)),
                collect_traces=bool(kv.get("collect.traces", False)),
            )
        except KeyError as exc:
            raise ValueError(f"missing config key: {exc.args[0]}") from exc

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_text(fh.read())

    def to_dict(self) -> dict:
        return {
            "graph_family": self.graph_family,
            "graph_params": dict(self.graph_params),
            "tree_model": self.tree_model,
            "tree_params": dict(self.tree_params),
            "tree_fixed": self.tree_fixed,
            "variant": self.variant,
            "cap_size": self.cap_size,
            "cap_seed": self.cap_seed,
            "warmup_k": self.warmup_k,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "theorem": self.theorem,
            "theorem_params": dict(self.theorem_params),
            "collect_occupancy": self.collect_occupancy,
            "collect_depletion": self.collect_depletion,
            "collect_traces": self.collect_traces,
        }


def build_graph(family: str, params: dict) -> Graph:
    """Construct a host graph from a config-style family description."""
    if family == "pp":
        return projective_plane_graph(int(params["q"]))
    if family == "gnp":
        return gnp_graph(GnpSpec(int(params["n"]), float(params["p"]), int(params.get("seed", 0))))
    if family == "cycle":
        return cycle_graph(int(params["n"]))
    if family == "path":
        return path_graph(int(params["n"]))
    if family == "complete":
        return complete_graph(int(params["n"]))
    if family == "kst":
        return complete_bipartite_graph(int(params["a"]), int(params["b"]))
    if family == "file":
        return load_edge_list(str(params["path"]))
    raise ValueError(f"unknown graph family {family!r}")


def build_tree(model: str, params: dict, seed: int) -> RootedTree:
    """Construct a tree pattern from a config-style model description."""
    if model == "random":
        return _trees.random_tree(int(params["n"]), int(params["max_degree"]), seed)
    if model == "prufer":
        return _trees.random_tree_prufer(int(params["n"]), int(params["max_degree"]), seed)
    if model == "adversarial":
        return _trees.adversarial_tree(int(params["d"]), float(params["eps"]))
    if model == "path":
        return _trees.path_tree(int(params["n"]))
    if model == "star":
        return _trees.star_tree(int(params["n"]))
    raise ValueError(f"unknown tree model {model!r}")


def _tree_size_and_degree(config: ExperimentConfig) -> tuple[int, int]:
    """Configured tree size and maximum degree, building once if needed."""
    model, params = config.tree_model, config.tree_params
    if model in ("random", "prufer"):
        return int(params["n"]), int(params["max_degree"])
    if model == "path":
        n = int(params["n"])
        return n, (min(2, n - 1) if n > 1 else 0)
    if model == "star":
        n = int(params["n"])
        return n, n - 1
    probe = build_tree(model, params, seed=0)
    return probe.vertex_count, probe.max_degree


def clopper_pearson(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact binomial confidence interval for a success proportion."""
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError("need 0 <= successes <= trials, trials >= 1")
    alpha = 1.0 - confidence
    lo = 0.0 if successes == 0 else float(_beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = (
        1.0
        if successes == trials
        else float(_beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    )
    return lo, hi


@dataclass
class ExperimentReport:
    """Aggregated result of one experiment run."""

    config: dict
    d: int
    tree_size: int
    tree_degree: int
    thresholds: dict | None
    occupancy_threshold: float | None
    trials: int
    successes: int
    failures: int
    success_rate: float
    ci_lo: float
    ci_hi: float
    success_flags: list[bool]
    failed_at: list[int | None]
    occupancy_max_per_trial: list[int] | None
    occupancy_histogram: dict[int, int] | None
    occupancy_ok_fraction: float | None
    min_choices_per_trial: list[int] | None
    min_choices_overall: int | None
    traces: list[dict] | None
    wall_clock_total: float = 0.0
    wall_clock_per_trial: list[float] = field(default_factory=list)

    def to_json_dict(self, include_timing: bool = True) -> dict:
        out = {
            "config": self.config,
            "resolved": {
                "d": self.d,
                "tree_size": self.tree_size,
                "tree_degree": self.tree_degree,
                "thresholds": self.thresholds,
                "occupancy_threshold": self.occupancy_threshold,
            },
            "trials": self.trials,
            "successes": self.successes,
            "failures": self.failures,
            "success_rate": self.success_rate,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "success_flags": [bool(x) for x in self.success_flags],
            "failed_at": list(self.failed_at),
            "occupancy": (
                None
                if self.occupancy_max_per_trial is None
                else {
                    "max_per_trial": list(self.occupancy_max_per_trial),
                    "histogram": {str(k): v for k, v in sorted(self.occupancy_histogram.items())},
                    "ok_fraction": self.occupancy_ok_fraction,
                }
            ),
            "depletion": (
                None
                if self.min_choices_per_trial is None
                else {
                    "min_choices_per_trial": list(self.min_choices_per_trial),
                    "min_overall": self.min_choices_overall,
                }
            ),
            "traces": self.traces,
        }
        if include_timing:
            out["timing"] = {
                "wall_clock_total": self.wall_clock_total,
                "wall_clock_per_trial": list(self.wall_clock_per_trial),
            }
        return out

    def fingerprint(self) -> str:
        """Canonical JSON of everything deterministic (timing excluded)."""
        return json.dumps(self.to_json_dict(include_timing=False), sort_keys=True)


@dataclass
class _TrialSetup:
    graph: Graph
    cap: NeighborCap | None
    variant: str
    warmup_k: int | None
    base_seed: int
    tree_model: str
    tree_params: dict
    fixed_tree: RootedTree | None
    record_trace: bool
    keep_trace: bool


_SETUP: _TrialSetup | None = None


def _set_setup(setup: _TrialSetup) -> None:
    global _SETUP
    _SETUP = setup


def _run_trial(index: int) -> tuple:
    s = _SETUP
    tree = s.fixed_tree or build_tree(s.tree_model, s.tree_params, seed=mix(s.base_seed, index, 1))
    params = EmbedParams(
        variant=s.variant,
        cap=s.cap,
        warmup_k=s.warmup_k,
        seed=mix(s.base_seed, index, 0),
        record_trace=s.record_trace,
    )
    t0 = time.perf_counter()
    emb, trace = embed(s.graph, tree, params)
    wall = time.perf_counter() - t0
    if trace.success and not verify_embedding(s.graph, tree, emb):
        raise RuntimeError(f"trial {index}: reported success fails verification")
    max_occ = None
    if trace.occupancy_max is not None:
        max_occ = max(trace.occupancy_max.values(), default=0)
    min_avail = min(trace.available_choices) if trace.available_choices else None
    payload = trace.to_json_dict() if s.keep_trace else None
    return (index, trace.success, trace.failed_at, max_occ, min_avail, wall, payload)


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    """Execute all trials of a config and aggregate the report.

    Infeasible configs (tree larger than the host, cap above the minimum
    degree, tree parameters exceeding the bound set named by ``theorem``)
    raise before any trial runs. Trials are independent; with threads > 1
    they run in forked workers, and the report is identical to a serial run.
    """
    needs_cap = config.variant in ("a2", "a3")
    needs_walk = config.variant in ("a3", "a4")
    if needs_cap and config.cap_size is None:
        raise ValueError(f"variant {config.variant} requires embed.cap")
    if not needs_cap and config.cap_size is not None:
        raise ValueError(f"variant {config.variant} does not take embed.cap")
    if needs_walk and config.warmup_k is None:
        raise ValueError(f"variant {config.variant} requires embed.warmup")
    if not needs_walk and config.warmup_k is not None:
        raise ValueError(f"variant {config.variant} does not take embed.warmup")

    g = build_graph(config.graph_family, config.graph_params)
    cap = None
    if needs_cap:
        cap = make_neighbor_cap(g, int(config.cap_size), seed=config.cap_seed)
    d = cap.cap_size if cap is not None else min_degree(g)

    tree_size, tree_degree = _tree_size_and_degree(config)
    if tree_size > g.vertex_count:
        raise ValueError("tree larger than graph")

    thresholds = None
    occ_threshold = None
    if config.theorem is not None:
        tp = config.theorem_params
        if config.theorem == "c4":
            ts = thresholds_c4(d, float(tp["eps"]))
            occ_threshold = 2 * float(tp["eps"]) * d + 2
        elif config.theorem == "girth":
            ts = thresholds_girth(d, int(tp["k"]), float(tp["eps"]))
            occ_threshold = 2 * float(tp["eps"]) * d + 2
        elif config.theorem == "kst":
            ts = thresholds_kst(d, int(tp["s"]), int(tp["t"]), bool(tp.get("strong_degree", False)))
            occ_threshold = d / 2 + 2 * int(tp["t"])
        elif config.theorem == "pseudo":
            t_param = int(tp.get("t", g.vertex_count // 2))
            ts = thresholds_pseudo(d, t_param, int(tp["k"]), float(tp["eps"]), float(tp["delta"]))
            occ_threshold = d / int(tp["k"])
        else:
            raise ValueError(f"unknown theorem tag {config.theorem!r}")
        if tree_size > ts.max_tree_size:
            raise ValueError(
                f"tree size {tree_size} exceeds regime bound {ts.max_tree_size}"
            )
        if tree_degree > ts.max_tree_degree:
            raise ValueError(
                f"tree degree {tree_degree} exceeds regime bound {ts.max_tree_degree}"
            )
        thresholds = ts.to_json_dict()

    record_trace = config.collect_occupancy or config.collect_depletion or config.collect_traces
    fixed_tree = None
    if config.tree_fixed:
        fixed_tree = build_tree(config.tree_model, config.tree_params, seed=mix(config.base_seed, 0, 1))

    # warm shared caches before forking so workers inherit them
    g.adjacency_lists()
    if cap is not None:
        cap.as_lists()
        cap.reverse_csr()

    setup = _TrialSetup(
        graph=g,
        cap=cap,
        variant=config.variant,
        warmup_k=config.warmup_k,
        base_seed=config.base_seed,
        tree_model=config.tree_model,
        tree_params=config.tree_params,
        fixed_tree=fixed_tree,
        record_trace=record_trace,
        keep_trace=config.collect_traces,
    )
    _set_setup(setup)
    t0 = time.perf_counter()
    if threads > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(threads, initializer=_set_setup, initargs=(setup,)) as pool:
            results = pool.map(_run_trial, range(config.trials))
    else:
        results = [_run_trial(i) for i in range(config.trials)]
    total_wall = time.perf_counter() - t0
    results.sort(key=lambda r: r[0])

    flags = [r[1] for r in results]
    failed = [r[2] for r in results]
    successes = sum(flags)
    rate = successes / config.trials
    ci_lo, ci_hi = clopper_pearson(successes, config.trials)

    occ_list = occ_hist = occ_ok = None
    if config.collect_occupancy:
        occ_list = [int(r[3]) for r in results]
        occ_hist = {}
        for x in occ_list:
            occ_hist[x] = occ_hist.get(x, 0) + 1
        if occ_threshold is not None:
            occ_ok = sum(1 for x in occ_list if x <= occ_threshold) / config.trials

    min_list = min_overall = None
    if config.collect_depletion:
        min_list = [int(r[4]) for r in results]
        min_overall = min(min_list)

    traces = [r[6] for r in results] if config.collect_traces else None

    return ExperimentReport(
        config=config.to_dict(),
        d=d,
        tree_size=tree_size,
        tree_degree=tree_degree,
        thresholds=thresholds,
        occupancy_threshold=occ_threshold,
        trials=config.trials,
        successes=successes,
        failures=config.trials - successes,
        success_rate=rate,
        ci_lo=ci_lo,
        ci_hi=ci_hi,
        success_flags=flags,
        failed_at=failed,
        occupancy_max_per_trial=occ_list,
        occupancy_histogram=occ_hist,
        occupancy_ok_fraction=occ_ok,
        min_choices_per_trial=min_list,
        min_choices_overall=min_overall,
        traces=traces,
        wall_clock_total=total_wall,
        wall_clock_per_trial=[r[5] for r in results],
    )


@dataclass
class DepletionProbeResult:
    """Availability at the stressed vertex, across trials."""

    mean_available: float
    available_per_trial: list[int]
    failures: int

    def to_json_dict(self) -> dict:
        return {
            "mean_available": self.mean_available,
            "available_per_trial": list(self.available_per_trial),
            "failures": self.failures,
        }


def depletion_probe(
    g: Graph, d: int, eps: float, trials: int, base_seed: int
) -> DepletionProbeResult:
    """Measure how many neighbors of the stressed vertex's image stay free.

    Runs the uncapped embedding on the adversarial depth-3 tree with the
    heavy vertex's children removed; since that vertex is placed last, the
    count of unoccupied neighbors of its image at the end of the run is
    exactly the head room its children would have had.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    degs = g.degrees()
    if degs.size == 0 or int(degs.min()) != d or int(degs.max()) != d:
        raise ValueError(f"host is not {d}-regular")
    if g.vertex_count != 2 * (d * d - d + 1):
        raise ValueError("host order does not match a projective-plane incidence graph")
    full = _trees.adversarial_tree(d, eps)
    special = _trees.adversarial_special_vertex(d)
    keep = full.vertex_count - len(full.children[special])
    probe = RootedTree(full.parent[:keep])
    if probe.children[special]:
        raise AssertionError("heavy vertex still has children after truncation")

    available: list[int] = []
    failures = 0
    for i in range(trials):
        params = EmbedParams(variant="a1", seed=mix(base_seed, i, 0), record_trace=False)
        emb, trace = embed(g, probe, params)
        if not trace.success:
            failures += 1
            continue
        img = set(emb.assignment)
        fz = emb.assignment[special]
        free = sum(1 for w in g.neighbors_of(fz).tolist() if w not in img)
        available.append(free)
    if not available:
        raise RuntimeError("all probe trials failed")
    return DepletionProbeResult(
        mean_available=sum(available) / len(available),
        available_per_trial=available,
        failures=failures,
    )


def emit_results(report: ExperimentReport, fmt: str, path: str) -> None:
    """Write a report as JSON (full mirror) or CSV (one fixed-schema row).

    CSV columns, in order: theorem_tag, d, eps, k, s, t, delta, tree_size,
    tree_degree, trials, successes, rate, ci_lo, ci_hi,
    occupancy_ok_fraction. Regime parameters not applicable to the run are
    left empty.
    """
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump(report.to_json_dict(include_timing=True), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    tp = report.config.get("theorem_params", {})
    row = [
        report.config.get("theorem") or "",
        report.d,
        tp.get("eps", ""),
        tp.get("k", ""),
        tp.get("s", ""),
        tp.get("t", ""),
        tp.get("delta", ""),
        report.tree_size,
        report.tree_degree,
        report.trials,
        report.successes,
        report.success_rate,
        report.ci_lo,
        report.ci_hi,
        "" if report.occupancy_ok_fraction is None else report.occupancy_ok_fraction,
    ]
    with open(path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        fh.write(",".join(str(x) for x in row) + "\n")
