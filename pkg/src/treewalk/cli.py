"""Command-line entry points.

Subcommands: gen-graph, gen-tree, embed, check-property, thresholds,
experiment. All outputs that are data (reports, traces) are JSON; graphs
and trees use the plain text formats of graphs.save_edge_list and
trees.save_tree.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, harness, trees
from .embedding import EmbedParams, embed
from .generators import (
    GnpSpec,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    gnp_graph,
    path_graph,
    projective_plane_graph,
)
from .graphs import load_edge_list, make_neighbor_cap, save_edge_list


def _require(args, **needed) -> None:
    missing = [flag.replace("_", "-") for flag, value in needed.items() if value is None]
    if missing:
        raise ValueError(f"{args.command} needs {', '.join('--' + m for m in missing)}")


def _cmd_gen_graph(args) -> int:
    if args.family == "pp":
        _require(args, q=args.q)
        g = projective_plane_graph(args.q)
    elif args.family == "gnp":
        _require(args, n=args.n, p=args.p)
        g = gnp_graph(GnpSpec(args.n, args.p, args.seed))
    elif args.family == "cycle":
        _require(args, n=args.n)
        g = cycle_graph(args.n)
    elif args.family == "path":
        _require(args, n=args.n)
        g = path_graph(args.n)
    elif args.family == "complete":
        _require(args, n=args.n)
        g = complete_graph(args.n)
    elif args.family == "kst":
        _require(args, a=args.a, b=args.b)
        g = complete_bipartite_graph(args.a, args.b)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    save_edge_list(g, args.out)
    print(f"wrote {g.vertex_count} vertices, {g.edge_count} edges to {args.out}")
    return 0


def _cmd_gen_tree(args) -> int:
    if args.model == "random":
        _require(args, n=args.n, max_deg=args.max_deg)
        t = trees.random_tree(args.n, args.max_deg, args.seed)
    elif args.model == "prufer":
        _require(args, n=args.n, max_deg=args.max_deg)
        t = trees.random_tree_prufer(args.n, args.max_deg, args.seed)
    elif args.model == "adversarial":
        _require(args, d=args.d, eps=args.eps)
        t = trees.adversarial_tree(args.d, args.eps)
    elif args.model == "path":
        _require(args, n=args.n)
        t = trees.path_tree(args.n)
    elif args.model == "star":
        _require(args, n=args.n)
        t = trees.star_tree(args.n)
    else:
        raise ValueError(f"unknown model {args.model!r}")
    trees.save_tree(t, args.out)
    print(f"wrote tree with {t.vertex_count} vertices, max degree {t.max_degree} to {args.out}")
    return 0


def _cmd_embed(args) -> int:
    g = load_edge_list(args.graph)
    t = trees.load_tree(args.tree)
    cap = None
    if args.variant in ("a2", "a3"):
        if args.cap is None:
            print("error: --cap is required for variants a2/a3", file=sys.stderr)
            return 2
        cap = make_neighbor_cap(g, args.cap, seed=args.cap_seed)
    warmup = args.warmup if args.variant in ("a3", "a4") else None
    params = EmbedParams(
        variant=args.variant,
        cap=cap,
        warmup_k=warmup,
        seed=args.seed,
        record_trace=True,
        start_vertex=args.root,
    )
    emb, trace = embed(g, t, params)
    summary = {
        "success": trace.success,
        "failed_at": trace.failed_at,
        "placed": emb.assigned_count,
        "tree_size": t.vertex_count,
    }
    print(json.dumps(summary, sort_keys=True))
    if args.trace:
        payload = trace.to_json_dict()
        payload["assignment"] = list(emb.assignment)
        with open(args.trace, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_check_property(args) -> int:
    g = load_edge_list(args.graph)
    report = analysis.check_property(
        g, d=args.d, k=args.k, t=args.t, sample=args.sample, seed=args.seed
    )
    print(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_thresholds(args) -> int:
    if args.theorem == "c4":
        _require(args, eps=args.eps)
        ts = analysis.thresholds_c4(args.d, args.eps)
    elif args.theorem == "girth":
        _require(args, k=args.k, eps=args.eps)
        ts = analysis.thresholds_girth(args.d, args.k, args.eps)
    elif args.theorem == "kst":
        _require(args, s=args.s, t=args.t)
        ts = analysis.thresholds_kst(args.d, args.s, args.t, args.strong_degree)
    elif args.theorem == "pseudo":
        _require(args, t=args.t, k=args.k, eps=args.eps, delta=args.delta)
        ts = analysis.thresholds_pseudo(args.d, args.t, args.k, args.eps, args.delta)
    else:
        raise ValueError(f"unknown theorem {args.theorem!r}")
    print(json.dumps(ts.to_json_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_experiment(args) -> int:
    config = harness.ExperimentConfig.from_file(args.config)
    report = harness.run_experiment(config, threads=args.threads)
    harness.emit_results(report, "json", args.out)
    if args.csv:
        harness.emit_results(report, "csv", args.csv)
    print(
        f"{report.successes}/{report.trials} successes "
        f"(rate {report.success_rate:.4f}, CI [{report.ci_lo:.4f}, {report.ci_hi:.4f}])"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treewalk")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="write a host graph as an edge list")
    p.add_argument("--family", required=True, choices=["pp", "gnp", "cycle", "path", "complete", "kst"])
    p.add_argument("--q", type=int, help="prime order (pp)")
    p.add_argument("--n", type=int, help="vertex count (gnp/cycle/path/complete)")
    p.add_argument("--p", type=float, help="edge probability (gnp)")
    p.add_argument("--seed", type=int, default=0, help="stream seed (gnp)")
    p.add_argument("--a", type=int, help="first part size (kst)")
    p.add_argument("--b", type=int, help="second part size (kst)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("gen-tree", help="write a tree pattern")
    p.add_argument("--model", required=True, choices=["random", "prufer", "adversarial", "path", "star"])
    p.add_argument("--n", type=int, help="tree size")
    p.add_argument("--max-deg", type=int, help="degree cap (random/prufer)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d", type=int, help="host degree (adversarial)")
    p.add_argument("--eps", type=float, help="light-branch fraction (adversarial)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_tree)

    p = sub.add_parser("embed", help="run one embedding attempt")
    p.add_argument("--graph", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--variant", required=True, choices=["a1", "a2", "a3", "a4"])
    p.add_argument("--cap", type=int, help="neighbor cap size (a2/a3)")
    p.add_argument("--cap-seed", type=int, default=None, help="randomize the cap with this seed")
    p.add_argument("--warmup", type=int, help="warmup walk length (a3/a4)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--root", type=int, default=None, help="pin the root image / walk start")
    p.add_argument("--trace", help="write the run trace as JSON")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("check-property", help="certify the bounded path-count property")
    p.add_argument("--graph", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--sample", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_check_property)

    p = sub.add_parser("thresholds", help="tree size/degree bounds for a host regime")
    p.add_argument("--theorem", required=True, choices=["c4", "girth", "kst", "pseudo"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--strong-degree", action="store_true")
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("experiment", help="run a Monte Carlo sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="JSON report path")
    p.add_argument("--csv", help="also write the one-row CSV summary")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
