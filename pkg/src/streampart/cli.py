"""Command-line interface.

Subcommands: generate, partition, compare, optimize, sample-configs, tradeoff.
The STREAMPART_OUT environment variable overrides the output directory.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .cost_model import (
    CostParams,
    ViciousCostInstance,
    expected_time_mc,
    expected_time_wb,
    wb_preferred,
)
from .generators import build_edge_set, sample_random_partitions
from .harness import (
    ExperimentSpec,
    GeneratorSource,
    compare_strategies,
    export_edge_list,
    ingest_edge_list,
    run_experiment,
)
from .optimizer import OptimizerConfig
from .workload import WalkConfig

GEN_KINDS = ("powerlaw", "ring", "vicious", "communities")


def _add_source_args(p: argparse.ArgumentParser, file_ok: bool = True, kind_required: bool = False) -> None:
    if file_ok:
        p.add_argument("--input", help="edge-list file (whitespace 'src dst' lines)")
    p.add_argument("--kind", choices=GEN_KINDS, required=kind_required, help="synthetic generator")
    p.add_argument("--nodes", type=int, default=1000, help="powerlaw: node count")
    p.add_argument("--m", type=int, default=2, help="powerlaw/communities: attachment edges")
    p.add_argument("--triad", type=float, default=0.5, help="powerlaw/communities: triad closure probability")
    p.add_argument("--ring-k", type=int, default=3, help="ring: server count (2k clusters)")
    p.add_argument("--cluster-size", type=int, default=4, help="ring: nodes per cluster")
    p.add_argument("--a-links", type=int, default=1, help="ring: links per A boundary")
    p.add_argument("--b-links", type=int, default=2, help="ring: links per B boundary")
    p.add_argument("--big", type=int, default=20, help="vicious: large cluster size N")
    p.add_argument("--small", type=int, default=10, help="vicious: small cluster size n")
    p.add_argument("--c-links", type=int, default=3, help="vicious: links between equal clusters")
    p.add_argument("--communities", type=int, default=4, help="communities: community count")
    p.add_argument("--community-size", type=int, default=250, help="communities: nodes per community")
    p.add_argument("--bridges", type=int, default=3, help="communities: bridges per community pair")


def _gen_params(args: argparse.Namespace) -> dict:
    return {
        "powerlaw": {"nodes": args.nodes, "m": args.m, "triad": args.triad},
        "ring": {
            "k": args.ring_k,
            "cluster_size": args.cluster_size,
            "a_links": args.a_links,
            "b_links": args.b_links,
        },
        "vicious": {"big": args.big, "small": args.small, "c_links": args.c_links},
        "communities": {
            "communities": args.communities,
            "community_size": args.community_size,
            "m": args.m,
            "triad": args.triad,
            "bridges_per_pair": args.bridges,
        },
    }[args.kind]


def _source_from_args(args: argparse.Namespace):
    if getattr(args, "input", None):
        return args.input
    if args.kind:
        return GeneratorSource(args.kind, _gen_params(args))
    raise SystemExit("need --input or --kind")


def _parse_capacity(text: str):
    if text == "auto":
        return "auto"
    if text == "none":
        return None
    return int(text)


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=4, help="partition count")
    p.add_argument("--capacity", type=_parse_capacity, default="auto", help="int, 'auto' or 'none'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-every", type=int, default=100)
    p.add_argument("--shuffle", action="store_true", help="stream ingested files in seeded random order")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--name", default="experiment")


def _spec_from_args(args: argparse.Namespace, strategy: str, optimizer=None, workload=None) -> ExperimentSpec:
    return ExperimentSpec(
        source=_source_from_args(args),
        k=args.k,
        strategy=strategy,
        capacity=args.capacity,
        optimizer=optimizer,
        workload=workload,
        seed=args.seed,
        sample_every=args.sample_every,
        shuffle=args.shuffle,
        out_dir=args.out_dir,
        name=args.name,
        first_trigger=getattr(args, "first_trigger", 200),
        buffer_lookahead=getattr(args, "lookahead", 10),
        batch_size=getattr(args, "batch_size", None),
    )


def cmd_generate(args) -> int:
    edges = build_edge_set(args.kind, _gen_params(args), args.seed)
    export_edge_list(edges, args.out)
    nodes = {v for e in edges for v in e}
    print(f"wrote {len(edges)} edges over {len(nodes)} nodes to {args.out}")
    return 0


def cmd_partition(args) -> int:
    spec = _spec_from_args(args, args.strategy)
    result = run_experiment(spec)
    m = result.final
    print(f"final: edges={m.edges_seen} balance={m.balance:.4f} cut_score={m.cut_score:.4f}")
    print(f"metrics: {result.metrics_path}")
    if result.warnings.get("self_loops_dropped") or result.warnings.get("duplicates_dropped"):
        print(f"ingest warnings: {result.warnings}")
    return 0


def cmd_compare(args) -> int:
    spec = _spec_from_args(args, "stream-greedy")
    comparison = compare_strategies(spec)
    print(comparison.table())
    for name, path in comparison.paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_optimize(args) -> int:
    opt = OptimizerConfig(
        epsilon=args.epsilon,
        topk_fraction=args.topk,
        trigger_growth=args.growth,
        criterion_bias=args.bias,
    )
    walk = WalkConfig(
        walks_per_request=args.walks,
        alpha=args.alpha,
        min_hops=args.min_hops,
        seed=args.seed,
    )
    spec = _spec_from_args(args, "stream-greedy", optimizer=opt, workload=walk)
    result = run_experiment(spec)
    m = result.final
    outcomes = [row.outcome for row in result.report.outcomes]
    committed = sum(o.committed for o in outcomes)
    print(f"final: edges={m.edges_seen} balance={m.balance:.4f} cut_score={m.cut_score:.4f}")
    print(f"optimization steps: {len(outcomes)} committed={committed} rolled_back={len(outcomes) - committed}")
    print(f"metrics: {result.metrics_path}")
    print(f"outcomes: {result.outcomes_path}")
    return 0


def cmd_sample_configs(args) -> int:
    if getattr(args, "input", None):
        edges = {e.key() for e in ingest_edge_list(args.input).events}
    else:
        edges = build_edge_set(args.kind, _gen_params(args), args.seed)
    points = sample_random_partitions(edges, args.k, args.trials, args.seed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["balance", "cut_score"])
        for balance, cut in points:
            w.writerow([f"{balance:.6f}", f"{cut:.6f}"])
    print(f"wrote {len(points)} sampled configurations to {args.out}")
    return 0


def cmd_tradeoff(args) -> int:
    params = CostParams(chi=args.chi, lam=args.lam, phi=args.phi, ell=args.ell, mu=args.mu)
    inst = ViciousCostInstance(big=args.big, small=args.small, c_links=args.c_links, params=params)
    wb, mc = expected_time_wb(inst), expected_time_mc(inst)
    pick = "well-balanced" if wb_preferred(inst) else "min-cut"
    print(f"expected request time, balanced bisection: {wb:.6f}")
    print(f"expected request time, min-cut bisection:  {mc:.6f}")
    print(f"preferred: {pick}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streampart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    _add_source_args(p, file_ok=False, kind_required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("partition", help="stream a graph through one strategy")
    _add_source_args(p)
    _add_run_args(p)
    p.add_argument("--strategy", choices=("random", "stream-greedy", "baseline"), default="stream-greedy")
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("compare", help="run all three strategies on the same stream")
    _add_source_args(p)
    _add_run_args(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("optimize", help="stream-greedy plus blind hill climbing")
    _add_source_args(p)
    _add_run_args(p)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--topk", type=float, default=0.10)
    p.add_argument("--growth", type=float, default=0.05)
    p.add_argument("--bias", type=float, default=0.5, help="probability of the cut criterion")
    p.add_argument("--first-trigger", type=int, default=200)
    p.add_argument("--lookahead", type=int, default=10, help="events buffered during a step")
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--walks", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--min-hops", type=int, default=3)
    p.set_defaults(fn=cmd_optimize)

    p = sub.add_parser("sample-configs", help="random-partition (balance, cut) sampling")
    _add_source_args(p)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_sample_configs)

    p = sub.add_parser("tradeoff", help="cost-model calculator for the vicious graph")
    p.add_argument("--big", type=int, required=True)
    p.add_argument("--small", type=int, required=True)
    p.add_argument("--c-links", type=int, required=True)
    p.add_argument("--chi", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=1.0)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--mu", type=float, default=1.0)
    p.set_defaults(fn=cmd_tradeoff)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # surface module errors as a clean nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
