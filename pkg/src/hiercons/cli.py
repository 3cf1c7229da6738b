"""Command-line pipeline: sampling, consensus, benchmarks and comparison.

All randomness flows from a single 64-bit seed (``--seed`` or the
HIERCONS_SEED environment variable) through the splittable derivation in
``seeding``; outputs are byte-identical for identical invocations
regardless of ``--workers``. Every output file gets a ``<file>.meta.json``
sidecar recording the command, arguments, seed and tool version.

Exit codes: 0 success, 2 usage, 3 input/parse, 4 numerical/iteration
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import __version__
from .benchmark import HierBenchmarkSpec, generate_network, sample_hierarchy
from .consensus import (all_cuts, consensus_partition, hierarchical_consensus,
                        lf_consensus, write_tree_clusters_csv, write_tree_json)
from .ensemble import (generate_ensemble, read_ensemble_csv,
                       write_ensemble_csv)
from .errors import ConvergenceError, DomainError, EdgeListParseError
from .graph import load_edge_list, write_edge_list, write_id_map
from .metrics import ami_max, entropy, mutual_information, nmi_max
from .modularity import read_partition_csv, write_partition_csv
from .resolution import (build_event_profile, estimate_gamma_min, gamma_max,
                         sample_gammas, write_event_table)
from .seeding import child

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HIERCONS_SEED")
    if env is not None:
        return int(env)
    return 0


# fixed purpose indices for deriving independent seed streams from the
# master seed; library calls spawn their own children below these
_SEED_ESTIMATE = 0
_SEED_ENSEMBLE = 1
_SEED_CONSENSUS = 2


def _write_sidecar(path, command: str, args, seed: int) -> None:
    meta = {
        "tool": "hiercons",
        "version": __version__,
        "command": command,
        "seed": seed,
        "args": {k: v for k, v in sorted(vars(args).items())
                 if k != "func" and not k.startswith("_")},
    }
    with open(str(path) + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=1, default=str)
        fh.write("\n")


def _outpath(args, name: str) -> str:
    os.makedirs(args.outdir, exist_ok=True)
    return os.path.join(args.outdir, name)


def _load_graph(args):
    return load_edge_list(args.graph, directed_policy=args.directed_policy)


def _gamma_range(graph, args, seed):
    g_max = gamma_max(graph)
    if args.gamma_min is not None:
        g_min = args.gamma_min
    else:
        g_min = estimate_gamma_min(graph, seed=child(seed, _SEED_ESTIMATE))
    if args.gamma_max is not None:
        g_max = args.gamma_max
    return g_min, g_max


def cmd_sample(args) -> int:
    if args.count < 2:
        print("error: --count must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    seed = _resolve_seed(args)
    graph = _load_graph(args)
    g_min, g_max = _gamma_range(graph, args, seed)
    gammas = sample_gammas(graph, args.strategy, args.count, (g_min, g_max))
    ensemble = generate_ensemble(graph, gammas, child(seed, _SEED_ENSEMBLE),
                                 workers=args.workers)
    ens_path = _outpath(args, "ensemble.csv")
    write_ensemble_csv(ensemble, ens_path)
    _write_sidecar(ens_path, "sample", args, seed)
    events_path = _outpath(args, "events.csv")
    write_event_table(build_event_profile(graph), events_path)
    _write_sidecar(events_path, "sample", args, seed)
    if graph.id_map is not None:
        map_path = _outpath(args, "id_map.csv")
        write_id_map(graph, map_path)
        _write_sidecar(map_path, "sample", args, seed)
    print(f"gamma_min {g_min!r}")
    print(f"gamma_max {g_max!r}")
    print(f"l {ensemble.size}")
    return EXIT_OK


def cmd_gammarange(args) -> int:
    seed = _resolve_seed(args)
    graph = _load_graph(args)
    g_min, g_max = _gamma_range(graph, args, seed)
    events_path = _outpath(args, "events.csv")
    write_event_table(build_event_profile(graph), events_path)
    _write_sidecar(events_path, "gammarange", args, seed)
    print(f"gamma_min {g_min!r}")
    print(f"gamma_max {g_max!r}")
    return EXIT_OK


def cmd_hierarchy(args) -> int:
    seed = _resolve_seed(args)
    ensemble = read_ensemble_csv(args.ensemble)
    if ensemble.size == 1:
        print("warning: ensemble has a single partition; significance "
              "statistics are degenerate", file=sys.stderr)
    tree = hierarchical_consensus(ensemble, args.alpha,
                                  child(seed, _SEED_CONSENSUS),
                                  workers=args.workers)
    tree_path = _outpath(args, "tree.json")
    write_tree_json(tree, tree_path)
    _write_sidecar(tree_path, "hierarchy", args, seed)
    clusters_path = _outpath(args, "tree_clusters.csv")
    write_tree_clusters_csv(tree, clusters_path)
    _write_sidecar(clusters_path, "hierarchy", args, seed)
    cuts = all_cuts(tree)
    cuts_path = _outpath(args, "cuts.csv")
    with open(cuts_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([repr(float(s)) for s, _ in cuts])
        for i in range(tree.n):
            writer.writerow([int(p.assignments[i]) for _, p in cuts])
    _write_sidecar(cuts_path, "hierarchy", args, seed)
    print(f"nodes {tree.n}")
    print(f"tree_nodes {len(tree.nodes)}")
    print(f"leaves {len(tree.leaves())}")
    print(f"depth {tree.depth()}")
    return EXIT_OK


def cmd_consensus(args) -> int:
    seed = _resolve_seed(args)
    ensemble = read_ensemble_csv(args.ensemble)
    part = consensus_partition(ensemble, args.alpha,
                               child(seed, _SEED_CONSENSUS),
                               workers=args.workers)
    out = _outpath(args, "consensus.csv")
    write_partition_csv(part, out)
    _write_sidecar(out, "consensus", args, seed)
    print(f"clusters {part.num_clusters}")
    return EXIT_OK


def cmd_lf(args) -> int:
    seed = _resolve_seed(args)
    ensemble = read_ensemble_csv(args.ensemble)
    part = lf_consensus(ensemble, args.tau, seed=child(seed, _SEED_CONSENSUS),
                        workers=args.workers)
    out = _outpath(args, "lf_consensus.csv")
    write_partition_csv(part, out)
    _write_sidecar(out, "lf", args, seed)
    print(f"clusters {part.num_clusters}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    with open(args.spec) as fh:
        spec = HierBenchmarkSpec.from_json(fh.read())
    hierarchy = sample_hierarchy(spec)
    graph = generate_network(spec, hierarchy)
    edge_path = _outpath(args, "network.edges")
    write_edge_list(graph, edge_path)
    _write_sidecar(edge_path, "benchmark", args, spec.seed)
    for name, part in (("g1.csv", hierarchy.level1),
                       ("g2.csv", hierarchy.level2)):
        path = _outpath(args, name)
        write_partition_csv(part, path)
        _write_sidecar(path, "benchmark", args, spec.seed)
    spec_path = _outpath(args, "spec.json")
    with open(spec_path, "w") as fh:
        fh.write(spec.to_json())
        fh.write("\n")
    _write_sidecar(spec_path, "benchmark", args, spec.seed)
    print(f"n {graph.n}")
    print(f"edges {graph.num_edges}")
    print(f"g1_clusters {hierarchy.level1.num_clusters}")
    print(f"g2_clusters {hierarchy.level2.num_clusters}")
    return EXIT_OK


def cmd_compare(args) -> int:
    g = read_partition_csv(args.partition_a)
    h = read_partition_csv(args.partition_b)
    result = {
        "mi": mutual_information(g, h),
        "nmi_max": nmi_max(g, h),
        "ami_max": ami_max(g, h),
        "entropy_g": entropy(g),
        "entropy_h": entropy(h),
    }
    text = json.dumps(result, indent=1)
    print(text)
    if args.output is not None:
        with open(args.output, "w") as fh:
            fh.write(text)
            fh.write("\n")
        _write_sidecar(args.output, "compare", args, 0)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiercons",
        description="Hierarchical consensus clustering of networks from "
                    "multiresolution modularity ensembles.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph_input=False, ensemble_input=False):
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (default: HIERCONS_SEED or 0)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--outdir", default=".")
        if graph_input:
            p.add_argument("graph", help="edge-list file: src dst [weight]")
            p.add_argument("--directed-policy", default="symmetrize",
                           choices=["symmetrize", "reject"])
            p.add_argument("--gamma-min", type=float, default=None,
                           help="skip gamma_min estimation")
            p.add_argument("--gamma-max", type=float, default=None)
        if ensemble_input:
            p.add_argument("ensemble", help="ensemble CSV")

    p = sub.add_parser("sample", help="sample a multiresolution ensemble")
    common(p, graph_input=True)
    p.add_argument("--strategy", default="event",
                   choices=["event", "linear", "exponential"])
    p.add_argument("--count", type=int, default=250,
                   help="ensemble size (>= 2)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gammarange", help="report the gamma range and "
                                          "event table")
    common(p, graph_input=True)
    p.set_defaults(func=cmd_gammarange)

    p = sub.add_parser("hierarchy", help="hierarchical consensus of an "
                                         "ensemble")
    common(p, ensemble_input=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("consensus", help="flat consensus partition")
    common(p, ensemble_input=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_consensus)

    p = sub.add_parser("lf", help="thresholded-C consensus baseline")
    common(p, ensemble_input=True)
    p.add_argument("--tau", type=float, default=0.5)
    p.set_defaults(func=cmd_lf)

    p = sub.add_parser("benchmark", help="generate a hierarchical benchmark "
                                         "network")
    common(p)
    p.add_argument("spec", help="benchmark spec JSON")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("compare", help="compare two partitions")
    p.add_argument("partition_a")
    p.add_argument("partition_b")
    p.add_argument("--output", default=None, help="also write JSON here")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (EdgeListParseError, FileNotFoundError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.best is not None:
            print(f"partial result attached: {exc.best!r}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
