"""Command-line entry points.

``densecluster <subcommand> ...`` is the umbrella command.  The tool names
used by the original scripts (``flow-iter``, ``cluster_merger`` ...) are also
installed as standalone commands that accept the same arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io
from .ensemble import MergerConfig, compute_edge_weights, surviving, write_merged_network, write_records
from .fista import dsc_fista_int_cluster, dsc_fista_iter_cluster
from .generate import generate_planted_partition
from .graph import ikc_cluster, load_edgelist, read_clustering, write_clustering, write_edgelist
from .flow import dsc_flow, dsc_flow_iter_cluster
from .leiden import ObjectiveSpec, leiden_cluster
from .metrics import evaluate
from .pipeline import COLUMNS, METHODS, PipelineConfig, compare_methods, run_pipeline, write_report
from .wcc import wcc_treatment

log = logging.getLogger("densecluster")

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; we reserve 2 for runtime failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _threshold(text: str) -> float:
    t = float(text)
    if t < 0 and t != -1:
        raise argparse.ArgumentTypeError("must be >= 0, or -1 to keep every positive-weight edge")
    return t


# ---------------------------------------------------------------- handlers


def _density_cmd(fn):
    def run(args) -> None:
        g = load_edgelist(args.edgelist)
        c, values = fn(g, args)
        io.write_clustering(g, c, args.com)
        io.write_density(g, values, args.density)
        log.info("%d nodes, %d clusters", g.n, len(c.clusters()))

    return run


cmd_flow = _density_cmd(lambda g, a: dsc_flow(g))
cmd_flow_iter = _density_cmd(lambda g, a: dsc_flow_iter_cluster(g))
cmd_fista_int = _density_cmd(lambda g, a: dsc_fista_int_cluster(g, a.niters))
cmd_fista_frac = _density_cmd(lambda g, a: dsc_fista_iter_cluster(g, a.niters))


def cmd_ikc(args) -> None:
    g = load_edgelist(args.edgelist)
    out = Path(args.output_directory)
    out.mkdir(parents=True, exist_ok=True)
    io.write_clustering(g, ikc_cluster(g, args.kvalue), out / f"ikc_k{args.kvalue}.tsv")


def cmd_leiden(args) -> None:
    g = load_edgelist(args.edgelist, weighted=args.weighted)
    out = Path(args.output_directory)
    out.mkdir(parents=True, exist_ok=True)
    if args.model == "cpm":
        obj, name = ObjectiveSpec.cpm(args.resolution), f"leiden_cpm_{args.resolution:g}.tsv"
    else:
        obj, name = ObjectiveSpec.modularity(), "leiden_mod.tsv"
    c = leiden_cluster(g, obj, seed=args.seed, iterations=args.iterations)
    io.write_clustering(g, c, out / name)


def cmd_wcc(args) -> None:
    g = load_edgelist(args.edgelist)
    c = read_clustering(args.clustering).restricted_to(g.ids)
    io.write_clustering(g, wcc_treatment(g, c), args.output)


def cmd_merger(args) -> None:
    if args.mode != "Weighted":
        raise ValueError(f"unknown merger mode {args.mode!r}; only 'Weighted' is supported")
    cfg = MergerConfig(args.threshold, True, args.weighting_strategy)
    g = load_edgelist(args.edgelist)
    paths = [line.strip() for line in Path(args.clustering_list).read_text().splitlines() if line.strip()]
    records = compute_edge_weights(g, [read_clustering(p) for p in paths])
    write_merged_network(g, records, cfg.threshold, args.output_weighted_graph)
    if args.output_file:
        write_records(g, records, args.output_file)
    kept = len(surviving(records, cfg.threshold))
    msg = (f"clusterings: {len(paths)}; edges in: {g.m}; edges kept: {kept}; "
           f"threshold: {cfg.threshold:g}; weighting strategy: {cfg.weighting_strategy}")
    if args.log_file:
        with open(args.log_file, "a") as fh:
            fh.write(io.log_line(msg))
    log.info(msg)


def _write_report(rows: list[dict], columns: list[str], path) -> None:
    if str(path).endswith(".json"):
        Path(path).write_text(json.dumps(rows if len(rows) != 1 else rows[0], indent=2) + "\n")
        return
    with open(path, "w") as fh:
        fh.write("\t".join(columns) + "\n")
        for r in rows:
            fh.write("\t".join(f"{r[c]:.6f}" if isinstance(r[c], float) else str(r[c]) for c in columns) + "\n")


def cmd_eval(args) -> None:
    g = load_edgelist(args.edgelist)
    truth = read_clustering(args.truth).restricted_to(g.ids)
    est = read_clustering(args.est).restricted_to(g.ids)
    scores = evaluate(truth, est)
    _write_report([scores], list(scores), args.out)


def cmd_gen(args) -> None:
    g, truth = generate_planted_partition(args.clusters, args.size, args.p_in, args.p_out, args.seed)
    write_edgelist(g, args.edgelist)
    write_clustering(truth, args.truth)


def cmd_compare(args) -> None:
    g = load_edgelist(args.edgelist)
    truth = read_clustering(args.truth)
    methods = [m for m in args.methods.split(",") if m] if args.methods else []
    rows = compare_methods(g, truth, methods, seed=args.seed, fista_iters=args.fista_iters)
    if str(args.out).endswith(".json"):
        _write_report(rows, ["method"] + COLUMNS, args.out)
    else:
        write_report(rows, args.out)


def cmd_pipeline(args) -> None:
    cfg = PipelineConfig(
        edgelist=Path(args.edgelist),
        output_dir=Path(args.output_directory),
        threshold=args.threshold,
        resolution=args.resolution,
        seed=args.seed,
        weighted=args.weighted,
        stage2_clustering=Path(args.inputs) if args.inputs else None,
        timing_log=Path(args.timing_log) if args.timing_log else None,
    )
    final, timing = run_pipeline(cfg)
    for r in timing.stages:
        log.info("stage %d %s %.3fs", r.stage, r.name, r.seconds)


# ---------------------------------------------------------------- parsers


def _add_density(sub, name: str, handler, with_iters: bool, help: str) -> None:
    p = sub.add_parser(name, help=help)
    if with_iters:
        p.add_argument("niters", type=_positive_int, help="FISTA iterations (recommended: 200)")
    p.add_argument("edgelist")
    p.add_argument("com", help="output community TSV")
    p.add_argument("density", help="output density TSV")
    p.set_defaults(func=handler)


def _fill_merger(p) -> None:
    p.add_argument("mode", choices=["Weighted"])
    p.add_argument("--edgelist", required=True)
    p.add_argument("--clustering-list", required=True, help="file listing clustering TSV paths, one per line")
    p.add_argument("--weighting-strategy", type=int, default=0, choices=[0])
    p.add_argument("--threshold", type=_threshold, default=-1.0)
    p.add_argument("--output-file", default="", help="optional per-edge record TSV; empty to skip")
    p.add_argument("--output-weighted-graph", required=True)
    p.add_argument("--log-file", default="")
    p.set_defaults(func=cmd_merger)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="densecluster", description="Density-based clustering and cluster ensembles.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_density(sub, "flow", cmd_flow, False, "exact dense decomposition clustering")
    _add_density(sub, "flow-iter", cmd_flow_iter, False, "iterative densest-subgraph extraction")
    _add_density(sub, "fista-int", cmd_fista_int, True, "FISTA values rounded to integers")
    _add_density(sub, "fista-frac", cmd_fista_frac, True, "iterative FISTA + fractional peeling")

    p = sub.add_parser("ikc", help="iterative k-core clustering")
    p.add_argument("--edgelist", required=True)
    p.add_argument("--output-directory", required=True)
    p.add_argument("--kvalue", type=int, default=1)
    p.set_defaults(func=cmd_ikc)

    p = sub.add_parser("leiden", help="Leiden under CPM or modularity")
    p.add_argument("--edgelist", required=True)
    p.add_argument("--output-directory", required=True)
    p.add_argument("--model", choices=["cpm", "mod"], required=True)
    p.add_argument("--resolution", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=_positive_int, default=10)
    p.add_argument("--weighted", action="store_true", help="read a third weight column")
    p.set_defaults(func=cmd_leiden)

    p = sub.add_parser("wcc", help="well-connectedness post-processing")
    p.add_argument("--edgelist", required=True)
    p.add_argument("--clustering", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_wcc)

    _fill_merger(sub.add_parser("cluster_merger", help="edge-agreement ensemble network"))

    p = sub.add_parser("eval", help="score a clustering against ground truth")
    p.add_argument("--edgelist", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--out", required=True, help="report path; .json for JSON, TSV otherwise")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="planted-partition benchmark graph")
    p.add_argument("--clusters", type=_positive_int, default=4)
    p.add_argument("--size", type=_positive_int, default=25)
    p.add_argument("--p-in", type=float, default=0.5)
    p.add_argument("--p-out", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--edgelist", required=True)
    p.add_argument("--truth", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="score several methods on one graph")
    p.add_argument("--edgelist", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--methods", default=",".join(METHODS), help="comma-separated; empty for none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fista-iters", type=_positive_int, default=200)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pipeline", help="the four-stage ensemble pipeline")
    p.add_argument("edgelist")
    p.add_argument("output_directory")
    p.add_argument("--threshold", type=_threshold, default=0.5)
    p.add_argument("--resolution", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weighted", action="store_true", help="keep agreement weights for stage 4")
    p.add_argument("--inputs", default=None, help="precomputed clustering TSV replacing stage 2")
    p.add_argument("--timing-log", default=None)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
        datefmt="%Y-%m-%dT%H:%M:%S",
    )
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001 - top-level reporter
        print(f"densecluster {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def _alias(command: str):
    def entry() -> int:
        return main([command] + sys.argv[1:])

    return entry


flow_main = _alias("flow")
flow_iter_main = _alias("flow-iter")
fista_int_main = _alias("fista-int")
fista_frac_main = _alias("fista-frac")
cluster_merger_main = _alias("cluster_merger")


if __name__ == "__main__":
    sys.exit(main())
