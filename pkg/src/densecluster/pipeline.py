"""The four-stage ensemble pipeline and the method comparison harness."""

from __future__ import annotations

import logging
import resource
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping

from . import io
from .ensemble import MergerConfig, build_merged_network, compute_edge_weights, write_merged_network
from .fista import dsc_fista_int_cluster, dsc_fista_iter_cluster
from .flow import dsc_flow, dsc_flow_iter_cluster
from .graph import Clustering, Graph, ikc_cluster, load_edgelist, read_clustering
from .leiden import ObjectiveSpec, leiden_cluster
from .metrics import evaluate
from .wcc import wcc_treatment

log = logging.getLogger(__name__)


class PipelineError(RuntimeError):
    def __init__(self, stage: int, cause: BaseException):
        super().__init__(f"stage {stage} failed: {cause}")
        self.stage = stage


@dataclass
class PipelineConfig:
    edgelist: Path
    output_dir: Path
    threshold: float = 0.5
    resolution: float = 0.01
    seed: int = 0
    fista_iters: int = 200
    weighted: bool = False
    stage2_clustering: Path | None = None  # replaces Leiden-Mod with a precomputed clustering
    timing_log: Path | None = None

    def __post_init__(self):
        if self.threshold < 0 and self.threshold != -1:
            raise ValueError("threshold must be >= 0 or -1")
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")


@dataclass
class StageRecord:
    stage: int
    name: str
    seconds: float
    peak_rss_bytes: int
    nodes: int
    edges: int


@dataclass
class StageTiming:
    stages: list[StageRecord] = field(default_factory=list)

    @contextmanager
    def stage(self, stage: int, name: str, g: Graph):
        start = time.perf_counter()
        try:
            yield
        except Exception as exc:
            raise PipelineError(stage, exc) from exc
        finally:
            elapsed = time.perf_counter() - start
        # ru_maxrss is KiB on Linux; best effort only
        rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
        self.stages.append(StageRecord(stage, name, elapsed, rss, g.n, g.m))
        log.info("stage %d (%s): %.3fs n=%d m=%d", stage, name, elapsed, g.n, g.m)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("stage\tname\tseconds\tpeak_rss_bytes\tnodes\tedges\n")
            for r in self.stages:
                fh.write(f"{r.stage}\t{r.name}\t{r.seconds:.6f}\t{r.peak_rss_bytes}\t{r.nodes}\t{r.edges}\n")


@dataclass
class PipelineResult:
    final: Clustering
    timing: StageTiming
    flow_iter: Clustering
    leiden_mod: Clustering
    merged: Graph
    leiden_cpm: Clustering


def ensemble_pipeline(
    g: Graph,
    threshold: float = 0.5,
    resolution: float = 0.01,
    seed: int = 0,
    weighted: bool = False,
    stage2: Clustering | None = None,
) -> PipelineResult:
    """DSC-Flow-Iter + Leiden-Mod -> agreement-filtered network -> Leiden-CPM + WCC, in memory."""
    timing = StageTiming()
    with timing.stage(1, "dsc-flow-iter", g):
        flow_iter, _ = dsc_flow_iter_cluster(g)
    with timing.stage(2, "leiden-mod", g):
        mod = stage2.restricted_to(g.ids) if stage2 is not None else leiden_cluster(
            g, ObjectiveSpec.modularity(), seed=seed
        )
    with timing.stage(3, "merge", g):
        records = compute_edge_weights(g, [flow_iter, mod])
        merged = build_merged_network(g, records, MergerConfig(threshold, weighted))
    with timing.stage(4, "leiden-cpm+wcc", merged):
        cpm = leiden_cluster(merged, ObjectiveSpec.cpm(resolution), seed=seed)
        final = wcc_treatment(merged, cpm)
    return PipelineResult(final, timing, flow_iter, mod, merged, cpm)


def run_pipeline(cfg: PipelineConfig) -> tuple[Clustering, StageTiming]:
    """File-based pipeline; every intermediate artifact lands in ``cfg.output_dir``."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        g = load_edgelist(cfg.edgelist)
    except (OSError, ValueError) as exc:
        raise PipelineError(0, exc) from exc
    timing = StageTiming()

    with timing.stage(1, "dsc-flow-iter", g):
        flow_iter, values = dsc_flow_iter_cluster(g)
        io.write_clustering(g, flow_iter, out / "stage1_flow_iter.tsv")
        io.write_density(g, values, out / "stage1_flow_iter_density.tsv")
    with timing.stage(2, "leiden-mod", g):
        if cfg.stage2_clustering is not None:
            mod = read_clustering(cfg.stage2_clustering).restricted_to(g.ids)
        else:
            mod = leiden_cluster(g, ObjectiveSpec.modularity(), seed=cfg.seed)
        io.write_clustering(g, mod, out / "stage2_leiden_mod.tsv")
    with timing.stage(3, "merge", g):
        inputs = [out / "stage1_flow_iter.tsv", out / "stage2_leiden_mod.tsv"]
        (out / "stage3_clustering_list.txt").write_text("".join(f"{p}\n" for p in inputs))
        clusterings = [read_clustering(p) for p in inputs]
        records = compute_edge_weights(g, clusterings)
        write_merged_network(g, records, cfg.threshold, out / "stage3_merged.tsv")
        merged = build_merged_network(g, records, MergerConfig(cfg.threshold, cfg.weighted))
        kept = merged.m
        (out / "stage3_merger.log").write_text(
            io.log_line(f"edges in: {g.m}; edges kept: {kept}; threshold: {cfg.threshold}; "
                        f"weighted: {cfg.weighted}")
        )
    with timing.stage(4, "leiden-cpm+wcc", merged):
        cpm = leiden_cluster(merged, ObjectiveSpec.cpm(cfg.resolution), seed=cfg.seed)
        io.write_clustering(g, cpm, out / "stage4_leiden_cpm.tsv")
        final = wcc_treatment(merged, cpm)
        io.write_clustering(g, final, out / "stage4_final.tsv")
    timing.write(cfg.timing_log or out / "timing.tsv")
    return final, timing


# ------------------------------------------------------------------ comparisons

METHODS: dict[str, Callable[..., Clustering]] = {
    "dsc-flow": lambda g, seed, iters: dsc_flow(g)[0],
    "dsc-flow-iter": lambda g, seed, iters: dsc_flow_iter_cluster(g)[0],
    "dsc-fista-int": lambda g, seed, iters: dsc_fista_int_cluster(g, iters)[0],
    "dsc-fista-iter": lambda g, seed, iters: dsc_fista_iter_cluster(g, iters)[0],
    "ikc": lambda g, seed, iters: ikc_cluster(g, 1),
    "leiden-mod": lambda g, seed, iters: leiden_cluster(g, ObjectiveSpec.modularity(), seed=seed),
    "leiden-cpm": lambda g, seed, iters: leiden_cluster(g, ObjectiveSpec.cpm(0.01), seed=seed),
    "leiden-cpm+wcc": lambda g, seed, iters: wcc_treatment(
        g, leiden_cluster(g, ObjectiveSpec.cpm(0.01), seed=seed)
    ),
    "ensemble": lambda g, seed, iters: ensemble_pipeline(g, seed=seed).final,
}

COLUMNS = ["ami", "ari", "nmi", "precision", "recall", "fpr", "coverage", "seconds"]


def compare_methods(
    g: Graph,
    truth: Clustering,
    methods: Iterable[str] | Mapping[str, Callable[[Graph], Clustering]],
    seed: int = 0,
    fista_iters: int = 200,
) -> list[dict]:
    """One row per method with every metric against ``truth`` plus wall-clock seconds."""
    if isinstance(methods, Mapping):
        runners = {name: (lambda fn: lambda g, seed, iters: fn(g))(fn) for name, fn in methods.items()}
    else:
        runners = {}
        for name in methods:
            if name not in METHODS:
                raise KeyError(f"unknown method {name!r}; choose from {sorted(METHODS)}")
            runners[name] = METHODS[name]
    universe = truth.restricted_to(sorted(set(truth.assignment) | set(g.ids)))
    rows = []
    for name, fn in runners.items():
        start = time.perf_counter()
        est = fn(g, seed, fista_iters)
        seconds = time.perf_counter() - start
        row = {"method": name}
        row.update(evaluate(universe, est.restricted_to(universe.assignment)))
        row["seconds"] = seconds
        rows.append(row)
    return rows


def write_report(rows: list[dict], path) -> None:
    with open(path, "w") as fh:
        fh.write("\t".join(["method"] + COLUMNS) + "\n")
        for r in rows:
            fh.write("\t".join([r["method"]] + [f"{r[c]:.6f}" for c in COLUMNS]) + "\n")
