"""Density-based community detection, WCC post-processing and edge-agreement ensembles."""

from .ensemble import EnsembleEdgeRecord, MergerConfig, build_merged_network, compute_edge_weights
from .fista import dsc_fista_int_cluster, dsc_fista_iter_cluster, fista_solve, fractional_peel
from .flow import (
    DecompositionLayer,
    VertexValueVector,
    dense_decomposition,
    densest_subgraph,
    dsc_flow_cluster,
    dsc_flow_iter_cluster,
)
from .generate import generate_planted_partition
from .graph import Clustering, Graph, ikc_cluster, load_edgelist, read_clustering, write_clustering
from .leiden import ObjectiveSpec, leiden_cluster
from .maxflow import max_flow, min_cut_global
from .metrics import ami, ari, contingency, evaluate, nmi, node_coverage, pair_metrics
from .pipeline import PipelineConfig, compare_methods, ensemble_pipeline, run_pipeline
from .wcc import cc_treatment, wcc_treatment

__version__ = "0.1.0"
