"""Deduplicated coauthorship networks, homophily metrics, heavy-tail fits."""

from .dedup import (
    BlockKey,
    PaperCluster,
    block_key,
    cluster_duplicates,
    cluster_publications,
    dl_distance,
    is_duplicate,
)
from .fit import (
    FitConvergenceError,
    FitError,
    FitResult,
    InsufficientDataError,
    fit_power_law,
    fit_truncated_power_law,
    log_bin,
    sample_truncated_power_law,
    truncated_power_law_pmf,
)
from .graph import (
    BipartiteNetwork,
    CollaborationNetwork,
    NodeAttrs,
    build_bipartite,
    giant_component,
    project_tcn,
)
from .ingest import (
    Gender,
    InputFormat,
    MajorField,
    ParseError,
    PublicationRecord,
    ScientistRecord,
    normalize_title,
    parse_records,
    primary_field,
    write_records_jsonl,
)
from .metrics import (
    BinnedCurve,
    FieldStatsRow,
    GeometricBins,
    binned_curve,
    degree_distribution,
    field_stats,
    g_ratio,
    g_ratio_parts,
    m_ratio,
    m_ratio_parts,
    weight_distribution,
)
from .synth import (
    SynthConfig,
    SyntheticCorpus,
    generate_corpus,
    inject_typos,
    pairwise_precision_recall,
)

__version__ = "0.1.0"

__all__ = [
    "BlockKey",
    "PaperCluster",
    "block_key",
    "cluster_duplicates",
    "cluster_publications",
    "dl_distance",
    "is_duplicate",
    "FitConvergenceError",
    "FitError",
    "FitResult",
    "InsufficientDataError",
    "fit_power_law",
    "fit_truncated_power_law",
    "log_bin",
    "sample_truncated_power_law",
    "truncated_power_law_pmf",
    "BipartiteNetwork",
    "CollaborationNetwork",
    "NodeAttrs",
    "build_bipartite",
    "giant_component",
    "project_tcn",
    "Gender",
    "InputFormat",
    "MajorField",
    "ParseError",
    "PublicationRecord",
    "ScientistRecord",
    "normalize_title",
    "parse_records",
    "primary_field",
    "write_records_jsonl",
    "BinnedCurve",
    "FieldStatsRow",
    "GeometricBins",
    "binned_curve",
    "degree_distribution",
    "field_stats",
    "g_ratio",
    "g_ratio_parts",
    "m_ratio",
    "m_ratio_parts",
    "weight_distribution",
    "SynthConfig",
    "SyntheticCorpus",
    "generate_corpus",
    "inject_typos",
    "pairwise_precision_recall",
]
