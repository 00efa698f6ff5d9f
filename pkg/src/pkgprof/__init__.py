"""pkgprof: score file and Debian-package usage from kernel I/O reference
counts and process runtime samples, and report what can be debloated."""

from .deps import DependencyMap, load_dependency_map, probe_live
from .ingest import (
    MalformedLine,
    ProcessSample,
    RefRecord,
    SuspectSample,
    parse_etime,
    parse_psinfo,
    parse_refsinfo,
)
from .pkgdb import (
    UNOWNED,
    OwnershipIndex,
    load_consolidated_manifest,
    load_manifest_dir,
)
from .report import Distribution, RankedReport, distribution, emit_csv, rank
from .scorer import (
    FileScore,
    PackageScore,
    ScoreConfig,
    aggregate_packages,
    build_score_table,
    load_config,
    score_fs,
    score_ps,
)
from .simulate import Workload, WorkloadSpec, generate, oracle_score

__version__ = "0.1.0"

__all__ = [
    "DependencyMap",
    "Distribution",
    "FileScore",
    "MalformedLine",
    "OwnershipIndex",
    "PackageScore",
    "ProcessSample",
    "RankedReport",
    "RefRecord",
    "ScoreConfig",
    "SuspectSample",
    "UNOWNED",
    "Workload",
    "WorkloadSpec",
    "aggregate_packages",
    "build_score_table",
    "distribution",
    "emit_csv",
    "generate",
    "load_config",
    "load_consolidated_manifest",
    "load_dependency_map",
    "load_manifest_dir",
    "oracle_score",
    "parse_etime",
    "parse_psinfo",
    "parse_refsinfo",
    "probe_live",
    "rank",
    "score_fs",
    "score_ps",
]
