"""Usage scoring: per-file scores from I/O counts and process runtime,
library propagation, and per-package aggregation.

A file's score has two components. The filesystem component weighs its
open/read counts and grants a fixed bonus per net currently-open handle
(a file left open is being actively used). The process component weighs
the elapsed and CPU time of processes running from the file, with CPU
time weighted higher since resident-but-idle processes prove less usage.
Each executable's process component is also credited to every shared
library it loads. A package's score is the sum over the files it owns.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .deps import DependencyMap
from .ingest import ProcessSample, RefRecord, merge_ref_records
from .pkgdb import UNOWNED, OwnershipIndex


class ConfigError(ValueError):
    """Bad weight-config file: unknown key or unparseable value."""


@dataclass(frozen=True)
class ScoreConfig:
    """All scoring weights. Defaults: open bonus 100, open:read weights 1:5,
    elapsed:cpu weights 1:5, unit combiner weights."""

    open_bonus: float = 100
    w_open: float = 1
    w_read: float = 5
    w_close: float = 0  # exposed for completeness; the score formula has no close term
    w_elapsed: float = 1
    w_cpu: float = 5
    w_f: float = 1
    w_r: float = 1
    clamp_net_open: bool = True

    def __post_init__(self) -> None:
        for f in fields(self):
            if f.name == "clamp_net_open":
                continue
            if getattr(self, f.name) < 0:
                raise ValueError(f"weight {f.name} must be non-negative")


_CONFIG_BOOLS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def load_config(file_path: str | Path) -> ScoreConfig:
    """Load a flat ``key=value`` weight file; unknown keys are errors.

    Recognized keys are exactly the ScoreConfig field names. Blank lines
    and '#' comments are allowed. Numeric values stay integers when the
    literal is integral, keeping desk-scale score arithmetic exact.
    """
    path = Path(file_path)
    known = {f.name for f in fields(ScoreConfig)}
    values: dict[str, float | bool] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, raw = line.partition("=")
            key, raw = key.strip(), raw.strip()
            if not sep or not key:
                raise ConfigError(f"{path}:{line_no}: expected key=value")
            if key not in known:
                raise ConfigError(f"{path}:{line_no}: unknown config key {key!r}")
            if key == "clamp_net_open":
                try:
                    values[key] = _CONFIG_BOOLS[raw.lower()]
                except KeyError:
                    raise ConfigError(f"{path}:{line_no}: expected a boolean, got {raw!r}") from None
                continue
            try:
                values[key] = int(raw)
            except ValueError:
                try:
                    values[key] = float(raw)
                except ValueError:
                    raise ConfigError(f"{path}:{line_no}: expected a number, got {raw!r}") from None
    try:
        return ScoreConfig(**values)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class FileScore:
    path: str
    s_fs: float  # filesystem-reference component
    s_ps: float  # process-runtime component
    total: float  # w_f * s_fs + w_r * s_ps


@dataclass(frozen=True)
class PackageScore:
    package: str  # a real package name, or UNOWNED
    total: float
    file_count: int  # scored files owned by this package


def score_fs(rec: RefRecord, cfg: ScoreConfig) -> float:
    """Filesystem-reference score of one file.

    bonus * net-open + w_open * opens + w_read * reads (+ w_close * closes,
    zero by default). Net-open clamps at 0 unless clamp_net_open is off:
    closes can outnumber opens when a file was opened before profiling
    began, and a negative bonus would be meaningless.
    """
    net_open = rec.n_open - rec.n_close
    if cfg.clamp_net_open and net_open < 0:
        net_open = 0
    return (
        cfg.open_bonus * net_open
        + cfg.w_open * rec.n_open
        + cfg.w_read * rec.n_read
        + cfg.w_close * rec.n_close
    )


def score_ps(sample: ProcessSample, cfg: ScoreConfig) -> float:
    """Process-runtime score of one sample: weighted elapsed plus CPU time."""
    return cfg.w_elapsed * sample.elapsed_s + cfg.w_cpu * sample.cpu_s


def dedup_samples(samples: list[ProcessSample]) -> list[ProcessSample]:
    """Keep the latest sample per pid.

    Repeated 1-second sampling yields many snapshots of the same process;
    the one with the largest elapsed_s is the latest. Ties break on larger
    cpu_s, then exe_path, so the result is order-independent.
    """
    best: dict[int, ProcessSample] = {}
    for s in samples:
        cur = best.get(s.pid)
        if cur is None or (s.elapsed_s, s.cpu_s, s.exe_path) > (
            cur.elapsed_s,
            cur.cpu_s,
            cur.exe_path,
        ):
            best[s.pid] = s
    return list(best.values())


def build_score_table(
    refs: list[RefRecord],
    samples: list[ProcessSample],
    depmap: DependencyMap,
    cfg: ScoreConfig,
) -> dict[str, FileScore]:
    """Score every path appearing in either input source.

    Reference records are merged per filename; samples are deduplicated
    per pid and their scores summed per executable (several pids of the
    same executable count as more usage). Each executable's process score
    is then added to every library it loads, accumulating across
    executables. Libraries never referenced directly still appear with
    their propagated score.
    """
    s_fs: dict[str, float] = {
        rec.filename: score_fs(rec, cfg) for rec in merge_ref_records(refs)
    }

    exe_ps: dict[str, float] = {}
    for sample in dedup_samples(samples):
        exe_ps[sample.exe_path] = exe_ps.get(sample.exe_path, 0) + score_ps(sample, cfg)

    s_ps = dict(exe_ps)
    for exe, score in exe_ps.items():
        if score > 0:
            for lib in sorted(depmap.libs_of(exe)):
                s_ps[lib] = s_ps.get(lib, 0) + score

    table: dict[str, FileScore] = {}
    for path in list(s_fs) + [p for p in s_ps if p not in s_fs]:
        fs = s_fs.get(path, 0)
        ps = s_ps.get(path, 0)
        table[path] = FileScore(path, fs, ps, cfg.w_f * fs + cfg.w_r * ps)
    return table


def aggregate_packages(
    table: dict[str, FileScore], index: OwnershipIndex
) -> list[PackageScore]:
    """Sum file totals into per-package scores, sorted by package name.

    Every installed package appears exactly once, zero-score packages
    included. A multi-owner file credits every owning package with its
    full total (deterministic, unlike picking one owner). Files owned by
    no package accumulate into the UNOWNED pseudo-package, present only
    when such files exist.
    """
    totals: dict[str, float] = {pkg: 0 for pkg in index.all_packages}
    counts: dict[str, int] = {pkg: 0 for pkg in index.all_packages}
    unowned_total: float = 0
    unowned_count = 0
    for path, file_score in table.items():
        owners = index.owners_of(path)
        if owners:
            for pkg in owners:
                totals[pkg] += file_score.total
                counts[pkg] += 1
        else:
            unowned_total += file_score.total
            unowned_count += 1
    if unowned_count:
        totals[UNOWNED] = unowned_total
        counts[UNOWNED] = unowned_count
    return [PackageScore(pkg, totals[pkg], counts[pkg]) for pkg in sorted(totals)]
