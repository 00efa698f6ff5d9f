"""Synthetic workload fixtures and the brute-force scoring oracle.

The generator models an embedded box at desk scale: a few long-lived
daemons accumulating reference counts over the whole uptime, short-lived
tools, core libraries shared by every executable, and a tail of installed
packages nothing ever touches. Output is deterministic for a fixed seed.

The oracle re-derives every score with plain nested loops and its own
parsing, sharing no code with the scorer module, so a bug common to both
paths cannot hide.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from pathlib import Path

from .ingest import format_etime
from .scorer import ScoreConfig


@dataclass(frozen=True)
class WorkloadSpec:
    """Knobs for one synthetic system."""

    n_packages: int = 12
    files_per_package: tuple[int, int] = (2, 6)
    n_daemons: int = 3
    n_shortlived: int = 5
    uptime_s: int = 85 * 86400
    core_lib_fraction: float = 0.25
    unused_package_fraction: float = 0.35
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if min(self.n_packages, self.n_daemons, self.n_shortlived, self.uptime_s) < 0:
            raise ValueError("counts and durations must be non-negative")
        lo, hi = self.files_per_package
        if lo < 0 or lo > hi:
            raise ValueError("files_per_package must be a non-negative (lo, hi) range")
        for name in ("core_lib_fraction", "unused_package_fraction"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be within [0, 1]")


@dataclass(frozen=True)
class Workload:
    """The four generated fixture texts, ready to write or parse."""

    refsinfo: str
    psinfo: str
    manifest: str
    depmap: str


def generate(spec: WorkloadSpec) -> Workload:
    rng = random.Random(spec.rng_seed)
    taken: set[str] = set()

    def stem() -> str:
        while True:
            s = "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(4, 7)))
            if s not in taken:
                taken.add(s)
                return s

    # --- packages and their files; the tail of the list is never referenced
    n_unused = round(spec.unused_package_fraction * spec.n_packages)
    manifest_lines: list[str] = []
    lib_pool: list[str] = []
    exe_pool: list[str] = []
    data_pool: list[str] = []
    in_use_names: list[str] = []
    for i in range(spec.n_packages):
        base = stem()
        is_lib_pkg = i % 3 == 0
        name = f"lib{base}{rng.randint(0, 9)}" if is_lib_pkg else base
        in_use = i < spec.n_packages - n_unused
        count = rng.randint(*spec.files_per_package)
        files: list[str] = []
        if count:
            if is_lib_pkg:
                files.append(f"/usr/lib/profiled/lib{base}.so.{rng.randint(1, 9)}")
            else:
                files.append(f"/usr/bin/{base}")
        for j in range(1, count):
            if rng.random() < 0.08:  # commas are legal in paths; keep them exercised
                files.append(f"/usr/share/{name}/notes,v{j}/data")
            else:
                files.append(f"/usr/share/{name}/data{j}.cfg")
        if files:
            manifest_lines.extend(f"{name}\t{f}" for f in files)
        else:
            manifest_lines.append(f"{name}\t")
        if in_use:
            in_use_names.append(name)
            if count:
                (lib_pool if is_lib_pkg else exe_pool).append(files[0])
                data_pool.extend(files[1:])

    shared_doc = None
    if len(in_use_names) >= 2 and rng.random() < 0.5:
        shared_doc = "/usr/share/doc/shared/README"
        for owner in rng.sample(in_use_names, 2):
            manifest_lines.append(f"{owner}\t{shared_doc}")

    # --- dependency universe; core libraries reach every executable
    n_procs = spec.n_daemons + spec.n_shortlived
    if n_procs and spec.core_lib_fraction > 0 and not lib_pool:
        lib_pool.append(f"/opt/runtime/lib{stem()}.so.1")  # unowned fallback runtime
    n_core = 0
    if lib_pool and spec.core_lib_fraction > 0:
        n_core = max(1, round(spec.core_lib_fraction * len(lib_pool)))
    core_libs = lib_pool[:n_core]
    extra_libs = lib_pool[n_core:]

    depmap: dict[str, list[str]] = {}

    def deps_for(exe: str) -> list[str]:
        libs = set(core_libs)
        if extra_libs:
            libs.update(rng.sample(extra_libs, rng.randint(0, len(extra_libs))))
        libs.discard(exe)
        return sorted(libs)

    # --- processes: daemons run since boot, tools come and go
    processes: list[tuple[str, int, int, bool]] = []
    for _ in range(spec.n_daemons):
        exe = rng.choice(exe_pool) if exe_pool else f"/opt/svc/{stem()}d"
        jitter = rng.randint(0, max(1, spec.uptime_s // 20)) if spec.uptime_s else 0
        elapsed = max(0, spec.uptime_s - jitter)
        cpu = rng.randint(elapsed // 100, elapsed // 2) if elapsed >= 2 else 0
        processes.append((exe, elapsed, cpu, True))
    for _ in range(spec.n_shortlived):
        if exe_pool and rng.random() >= 0.1:
            exe = rng.choice(exe_pool)
        else:
            exe = f"/opt/tools/run,{stem()}"
        elapsed = rng.randint(0, 600)
        cpu = rng.randint(0, elapsed) if elapsed else 0
        processes.append((exe, elapsed, cpu, False))

    ref_counts: dict[str, list[int]] = {}

    def add_refs(path: str, n_open: int, n_read: int, n_close: int) -> None:
        bucket = ref_counts.setdefault(path, [0, 0, 0])
        bucket[0] += n_open
        bucket[1] += n_read
        bucket[2] += n_close

    psinfo_lines: list[str] = []
    pid = 100
    for exe, elapsed, cpu, is_daemon in processes:
        if exe not in depmap:
            depmap[exe] = deps_for(exe)
        # repeated 1-second sampling: older snapshots first, scorer keeps the last
        for back in range(rng.randint(1, 3) - 1, -1, -1):
            seen_elapsed = max(0, elapsed - back)
            seen_cpu = min(cpu, seen_elapsed)
            psinfo_lines.append(
                f"{exe},{format_etime(seen_elapsed)},{pid},{format_etime(seen_cpu)}"
            )
        # per-process reference counts: libraries dominate plain files by
        # construction (every process start maps and reads them heavily)
        add_refs(exe, 1, rng.randint(1, 20), 1)
        for lib in depmap[exe]:
            opens = rng.randint(1, 2)
            reads = rng.randint(40, 80)
            if is_daemon and spec.uptime_s >= 1000:
                reads += rng.randint(spec.uptime_s // 1000, spec.uptime_s // 500)
            held_open = is_daemon and rng.random() < 0.5
            add_refs(lib, opens, reads, opens - 1 if held_open else opens)
        pid += 1

    for path in data_pool:
        if rng.random() < 0.75:
            opens = rng.randint(1, 5)
            add_refs(path, opens, rng.randint(0, 30), opens)
    if shared_doc is not None and rng.random() < 0.7:
        opens = rng.randint(1, 4)
        add_refs(shared_doc, opens, rng.randint(0, 25), opens)
    # unowned scratch files, including pre-profiling opens (closes > opens)
    for i in range(rng.randint(0, 3)):
        if rng.random() < 0.3:
            add_refs(f"/var/tmp/stale{i}.dat", 0, rng.randint(0, 10), rng.randint(1, 3))
        elif rng.random() < 0.5:
            add_refs(f"/var/tmp/scratch{i}.log", 1, rng.randint(0, 25), 1)
        else:
            add_refs(f"/var/cache/tmp,{i}/blob", 1, rng.randint(0, 25), 1)

    refsinfo = "".join(
        f"{path},{o},{r},{c}\n" for path, (o, r, c) in ref_counts.items()
    )
    psinfo = "".join(line + "\n" for line in psinfo_lines)
    manifest = "".join(line + "\n" for line in manifest_lines)
    depmap_text = "".join(
        f"{exe}\t{lib}\n" for exe in sorted(depmap) for lib in depmap[exe]
    )
    return Workload(refsinfo, psinfo, manifest, depmap_text)


# Fixed file names used by the CLI and accepted straight back by cmd_score.
WORKLOAD_FILENAMES = {
    "refsinfo": "refsinfo.csv",
    "psinfo": "psinfo.csv",
    "manifest": "manifest.tsv",
    "depmap": "depmap.tsv",
}


def write_workload(workload: Workload, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for attr, filename in WORKLOAD_FILENAMES.items():
        (out / filename).write_text(getattr(workload, attr), encoding="utf-8")


def _clock_seconds(text: str) -> int:
    days = 0
    rest = text
    if "-" in rest:
        day_part, rest = rest.split("-", 1)
        days = int(day_part)
    parts = [int(p) for p in rest.split(":")]
    if len(parts) == 2:
        hours, minutes, seconds = 0, parts[0], parts[1]
    elif len(parts) == 3:
        hours, minutes, seconds = parts
    else:
        raise ValueError(f"bad clock string: {text!r}")
    return days * 86400 + hours * 3600 + minutes * 60 + seconds


def oracle_score(
    refsinfo_text: str,
    psinfo_text: str,
    manifest_text: str,
    depmap_text: str,
    cfg: ScoreConfig,
) -> tuple[dict[str, tuple[float, float, float]], dict[str, float]]:
    """Score a workload the slow, obvious way.

    Nested loops over the raw texts, no shared parsing or scoring code
    with the main pipeline; follows the same conventions (merge duplicate
    filenames, keep the latest sample per pid, full credit to every
    owner). Returns per-file (fs, ps, total) triples and package totals.
    """
    ref_totals: dict[str, list[int]] = {}
    for line in refsinfo_text.splitlines():
        if not line:
            continue
        path, n_open, n_read, n_close = line.rsplit(",", 3)
        bucket = ref_totals.setdefault(path, [0, 0, 0])
        bucket[0] += int(n_open)
        bucket[1] += int(n_read)
        bucket[2] += int(n_close)

    fs_scores: dict[str, float] = {}
    for path, (n_open, n_read, n_close) in ref_totals.items():
        net = n_open - n_close
        if cfg.clamp_net_open and net < 0:
            net = 0
        fs_scores[path] = (
            cfg.open_bonus * net
            + cfg.w_open * n_open
            + cfg.w_read * n_read
            + cfg.w_close * n_close
        )

    rows: list[tuple[str, int, int, int]] = []
    for line in psinfo_text.splitlines():
        if not line:
            continue
        exe, etime, pid_str, cputime = line.rsplit(",", 3)
        rows.append((exe, _clock_seconds(etime), int(pid_str), _clock_seconds(cputime)))

    ps_scores: dict[str, float] = {}
    for pid in sorted({row[2] for row in rows}):
        latest: tuple[str, int, int, int] | None = None
        for row in rows:
            if row[2] != pid:
                continue
            if latest is None or (row[1], row[3], row[0]) > (latest[1], latest[3], latest[0]):
                latest = row
        assert latest is not None
        exe, elapsed, _, cpu = latest
        ps_scores[exe] = ps_scores.get(exe, 0) + cfg.w_elapsed * elapsed + cfg.w_cpu * cpu

    dep_pairs: list[tuple[str, str]] = []
    for line in depmap_text.splitlines():
        if not line:
            continue
        exe, _, lib = line.partition("\t")
        if exe != lib and (exe, lib) not in dep_pairs:
            dep_pairs.append((exe, lib))

    combined = dict(ps_scores)
    for exe, base in ps_scores.items():
        if base > 0:
            for dep_exe, lib in dep_pairs:
                if dep_exe == exe:
                    combined[lib] = combined.get(lib, 0) + base

    files: dict[str, tuple[float, float, float]] = {}
    for path in list(fs_scores) + [p for p in combined if p not in fs_scores]:
        fs = fs_scores.get(path, 0)
        ps = combined.get(path, 0)
        files[path] = (fs, ps, cfg.w_f * fs + cfg.w_r * ps)

    entries: list[tuple[str, str]] = []
    packages: set[str] = set()
    for line in manifest_text.splitlines():
        if not line:
            continue
        name, _, path = line.partition("\t")
        packages.add(name)
        if path:
            entries.append((name, path))

    package_scores: dict[str, float] = {name: 0 for name in sorted(packages)}
    for path, (_, _, total) in files.items():
        owners = sorted({name for name, owned in entries if owned == path})
        if owners:
            for name in owners:
                package_scores[name] += total
        else:
            package_scores["(unowned)"] = package_scores.get("(unowned)", 0) + total

    return files, package_scores
