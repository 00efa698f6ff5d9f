"""Live-host data acquisition.

Samples running processes into the psinfo format on a fixed interval and
snapshots the kernel's per-file reference-count export. Collection is
strictly read-only (process listing and file reads; no tracing, no
attaching) and append-only, so an interrupted run leaves a valid log.
Raw samples are never deduplicated here; that is the scorer's job.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Callable, TextIO

from .ingest import format_etime

log = logging.getLogger(__name__)

# (exe_path, pid, elapsed_s, cpu_s) per visible process
ProcessLister = Callable[[], list[tuple[str, int, int, int]]]


class ProcessListUnavailable(RuntimeError):
    """The host exposes no usable process listing."""


class SourceUnavailable(FileNotFoundError):
    """The kernel reference-count export is absent on this host."""


def list_processes() -> list[tuple[str, int, int, int]]:
    """Snapshot all visible processes via psutil.

    Kernel threads and processes without a readable executable path are
    skipped. Durations are truncated to whole seconds.
    """
    try:
        import psutil
    except ImportError as exc:  # pragma: no cover - psutil is a declared dep
        raise ProcessListUnavailable(f"psutil is required for live sampling: {exc}")
    now = time.time()
    out: list[tuple[str, int, int, int]] = []
    try:
        for proc in psutil.process_iter(attrs=["pid", "exe", "create_time", "cpu_times"], ad_value=None):
            info = proc.info
            exe = info.get("exe")
            if not exe or not exe.startswith("/"):
                continue
            create_time = info.get("create_time")
            cpu_times = info.get("cpu_times")
            if create_time is None or cpu_times is None:
                continue
            elapsed = max(0, int(now - create_time))
            cpu = max(0, int(cpu_times.user + cpu_times.system))
            out.append((exe, info["pid"], elapsed, cpu))
    except OSError as exc:
        raise ProcessListUnavailable(f"cannot enumerate processes: {exc}")
    return out


def sample_processes(
    interval_s: float,
    duration_s: float | None,
    sink: TextIO,
    lister: ProcessLister = list_processes,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> int:
    """Append one psinfo line per visible process, every interval.

    Runs until duration_s elapses (unbounded when None). Per-tick failures
    are logged and sampling continues; only a totally absent process
    listing aborts. Returns the number of lines written.
    """
    if interval_s <= 0:
        raise ValueError("interval_s must be positive")
    written = 0
    start = clock()
    while duration_s is None or clock() - start < duration_s:
        try:
            processes = lister()
        except ProcessListUnavailable:
            raise
        except Exception as exc:
            log.warning("process sampling tick failed: %s", exc)
            processes = []
        for exe, pid, elapsed_s, cpu_s in processes:
            if not exe.startswith("/"):
                continue
            sink.write(f"{exe},{format_etime(elapsed_s)},{pid},{format_etime(cpu_s)}\n")
            written += 1
        sink.flush()
        sleep(interval_s)
    return written


def snapshot_refsinfo(source_path: str | Path, sink: TextIO) -> None:
    """Copy the current kernel reference-count export byte-faithfully."""
    path = Path(source_path)
    try:
        with path.open(encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise SourceUnavailable(
            f"cannot read {path} ({exc}); this export requires the patched "
            f"kernel -- use 'pkgprof simulate' to generate fixture input instead"
        ) from exc
    sink.write(text)
