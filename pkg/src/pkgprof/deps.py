"""Per-executable shared-library dependency maps.

Process runtime scores propagate to the libraries an executable loads.
The map comes either from a static ``exe<TAB>lib`` fixture file or from
probing the host's dynamic-linker lister (ldd) live.
"""

from __future__ import annotations

import logging
import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

log = logging.getLogger(__name__)


class ProbeUnavailable(RuntimeError):
    """The linker-listing tool is missing; fall back to a static map."""


@dataclass
class DependencyMap:
    """Executable path -> set of shared-library paths it loads.

    The linker listing is already the transitive closure of the link
    chain, so the map is flat; no recursive resolution happens on top.
    """

    by_exe: dict[str, set[str]] = field(default_factory=dict)

    def libs_of(self, exe: str) -> set[str]:
        return self.by_exe.get(exe, set())


def load_dependency_map(file_path: str | Path) -> DependencyMap:
    """Load ``exe<TAB>lib`` lines with set semantics (duplicates idempotent)."""
    path = Path(file_path)
    by_exe: dict[str, set[str]] = {}
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            exe, sep, lib = line.partition("\t")
            if not sep or not exe.startswith("/") or not lib.startswith("/"):
                log.warning("%s:%d: expected <abs exe><TAB><abs lib>", path, line_no)
                continue
            if exe == lib:  # an executable never depends on itself
                continue
            by_exe.setdefault(exe, set()).add(lib)
    return DependencyMap(by_exe)


def format_dependency_map(depmap: DependencyMap) -> str:
    """Serialize to sorted ``exe<TAB>lib`` lines; reload round-trips exactly."""
    return "".join(
        f"{exe}\t{lib}\n"
        for exe in sorted(depmap.by_exe)
        for lib in sorted(depmap.by_exe[exe])
    )


def parse_linker_listing(text: str) -> set[str]:
    """Extract resolved absolute library paths from linker-lister output.

    Handles ``name => /abs/path (addr)`` and bare ``/abs/path (addr)``
    lines; vdso entries (no '=>' and no leading '/'), unresolved ``=> not
    found`` targets, and "not a dynamic executable" produce nothing.
    """
    libs: set[str] = set()
    for line in text.splitlines():
        line = line.strip()
        if "=>" in line:
            target = line.split("=>", 1)[1].strip()
        elif line.startswith("/"):
            target = line
        else:
            continue
        if target.startswith("/"):
            libs.add(target.split()[0])
    return libs


def probe_live(exe_paths: Iterable[str], lister: str = "ldd") -> DependencyMap:
    """Query the host linker lister for each executable.

    Executables that fail to probe map to the empty set with a warning;
    a missing lister raises ProbeUnavailable so the caller can fall back
    to a static map.
    """
    if shutil.which(lister) is None:
        raise ProbeUnavailable(f"linker lister {lister!r} not found on PATH")
    by_exe: dict[str, set[str]] = {}
    for exe in sorted(set(exe_paths)):
        try:
            proc = subprocess.run(
                [lister, exe], capture_output=True, text=True, timeout=60
            )
        except (OSError, subprocess.SubprocessError) as exc:
            log.warning("dependency probe failed for %s: %s", exe, exc)
            by_exe[exe] = set()
            continue
        # ldd exits non-zero for static binaries; its stdout still parses.
        by_exe[exe] = parse_linker_listing(proc.stdout) - {exe}
    return DependencyMap(by_exe)
