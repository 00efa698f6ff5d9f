"""Installed-package manifests and reverse file-to-package ownership lookup.

Replaces per-file ``dpkg -S`` shelling with an in-memory index built once
from either the dpkg info-directory layout (``<dir>/<package>.list``) or a
portable consolidated manifest (``package<TAB>path`` lines).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

# Debian policy charset: lowercase alphanumerics plus '+', '-', '.'
_PACKAGE_NAME_RE = re.compile(r"[a-z0-9+.-]+")

# Pseudo-package collecting scores of files no installed package owns.
UNOWNED = "(unowned)"


def is_valid_package_name(name: str) -> bool:
    return bool(_PACKAGE_NAME_RE.fullmatch(name))


@dataclass
class OwnershipIndex:
    """Reverse map from file path to owning packages.

    ``all_packages`` holds every installed package, including those that
    own zero referenced files; lookups of unknown paths return the empty
    set. Treat as immutable after construction.
    """

    by_file: dict[str, set[str]] = field(default_factory=dict)
    all_packages: set[str] = field(default_factory=set)

    def owners_of(self, path: str) -> set[str]:
        """Exact-match lookup; symlinks are not resolved here."""
        return self.by_file.get(path, set())

    def add(self, package: str, path: str | None) -> None:
        self.all_packages.add(package)
        if path is not None:
            self.by_file.setdefault(path, set()).add(package)


def load_manifest_dir(dir_path: str | Path) -> OwnershipIndex:
    """Build an index from a dpkg info-directory of ``<package>.list`` files.

    Each list file holds one absolute path per line; directory entries are
    retained as ordinary paths. Unreadable lists and invalid package names
    are skipped with a warning.
    """
    root = Path(dir_path)
    if not root.is_dir():
        raise FileNotFoundError(f"manifest directory not found: {root}")
    index = OwnershipIndex()
    for list_file in sorted(root.glob("*.list")):
        package = list_file.name[: -len(".list")]
        if not is_valid_package_name(package):
            log.warning("skipping manifest with invalid package name: %s", list_file.name)
            continue
        try:
            text = list_file.read_text(encoding="utf-8")
        except OSError as exc:
            log.warning("skipping unreadable manifest for %s: %s", package, exc)
            continue
        index.add(package, None)
        for line in text.splitlines():
            line = line.rstrip()
            if not line:
                continue
            if not line.startswith("/"):
                log.warning("%s: ignoring non-absolute path %r", list_file.name, line)
                continue
            index.add(package, line)
    return index


def load_consolidated_manifest(file_path: str | Path) -> OwnershipIndex:
    """Build an index from ``package<TAB>path`` lines.

    A line ``package<TAB>`` (empty path) declares a package owning no
    files. Semantics match load_manifest_dir; malformed lines are skipped
    with a warning.
    """
    path = Path(file_path)
    index = OwnershipIndex()
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            package, sep, file_entry = line.partition("\t")
            if not sep:
                log.warning("%s:%d: expected package<TAB>path", path, line_no)
                continue
            if not is_valid_package_name(package):
                log.warning("%s:%d: invalid package name %r", path, line_no, package)
                continue
            if file_entry and not file_entry.startswith("/"):
                log.warning("%s:%d: path is not absolute: %r", path, line_no, file_entry)
                continue
            index.add(package, file_entry or None)
    return index


def format_consolidated_manifest(index: OwnershipIndex) -> str:
    """Serialize an index to sorted ``package<TAB>path`` lines."""
    lines = []
    owning = set()
    for file_path in sorted(index.by_file):
        for package in sorted(index.by_file[file_path]):
            lines.append(f"{package}\t{file_path}\n")
            owning.add(package)
    for package in sorted(index.all_packages - owning):
        lines.append(f"{package}\t\n")
    return "".join(lines)
