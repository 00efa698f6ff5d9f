"""Parsers for the two profiling log formats.

refsinfo: kernel-exported per-file I/O reference counts, one CSV line per
file: ``<path>,<nopen>,<nread>,<nclose>``. Paths may contain commas, so a
line is split on its *last* three commas; the trailing count fields can
never contain one.

psinfo: user-space process samples, one CSV line per observed process:
``<exe_path>,<etime>,<pid>,<cputime>`` where both durations use the
process-status clock rendering ``[[dd-]hh:]mm:ss``. Split on the last
three commas for the same reason.

Both parsers are lenient: bad lines are collected and reported, never
fatal, since live logs may be truncated mid-write.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

# Sanity bound used to flag corrupt samples: cpu time can legitimately
# exceed elapsed time on multicore hosts, but not by more than this factor.
DEFAULT_MAX_CORES = 256

_COUNT_RE = re.compile(r"[0-9]+")
_CLOCK_RE = re.compile(r"(?:(?:([0-9]+)-)?([0-9]+):)?([0-9]{1,2}):([0-9]{1,2})")


class BadClockFormat(ValueError):
    """Raised when a duration string does not match ``[[dd-]hh:]mm:ss``."""


@dataclass(frozen=True)
class RefRecord:
    """Per-file open/read/close counts as exported by the kernel hook."""

    filename: str
    n_open: int
    n_read: int
    n_close: int

    def __post_init__(self) -> None:
        if not self.filename.startswith("/"):
            raise ValueError(f"filename must be an absolute path: {self.filename!r}")
        if min(self.n_open, self.n_read, self.n_close) < 0:
            raise ValueError("reference counts must be non-negative")


@dataclass(frozen=True)
class ProcessSample:
    """One observed process: executable, pid, elapsed and CPU seconds."""

    exe_path: str
    pid: int
    elapsed_s: int
    cpu_s: int

    def __post_init__(self) -> None:
        if not self.exe_path.startswith("/"):
            raise ValueError(f"exe_path must be an absolute path: {self.exe_path!r}")
        if self.pid < 1:
            raise ValueError(f"pid must be positive: {self.pid}")
        if self.elapsed_s < 0 or self.cpu_s < 0:
            raise ValueError("durations must be non-negative")


@dataclass(frozen=True)
class MalformedLine:
    """A rejected input line; parsing continues past it."""

    line_no: int
    line: str
    reason: str


@dataclass(frozen=True)
class SuspectSample:
    """A kept-but-flagged sample whose cpu time exceeds any plausible value."""

    line_no: int
    exe_path: str
    reason: str


def parse_etime(text: str) -> int:
    """Convert a ``[[dd-]hh:]mm:ss`` clock string to whole seconds.

    mm and ss must be in [0, 59]; hh is range-checked to [0, 23] only when
    a day count is present (without one, hours grow without bound).
    """
    m = _CLOCK_RE.fullmatch(text)
    if m is None:
        raise BadClockFormat(f"not a [[dd-]hh:]mm:ss clock string: {text!r}")
    dd, hh, mm, ss = m.groups()
    days = int(dd) if dd is not None else 0
    hours = int(hh) if hh is not None else 0
    minutes, seconds = int(mm), int(ss)
    if minutes > 59 or seconds > 59:
        raise BadClockFormat(f"minutes/seconds out of range in {text!r}")
    if dd is not None and hours > 23:
        raise BadClockFormat(f"hours out of range in {text!r}")
    return days * 86400 + hours * 3600 + minutes * 60 + seconds


def format_etime(seconds: int) -> str:
    """Render whole seconds in the canonical ``[[dd-]hh:]mm:ss`` form."""
    if seconds < 0:
        raise ValueError("duration must be non-negative")
    days, rem = divmod(seconds, 86400)
    hours, rem = divmod(rem, 3600)
    minutes, secs = divmod(rem, 60)
    if days:
        return f"{days}-{hours:02d}:{minutes:02d}:{secs:02d}"
    if hours:
        return f"{hours:02d}:{minutes:02d}:{secs:02d}"
    return f"{minutes:02d}:{secs:02d}"


def merge_ref_records(records: Iterable[RefRecord]) -> list[RefRecord]:
    """Merge duplicate filenames by field-wise summation, first-seen order.

    The kernel map has unique keys, so duplicates only arise from
    concatenated capture sessions, where summation is the meaningful merge.
    """
    counts: dict[str, list[int]] = {}
    for rec in records:
        bucket = counts.setdefault(rec.filename, [0, 0, 0])
        bucket[0] += rec.n_open
        bucket[1] += rec.n_read
        bucket[2] += rec.n_close
    return [RefRecord(name, o, r, c) for name, (o, r, c) in counts.items()]


def parse_refsinfo(source: Iterable[str]) -> tuple[list[RefRecord], list[MalformedLine]]:
    """Parse refsinfo lines into merged RefRecords plus an error list."""
    raw: list[RefRecord] = []
    errors: list[MalformedLine] = []
    for line_no, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.rsplit(",", 3)
        if len(parts) != 4:
            errors.append(MalformedLine(line_no, line, "expected <path>,<nopen>,<nread>,<nclose>"))
            continue
        name, *fields = parts
        if not name.startswith("/"):
            errors.append(MalformedLine(line_no, line, "filename is not an absolute path"))
            continue
        if not all(_COUNT_RE.fullmatch(f) for f in fields):
            errors.append(MalformedLine(line_no, line, "counts must be non-negative integers"))
            continue
        raw.append(RefRecord(name, int(fields[0]), int(fields[1]), int(fields[2])))
    return merge_ref_records(raw), errors


def parse_psinfo(
    source: Iterable[str], max_cores: int = DEFAULT_MAX_CORES
) -> tuple[list[ProcessSample], list[MalformedLine], list[SuspectSample]]:
    """Parse psinfo lines into ProcessSamples, errors, and suspect warnings.

    A sample whose cpu_s exceeds elapsed_s * max_cores is flagged as
    suspect (likely corrupt) but kept.
    """
    samples: list[ProcessSample] = []
    errors: list[MalformedLine] = []
    warnings: list[SuspectSample] = []
    for line_no, line in enumerate(source, start=1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.rsplit(",", 3)
        if len(parts) != 4:
            errors.append(MalformedLine(line_no, line, "expected <exe>,<etime>,<pid>,<cputime>"))
            continue
        exe, etime, pid_str, cputime = parts
        if not exe.startswith("/"):
            errors.append(MalformedLine(line_no, line, "exe_path is not an absolute path"))
            continue
        if not _COUNT_RE.fullmatch(pid_str) or int(pid_str) < 1:
            errors.append(MalformedLine(line_no, line, "pid must be a positive integer"))
            continue
        try:
            elapsed_s = parse_etime(etime)
            cpu_s = parse_etime(cputime)
        except BadClockFormat as exc:
            errors.append(MalformedLine(line_no, line, str(exc)))
            continue
        sample = ProcessSample(exe, int(pid_str), elapsed_s, cpu_s)
        if cpu_s > elapsed_s * max_cores:
            warnings.append(
                SuspectSample(
                    line_no,
                    exe,
                    f"cpu time {cpu_s}s exceeds elapsed {elapsed_s}s x {max_cores} cores",
                )
            )
        samples.append(sample)
    return samples, errors, warnings


def format_refsinfo(records: Iterable[RefRecord]) -> str:
    """Serialize RefRecords to newline-terminated refsinfo lines."""
    return "".join(
        f"{r.filename},{r.n_open},{r.n_read},{r.n_close}\n" for r in records
    )


def format_psinfo(samples: Iterable[ProcessSample]) -> str:
    """Serialize ProcessSamples to newline-terminated psinfo lines."""
    return "".join(
        f"{s.exe_path},{format_etime(s.elapsed_s)},{s.pid},{format_etime(s.cpu_s)}\n"
        for s in samples
    )
