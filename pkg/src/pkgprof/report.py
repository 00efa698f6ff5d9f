"""Ranked score tables and distribution (CDF / histogram) exports.

Output is plain CSV rather than rendered images so results stay
reproducible with any plotting tool. Scores span many orders of
magnitude on long-running hosts, hence the log10 histogram mode.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import groupby
from typing import Mapping, TextIO

FILE_LEVEL = "file-level"
PACKAGE_LEVEL = "package-level"


@dataclass(frozen=True)
class RankedReport:
    """(name, score) rows, descending by score, ties by ascending name."""

    rows: tuple[tuple[str, float], ...]
    kind: str = FILE_LEVEL


@dataclass(frozen=True)
class Distribution:
    """Empirical CDF points plus histogram bins over one score table."""

    cdf_points: tuple[tuple[float, float], ...]  # (score, cumulative fraction)
    hist_bins: tuple[tuple[float, float, int], ...]  # (bin low, bin high, count)
    binning: str = "linear"  # "linear" | "log10"


def rank(scores: Mapping[str, float], kind: str = FILE_LEVEL) -> RankedReport:
    """Order a score map for reporting; byte-identical across runs."""
    rows = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return RankedReport(tuple(rows), kind)


def distribution(
    scores: Mapping[str, float], binning: str = "linear", bin_count: int = 20
) -> Distribution:
    """Empirical CDF and histogram of a score map.

    Linear mode uses equal-width bins over [0, max]. log10 mode uses
    decade-scaled bins from 1 to max, plus a dedicated underflow bin
    [0, 1) catching zero and sub-1 scores. The last bin is closed; empty
    input yields an empty distribution.
    """
    if bin_count < 1:
        raise ValueError("bin_count must be at least 1")
    if binning not in ("linear", "log10"):
        raise ValueError(f"unknown binning mode {binning!r}")
    values = sorted(scores.values())
    n = len(values)
    if n == 0:
        return Distribution((), (), binning)

    cdf = []
    seen = 0
    for value, group in groupby(values):
        seen += sum(1 for _ in group)
        cdf.append((value, seen / n))

    top = values[-1]
    bins: list[tuple[float, float, int]]
    if binning == "linear":
        if top <= 0:
            bins = [(0.0, 0.0, n)]
        else:
            width = top / bin_count
            counts = [0] * bin_count
            for v in values:
                counts[min(max(int(v / width), 0), bin_count - 1)] += 1
            bins = [(i * width, (i + 1) * width, counts[i]) for i in range(bin_count)]
            bins[-1] = (bins[-1][0], top, bins[-1][2])
    else:
        in_range = [v for v in values if v >= 1]
        bins = [(0.0, 1.0, n - len(in_range))]
        if in_range:
            top_log = math.log10(top)
            if top_log <= 0:  # every in-range value is exactly 1
                bins.append((1.0, top, len(in_range)))
            else:
                width = top_log / bin_count
                counts = [0] * bin_count
                for v in in_range:
                    counts[min(int(math.log10(v) / width), bin_count - 1)] += 1
                edges = [10 ** (i * width) for i in range(bin_count)] + [top]
                bins.extend(
                    (edges[i], edges[i + 1], counts[i]) for i in range(bin_count)
                )
    return Distribution(tuple(cdf), tuple(bins), binning)


def emit_csv(
    obj: RankedReport | Distribution, sink: TextIO, part: str = "cdf"
) -> None:
    """Write one table as UTF-8 CSV with LF line endings.

    RankedReport emits ``rank,name,score``. A Distribution holds two
    tables, so ``part`` selects "cdf" (``score,fraction``, fractions to 6
    decimals) or "hist" (``bin_low,bin_high,count``). Scores keep full
    precision; names with commas are quoted by the CSV layer.
    """
    writer = csv.writer(sink, lineterminator="\n")
    if isinstance(obj, RankedReport):
        writer.writerow(["rank", "name", "score"])
        for position, (name, score) in enumerate(obj.rows, start=1):
            writer.writerow([position, name, score])
    elif isinstance(obj, Distribution):
        if part == "cdf":
            writer.writerow(["score", "fraction"])
            for score, fraction in obj.cdf_points:
                writer.writerow([score, f"{fraction:.6f}"])
        elif part == "hist":
            writer.writerow(["bin_low", "bin_high", "count"])
            for low, high, count in obj.hist_bins:
                writer.writerow([low, high, count])
        else:
            raise ValueError(f"unknown distribution part {part!r}")
    else:
        raise TypeError(f"cannot emit {type(obj).__name__}")
