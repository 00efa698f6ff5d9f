"""Command-line interface: score, collect, and simulate subcommands.

One binary, matching the operator workflow: collect on the target device,
score on the workstation. Diagnostics go to stderr, data only to files.
Exit codes: 0 success, 1 data or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import signal
import sys
from pathlib import Path

from . import collect, deps, ingest, pkgdb, report, scorer, simulate

log = logging.getLogger("pkgprof")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkgprof",
        description="Profile file and package usage from kernel reference "
        "counts and process runtime samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score logs and write ranked CSV reports")
    p_score.add_argument("--refsinfo", required=True, help="kernel reference-count CSV")
    p_score.add_argument("--psinfo", required=True, help="process sample log")
    manifest = p_score.add_mutually_exclusive_group(required=True)
    manifest.add_argument("--manifest-dir", help="dpkg info directory of <package>.list files")
    manifest.add_argument("--manifest", help="consolidated package<TAB>path manifest")
    p_score.add_argument("--depmap", help="static exe<TAB>lib dependency map")
    p_score.add_argument(
        "--probe-deps",
        action="store_true",
        help="probe executable dependencies with the host linker lister",
    )
    p_score.add_argument("--config", help="key=value weight overrides")
    p_score.add_argument("--out-files", required=True, help="ranked per-file CSV")
    p_score.add_argument("--out-packages", required=True, help="ranked per-package CSV")
    p_score.add_argument("--cdf", action="store_true", help="also write .cdf.csv distributions")
    p_score.add_argument("--hist", action="store_true", help="also write .hist.csv distributions")
    p_score.add_argument("--bins", type=int, default=20, help="histogram bin count")
    p_score.add_argument(
        "--log-bins",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="decade-scaled histogram bins (default; --no-log-bins for linear)",
    )
    p_score.add_argument(
        "--canonicalize-paths",
        action="store_true",
        help="resolve symlinks in trace paths before ownership lookup",
    )
    p_score.set_defaults(func=cmd_score)

    p_collect = sub.add_parser("collect", help="sample processes and snapshot the kernel export")
    p_collect.add_argument("--interval", type=float, default=1.0, help="seconds between samples")
    p_collect.add_argument("--duration", type=float, default=None, help="stop after this many seconds")
    p_collect.add_argument("--psinfo-out", help="append process samples here")
    p_collect.add_argument("--refsinfo-src", default="/proc/refsinfo", help="kernel export to snapshot")
    p_collect.add_argument("--refsinfo-out", help="write the snapshot here")
    p_collect.set_defaults(func=cmd_collect)

    p_sim = sub.add_parser("simulate", help="generate synthetic workload fixtures")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--packages", type=int, default=12)
    p_sim.add_argument("--daemons", type=int, default=3)
    p_sim.add_argument("--short-lived", type=int, default=5)
    p_sim.add_argument("--uptime", type=int, default=85 * 86400, help="modeled uptime in seconds")
    p_sim.add_argument("--out-dir", required=True)
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def _distribution_path(base: str, part: str) -> Path:
    path = Path(base)
    if path.suffix == ".csv":
        path = path.with_suffix("")
    return path.with_name(path.name + f".{part}.csv")


def cmd_score(args: argparse.Namespace) -> int:
    try:
        with open(args.refsinfo, encoding="utf-8") as fh:
            refs, ref_errors = ingest.parse_refsinfo(fh)
        with open(args.psinfo, encoding="utf-8") as fh:
            samples, ps_errors, suspects = ingest.parse_psinfo(fh)
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return 1
    for err in ref_errors:
        log.warning("%s:%d: %s: %r", args.refsinfo, err.line_no, err.reason, err.line)
    for err in ps_errors:
        log.warning("%s:%d: %s: %r", args.psinfo, err.line_no, err.reason, err.line)
    for warn in suspects:
        log.warning("%s:%d: suspect sample for %s: %s", args.psinfo, warn.line_no, warn.exe_path, warn.reason)

    try:
        if args.manifest_dir:
            index = pkgdb.load_manifest_dir(args.manifest_dir)
        else:
            index = pkgdb.load_consolidated_manifest(args.manifest)
    except OSError as exc:
        log.error("cannot load manifest: %s", exc)
        return 1

    depmap = deps.DependencyMap()
    probed = False
    if args.probe_deps:
        try:
            depmap = deps.probe_live({s.exe_path for s in samples})
            probed = True
        except deps.ProbeUnavailable as exc:
            if args.depmap:
                log.warning("%s; falling back to static map", exc)
            else:
                log.error("%s", exc)
                return 1
    if not probed and args.depmap:
        try:
            depmap = deps.load_dependency_map(args.depmap)
        except OSError as exc:
            log.error("cannot load dependency map: %s", exc)
            return 1

    cfg = scorer.ScoreConfig()
    if args.config:
        try:
            cfg = scorer.load_config(args.config)
        except (OSError, scorer.ConfigError) as exc:
            log.error("bad config: %s", exc)
            return 1

    if args.canonicalize_paths:
        refs = ingest.merge_ref_records(
            dataclasses.replace(r, filename=os.path.realpath(r.filename)) for r in refs
        )
        samples = [
            dataclasses.replace(s, exe_path=os.path.realpath(s.exe_path)) for s in samples
        ]

    table = scorer.build_score_table(refs, samples, depmap, cfg)
    package_rows = scorer.aggregate_packages(table, index)
    file_scores = {path: fs.total for path, fs in table.items()}
    package_scores = {row.package: row.total for row in package_rows}

    targets = [
        (args.out_files, file_scores, report.FILE_LEVEL),
        (args.out_packages, package_scores, report.PACKAGE_LEVEL),
    ]
    binning = "log10" if args.log_bins else "linear"
    try:
        for out_path, scores, kind in targets:
            with open(out_path, "w", encoding="utf-8", newline="") as fh:
                report.emit_csv(report.rank(scores, kind), fh)
            if args.cdf or args.hist:
                dist = report.distribution(scores, binning, args.bins)
                for part, wanted in (("cdf", args.cdf), ("hist", args.hist)):
                    if wanted:
                        with open(_distribution_path(out_path, part), "w", encoding="utf-8", newline="") as fh:
                            report.emit_csv(dist, fh, part)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return 1

    log.info(
        "scored %d files into %d packages (%d parse warnings)",
        len(table),
        len(package_rows),
        len(ref_errors) + len(ps_errors) + len(suspects),
    )
    return 0


def cmd_collect(args: argparse.Namespace) -> int:
    if not args.psinfo_out and not args.refsinfo_out:
        log.error("nothing to collect: pass --psinfo-out and/or --refsinfo-out")
        return 2
    succeeded = False

    if args.refsinfo_out:
        try:
            with open(args.refsinfo_out, "w", encoding="utf-8", newline="") as sink:
                collect.snapshot_refsinfo(args.refsinfo_src, sink)
            succeeded = True
        except (collect.SourceUnavailable, OSError) as exc:
            log.warning("refsinfo snapshot skipped: %s", exc)

    if args.psinfo_out:
        previous = signal.getsignal(signal.SIGTERM)
        signal.signal(signal.SIGTERM, lambda *_: (_ for _ in ()).throw(KeyboardInterrupt()))
        try:
            with open(args.psinfo_out, "a", encoding="utf-8") as sink:
                try:
                    collect.sample_processes(args.interval, args.duration, sink)
                except KeyboardInterrupt:
                    pass  # termination flushes and exits cleanly
            succeeded = True
        except (collect.ProcessListUnavailable, OSError, ValueError) as exc:
            log.warning("process sampling failed: %s", exc)
        finally:
            signal.signal(signal.SIGTERM, previous)

    return 0 if succeeded else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = simulate.WorkloadSpec(
        n_packages=args.packages,
        n_daemons=args.daemons,
        n_shortlived=args.short_lived,
        uptime_s=args.uptime,
        rng_seed=args.seed,
    )
    workload = simulate.generate(spec)
    try:
        simulate.write_workload(workload, args.out_dir)
    except OSError as exc:
        log.error("cannot write fixtures: %s", exc)
        return 1
    log.info("wrote %s into %s", ", ".join(simulate.WORKLOAD_FILENAMES.values()), args.out_dir)
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO, format="%(levelname)s: %(message)s"
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
