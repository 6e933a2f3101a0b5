"""Command-line driver: generate matrix datasets, analyze them, benchmark sweeps.

Subcommands:
  generate  -- synthesize packets, anonymize, window into matrices, write
               one matrix file per window plus a manifest.json
  analyze   -- load a matrix directory, run the reduction pipeline, print
               per-window and total reports with timings
  bench     -- sweep resource and batch counts, repeating each cell and
               reporting the minimum timings (best of N)

Timing boundaries: analysis time wraps analyze_dataset only; end-to-end
time runs from command start to report emission, including file loading
and container construction.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .analytics import AggregateReport, analyze_dataset
from .bench import BenchResult, RunConfig
from .resources import make_group_scheduler, make_inline_scheduler
from .traffic import (
    MatrixFileError,
    TrafficMatrix,
    anonymize,
    build_matrices,
    generate_packets,
    read_matrix,
    to_flat,
    write_matrix,
)

DEFAULT_WINDOW = 2**17

MANIFEST_NAME = "manifest.json"


def cmd_generate(
    n: int,
    address_space: int,
    seed: int,
    window_size: int,
    out_dir: str | Path,
    invalid_fraction: float = 0.0,
) -> dict:
    """Generate, anonymize, window, and write matrices plus manifest; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stream = generate_packets(n, address_space, seed, invalid_fraction)
    anon, _ = anonymize(stream, key=seed)
    matrices = build_matrices(anon, window_size)
    files = []
    for m in matrices:
        name = f"window_{m.window_id:05d}.txt"
        write_matrix(m, out / name)
        files.append(name)
    manifest = {
        "packet_count": n,
        "address_space": address_space,
        "seed": seed,
        "window_size": window_size,
        "invalid_fraction": invalid_fraction,
        "dim": anon.address_space,
        "window_count": len(matrices),
        "files": files,
    }
    (out / MANIFEST_NAME).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest


def load_matrix_dir(in_dir: str | Path) -> tuple[list[TrafficMatrix], dict | None]:
    """Load all matrices of a directory, in manifest order (or sorted name order)."""
    root = Path(in_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"not a matrix directory: {root}")
    manifest = None
    manifest_path = root / MANIFEST_NAME
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
        names = manifest["files"]
    else:
        names = sorted(p.name for p in root.glob("window_*.txt"))
    if not names:
        raise MatrixFileError(f"{root}: no matrix files found")
    matrices = []
    for window_id, name in enumerate(names):
        path = root / name
        if not path.exists():
            raise MatrixFileError(f"{path}: listed in manifest but missing")
        matrices.append(read_matrix(path, window_id=window_id))
    return matrices, manifest


def _make_scheduler(resources: int, workers_per_resource: int | None, inline: bool):
    if inline:
        return make_inline_scheduler()
    return make_group_scheduler(resources, workers_per_resource)


def _timed_run(
    in_dir: str | Path,
    resources: int,
    workers_per_resource: int | None,
    batch_count: int,
    inline: bool = False,
    start_time: float | None = None,
) -> tuple[list[AggregateReport], AggregateReport, BenchResult]:
    """One full load-and-analyze cycle with both clocks."""
    t0 = time.perf_counter() if start_time is None else start_time
    matrices, manifest = load_matrix_dir(in_dir)
    flats = [to_flat(m) for m in matrices]
    with _make_scheduler(resources, workers_per_resource, inline) as sched:
        t_analysis = time.perf_counter()
        reports, totals = analyze_dataset(flats, sched, batch_count)
        analysis_time = time.perf_counter() - t_analysis
    packet_count = manifest["packet_count"] if manifest else totals.valid_packets
    config = RunConfig(
        resources=1 if inline else resources,
        workers_per_resource=workers_per_resource,
        batch_count=batch_count,
        window_size=manifest["window_size"] if manifest else None,
        packet_count=packet_count,
        seed=manifest["seed"] if manifest else None,
    )
    result = BenchResult.from_times(
        analysis_time=analysis_time,
        end_to_end_time=time.perf_counter() - t0,
        packet_count=packet_count,
        config=config,
    )
    return reports, totals, result


def _print_report(label: str, report: AggregateReport) -> None:
    fields = " ".join(f"{k}={v}" for k, v in report.to_dict().items())
    print(f"{label}: {fields}")


def cmd_analyze(
    in_dir: str | Path,
    resources: int = 1,
    workers_per_resource: int | None = None,
    batch_count: int = 1,
    inline: bool = False,
    out: str | Path | None = None,
    start_time: float | None = None,
) -> tuple[list[AggregateReport], AggregateReport, BenchResult]:
    """Analyze a matrix directory and emit reports plus timings."""
    reports, totals, result = _timed_run(
        in_dir, resources, workers_per_resource, batch_count, inline, start_time
    )
    for window_id, report in enumerate(reports):
        _print_report(f"window {window_id}", report)
    _print_report("totals", totals)
    print(
        f"analysis_time_s={result.analysis_time:.6f} "
        f"end_to_end_s={result.end_to_end_time:.6f} "
        f"packets={result.packet_count} "
        f"packet_rate={result.packet_rate:.1f}"
    )
    if out is not None:
        payload = {
            "per_matrix": [r.to_dict() for r in reports],
            "totals": totals.to_dict(),
            "bench": result.to_dict(),
        }
        Path(out).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return reports, totals, result


def cmd_bench(
    in_dir: str | Path,
    resource_list: list[int],
    batch_list: list[int],
    repeats: int,
    workers_per_resource: int | None = None,
    out: str | Path | None = None,
) -> list[dict]:
    """Sweep (resources x batches) cells; report the minimum of `repeats` runs per cell."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rows = []
    print(f"{'R':>3} {'b_n':>4} {'analysis_s':>12} {'end_to_end_s':>13} {'packets/s':>14}")
    for resources in resource_list:
        for batch_count in batch_list:
            runs = []
            totals = None
            for _ in range(repeats):
                _, totals, result = _timed_run(
                    in_dir, resources, workers_per_resource, batch_count
                )
                runs.append(result)
            best = BenchResult.from_times(
                analysis_time=min(r.analysis_time for r in runs),
                end_to_end_time=min(r.end_to_end_time for r in runs),
                packet_count=runs[0].packet_count,
                config=runs[0].config,
            )
            row = {
                "resources": resources,
                "batch_count": batch_count,
                "repeats": repeats,
                "analysis_time": best.analysis_time,
                "end_to_end_time": best.end_to_end_time,
                "packet_count": best.packet_count,
                "packet_rate": best.packet_rate,
                "totals": totals.to_dict(),
                "runs": [
                    {"analysis_time": r.analysis_time, "end_to_end_time": r.end_to_end_time}
                    for r in runs
                ],
            }
            rows.append(row)
            print(
                f"{resources:>3} {batch_count:>4} {best.analysis_time:>12.6f} "
                f"{best.end_to_end_time:>13.6f} {best.packet_rate:>14.1f}"
            )
    if out is not None:
        with open(out, "w") as fh:
            for row in rows:
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    return rows


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netmeter")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate an anonymized windowed matrix dataset")
    gen.add_argument("--packets", type=int, required=True, help="number of packets n")
    gen.add_argument("--address-space", type=int, default=2**16)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    gen.add_argument("--invalid-fraction", type=float, default=0.0)
    gen.add_argument("--out", required=True, help="output directory")

    ana = sub.add_parser("analyze", help="analyze a matrix directory")
    ana.add_argument("--in", dest="in_dir", required=True)
    ana.add_argument("--resources", type=int, default=1)
    ana.add_argument("--workers-per-resource", type=int, default=None)
    ana.add_argument("--batches", type=int, default=1)
    ana.add_argument("--inline", action="store_true", help="run on the calling thread")
    ana.add_argument("--out", default=None, help="JSON report file")

    ben = sub.add_parser("bench", help="sweep resources x batches, best of --repeats")
    ben.add_argument("--in", dest="in_dir", required=True)
    ben.add_argument("--resources", type=_int_list, default=[1, 2, 4, 8])
    ben.add_argument("--batches", type=_int_list, default=[1, 5, 10])
    ben.add_argument("--repeats", type=int, default=5)
    ben.add_argument("--workers-per-resource", type=int, default=None)
    ben.add_argument("--out", default=None, help="JSONL results file")
    return parser


def main(argv: list[str] | None = None) -> int:
    start_time = time.perf_counter()
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            manifest = cmd_generate(
                n=args.packets,
                address_space=args.address_space,
                seed=args.seed,
                window_size=args.window,
                out_dir=args.out,
                invalid_fraction=args.invalid_fraction,
            )
            print(f"wrote {manifest['window_count']} matrix files to {args.out}")
        elif args.command == "analyze":
            cmd_analyze(
                in_dir=args.in_dir,
                resources=args.resources,
                workers_per_resource=args.workers_per_resource,
                batch_count=args.batches,
                inline=args.inline,
                out=args.out,
                start_time=start_time,
            )
        else:
            cmd_bench(
                in_dir=args.in_dir,
                resource_list=args.resources,
                batch_list=args.batches,
                repeats=args.repeats,
                workers_per_resource=args.workers_per_resource,
                out=args.out,
            )
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
