#!/usr/bin/env python3
"""Generate a synthetic matrix dataset and sweep resource/batch configurations.

Produces the best-of-N timing table (analysis time, end-to-end time, packet
rate) across a grid of resource counts and batch counts, mirroring how the
benchmark harness is meant to be driven. Results go to stdout and, with
--out, to a JSONL file (one row per grid cell).
"""

import argparse
import json
from pathlib import Path

from netmeter.cli import cmd_bench, cmd_generate


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--packets", type=int, default=10**6)
    parser.add_argument("--address-space", type=int, default=2**14)
    parser.add_argument("--window", type=int, default=2**17)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--dir", default="bench_data", help="dataset directory (reused if present)")
    parser.add_argument("--resources", default="1,2,4,8")
    parser.add_argument("--batches", default="1,5,10")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--workers-per-resource", type=int, default=None)
    parser.add_argument("--out", default=None, help="JSONL results file")
    args = parser.parse_args()

    data_dir = Path(args.dir)
    manifest_path = data_dir / "manifest.json"
    wanted = {
        "packet_count": args.packets,
        "address_space": args.address_space,
        "window_size": args.window,
        "seed": args.seed,
    }
    reuse = False
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
        reuse = all(manifest.get(k) == v for k, v in wanted.items())
    if not reuse:
        print(f"generating {args.packets} packets into {data_dir} ...")
        cmd_generate(
            n=args.packets,
            address_space=args.address_space,
            seed=args.seed,
            window_size=args.window,
            out_dir=data_dir,
        )
    cmd_bench(
        in_dir=data_dir,
        resource_list=[int(x) for x in args.resources.split(",")],
        batch_list=[int(x) for x in args.batches.split(",")],
        repeats=args.repeats,
        workers_per_resource=args.workers_per_resource,
        out=args.out,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
