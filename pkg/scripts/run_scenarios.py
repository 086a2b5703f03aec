"""Explore every scenario file in a directory and tabulate the results."""

import argparse
import json
from pathlib import Path

from rgforest.rg_harness import explore, load_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", nargs="?", default=str(Path(__file__).resolve().parent.parent / "scenarios"))
    ap.add_argument("--json", help="write all reports to this file")
    args = ap.parse_args()
    reports = {}
    print(f"{'scenario':28s} {'schedules':>9s} {'time':>7s}  violations")
    for path in sorted(Path(args.directory).glob("*.json")):
        rep = explore(load_scenario(str(path)))
        counts = ", ".join(f"{k}={v}" for k, v in sorted(rep.violation_counts.items())) or "none"
        if rep.inconclusive:
            counts += " (inconclusive)"
        print(f"{path.stem:28s} {rep.schedules:9d} {rep.elapsed:6.2f}s  {counts}")
        reports[path.stem] = rep.to_json()
    if args.json:
        Path(args.json).write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
