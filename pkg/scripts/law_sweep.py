"""Run the law catalogue across several state-space sizes and bounds."""

import argparse
import time

from rgforest.trace_algebra.laws import LAW_IDS, run_law
from rgforest.trace_algebra.model import StateSpace, clear_cache


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="2,4", help="comma-separated state counts")
    ap.add_argument("--bounds", default="1,2,3", help="comma-separated bounds")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--law", action="append")
    args = ap.parse_args()
    laws = args.law or LAW_IDS
    total_failed = 0
    for size in (int(x) for x in args.sizes.split(",")):
        sp = StateSpace.from_size(size)
        for bound in (int(x) for x in args.bounds.split(",")):
            t0 = time.perf_counter()
            failed = []
            for law in laws:
                s = run_law(law, args.samples, args.seed, sp, bound)
                clear_cache()
                if s.failed:
                    failed.append(f"{law}({s.failed})")
            total_failed += len(failed)
            print(f"states={size:2d} bound={bound}: {len(laws) - len(failed)}/{len(laws)} laws clean "
                  f"in {time.perf_counter() - t0:.1f}s {' '.join(failed)}", flush=True)
    raise SystemExit(1 if total_failed else 0)


if __name__ == "__main__":
    main()
