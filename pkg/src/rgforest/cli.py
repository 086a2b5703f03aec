"""Command-line entry point: ``rgforest {laws,explore,oracle,bench}``.

Exit codes: 0 pass, 1 violation found, 2 usage error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import forest as fo
from .concurrent_ops import (
    Cells, Faults, NO_FAULTS, OpKind, SharedForest, ThreadProgram,
    build_clean_up, build_equate, build_test, run_native, run_sequential,
)
from .relation_core import ElementDomain, EquivRelation, MAX_DOMAIN, Relation, equate_abstract, refl_trans_closure, test_abstract
from .rg_harness import ScenarioError, explore, load_scenario, scenario_from_json

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
SCHEMA_VERSION = 1
SEED_ENV = "RG_FOREST_SEED"

FAULTS = {
    "skip-cleanup-last-write": Faults(skip_cleanup_last_write=True),
    "cleanup-wrong-target": Faults(cleanup_wrong_target=True),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    workers: int = 1
    json_out: str | None = None


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip() != "":
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return args.seed


def _emit(doc: dict, path: str | None) -> None:
    if not path:
        return
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------

def _law_job(job):
    from .trace_algebra.laws import run_law
    from .trace_algebra.model import StateSpace
    law, samples, seed, states, bound = job
    return run_law(law, samples, seed, StateSpace.from_size(states), bound)


def cmd_laws(args) -> int:
    from .trace_algebra.laws import LAW_IDS
    from .trace_algebra.model import MAX_BOUND, MAX_STATES

    laws = args.law or list(LAW_IDS)
    unknown = [x for x in laws if x not in LAW_IDS]
    if unknown:
        raise UsageError(f"unknown law id(s): {', '.join(unknown)}")
    if not 1 <= args.states <= MAX_STATES:
        raise UsageError(f"--states must lie in 1..{MAX_STATES}")
    if not 0 <= args.bound <= MAX_BOUND:
        raise UsageError(f"--bound must lie in 0..{MAX_BOUND}")
    if args.samples < 0 or args.workers < 1:
        raise UsageError("--samples must be >= 0 and --workers >= 1")
    seed = _seed(args)
    t0 = time.perf_counter()
    jobs = [(law, args.samples, seed, args.states, args.bound) for law in laws]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            summaries = list(pool.map(_law_job, jobs))
    else:
        summaries = [_law_job(j) for j in jobs]
    elapsed = time.perf_counter() - t0

    failed = sum(s.failed for s in summaries)
    missing_neg = [s.law for s in summaries if s.negative_found is False]
    for s in summaries:
        line = f"{s.law:26s} {s.passed:4d} passed {s.failed:3d} failed"
        if s.skipped:
            line += f" {s.skipped} skipped"
        if s.negative_found is not None:
            line += "  negative: " + ("counterexample found" if s.negative_found else "NO counterexample")
        print(line)
        for seed_i, cex in s.failures[:3]:
            print(f"    seed {seed_i}: {cex}")
        if s.negative_example is not None and args.verbose:
            print(f"    negative counterexample: {s.negative_example}")
    print(f"{len(summaries)} laws, {failed} failures, {elapsed:.1f}s")
    _emit({
        "schemaVersion": SCHEMA_VERSION,
        "command": "laws",
        "config": {"states": args.states, "bound": args.bound, "samples": args.samples, "seed": seed},
        "laws": [s.to_json() for s in summaries],
        "failures": failed,
        "timing": {"seconds": round(elapsed, 3)},
    }, args.json)
    if failed or missing_neg:
        if missing_neg:
            print("no counterexample for side-condition violations of: " + ", ".join(missing_neg))
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# explore
# ---------------------------------------------------------------------------

def cmd_explore(args) -> int:
    try:
        scn = load_scenario(args.scenario)
    except FileNotFoundError:
        raise UsageError(f"no such scenario file: {args.scenario}") from None
    except ScenarioError as exc:
        raise UsageError(str(exc)) from None
    if scn.mode == "random" and (args.seed_given or os.environ.get(SEED_ENV)):
        from dataclasses import replace
        scn = replace(scn, seed=_seed(args))
    report = explore(scn)
    print(f"schedules: {report.schedules}  truncated: {report.truncated}  "
          f"elapsed: {report.elapsed:.2f}s")
    for check, n in sorted(report.per_check_passes.items()):
        print(f"  {check:12s} {n} checks passed")
    for check, n in sorted(report.violation_counts.items()):
        print(f"  VIOLATION {check}: {n}")
    for v in report.violations[: args.show]:
        print(f"    {v.check} at step {v.step} (thread {v.thread}) schedule {list(v.schedule)}: {v.detail}")
    doc = report.to_json()
    doc["command"] = "explore"
    _emit(doc, args.json)
    if report.violation_counts:
        return EXIT_VIOLATION
    if report.inconclusive:
        print("inconclusive: some schedules hit the step bound")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def random_ops(rng: random.Random, n: int, count: int, weights=(1, 1, 1)) -> list[ThreadProgram]:
    kinds = [k for k, w in zip(("equate", "test", "clean_up"), weights) for _ in range(w)]
    out = []
    for _ in range(count):
        kind = rng.choice(kinds)
        x, y = rng.randrange(n), rng.randrange(n)
        if kind == "equate":
            out.append(build_equate(x, y))
        elif kind == "test":
            out.append(build_test(x, y))
        else:
            out.append(build_clean_up(x))
    return out


def run_oracle(n: int, ops: int, seed: int, faults: Faults = NO_FAULTS) -> tuple[bool, dict]:
    """Lockstep sequential run against the abstract relation.  Returns (ok, report)."""
    dom = ElementDomain(n)
    rng = random.Random(seed)
    mem = Cells(range(n))
    eq = EquivRelation.identity(dom)
    counts = {"equate": 0, "test": 0, "clean_up": 0}
    for i, prog in enumerate(random_ops(rng, n, ops)):
        before = mem.snapshot()
        result, _ = run_sequential(prog, mem, budget=16 * n + 16, faults=faults)
        after = mem.snapshot()
        counts[prog.kind.value] += 1
        problem = None
        if prog.kind is OpKind.EQUATE:
            eq = equate_abstract(eq, prog.x, prog.y)
        elif prog.kind is OpKind.TEST:
            if bool(result) != test_abstract(eq, prog.x, prog.y):
                problem = f"test({prog.x},{prog.y}) returned {result}, abstract answer {not result}"
        else:
            root = fo.root_elem(fo.Forest(dom, before), prog.x)
            path, cur = [], prog.x
            while cur != root:
                path.append(cur)
                cur = before[cur]
            stale = [k for k in path if after[k] != root]
            if stale:
                problem = f"clean_up({prog.x}) left {stale} not pointing at root {root}"
        if problem is None:
            f = fo.Forest(dom, after)
            if not fo.is_partial_order(f):
                problem = "forest has a non-trivial cycle"
            elif fo.retr_pairs(f) != eq.pairs:
                problem = "forest relation differs from the abstract relation"
        if problem:
            return False, {"opIndex": i, "op": prog.describe(), "problem": problem,
                           "before": list(before), "after": list(after),
                           "abstractClasses": [sorted(c) for c in eq.classes()], "counts": counts}
    return True, {"counts": counts, "final": list(mem.snapshot())}


def cmd_oracle(args) -> int:
    if not 1 <= args.n <= MAX_DOMAIN:
        raise UsageError(f"--n must lie in 1..{MAX_DOMAIN}")
    if args.ops < 0:
        raise UsageError("--ops must be non-negative")
    faults = NO_FAULTS
    if args.inject_fault:
        faults = FAULTS[args.inject_fault]
    seed = _seed(args)
    t0 = time.perf_counter()
    ok, info = run_oracle(args.n, args.ops, seed, faults)
    elapsed = time.perf_counter() - t0
    if ok:
        print(f"oracle: {args.ops} ops on n={args.n} matched the abstract relation ({elapsed:.2f}s)")
    else:
        print(f"oracle: MISMATCH at op {info['opIndex']} {info['op']}: {info['problem']}")
        print(f"  before {info['before']}")
        print(f"  after  {info['after']}")
        print(f"  abstract classes {info['abstractClasses']}")
    _emit({"schemaVersion": SCHEMA_VERSION, "command": "oracle", "ok": ok,
           "config": {"n": args.n, "ops": args.ops, "seed": seed, "fault": args.inject_fault},
           "result": info, "timing": {"seconds": round(elapsed, 3)}}, args.json)
    return EXIT_OK if ok else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def parse_mix(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--mix must look like equate:test:cleanup, got {text!r}") from None
    if len(parts) != 3 or any(x < 0 for x in parts) or sum(parts[:2]) == 0:
        raise UsageError("--mix needs three non-negative shares with some equate or test share")
    if parts[2] > 1:
        raise UsageError("--mix allows at most one cleanup share")
    return parts


def build_bench_scripts(threads: int, n: int, ops: int, mix, seed: int) -> list[list[ThreadProgram]]:
    rng = random.Random(seed)
    per = [ops // threads + (1 if i < ops % threads else 0) for i in range(threads)]
    scripts = []
    for i, count in enumerate(per):
        # only thread 0 cleans up, so two clean_ups never overlap
        weights = mix if i == 0 else (mix[0], mix[1], 0)
        scripts.append(random_ops(rng, n, count, weights))
    return scripts


def cmd_bench(args) -> int:
    mix = parse_mix(args.mix)
    if args.threads < 1 or not 1 <= args.n <= MAX_DOMAIN or args.ops < 0:
        raise UsageError("--threads >= 1, --n in 1..64 and --ops >= 0 required")
    seed = _seed(args)
    scripts = build_bench_scripts(args.threads, args.n, args.ops, mix, seed)
    sf = SharedForest(args.n)
    t0 = time.perf_counter()
    res = run_native(scripts, sf)
    elapsed = time.perf_counter() - t0

    dom = ElementDomain(args.n)
    final = res.forest
    problems = []
    if not fo.is_partial_order(final):
        problems.append("final forest has a non-trivial cycle")
    links = [note for _, note in sorted(res.link_log)]
    pairs = {(a, b) for a, b in links} | {(b, a) for a, b in links}
    expected = refl_trans_closure(Relation(dom, frozenset(pairs)))
    if not problems and fo.retr_pairs(final) != expected.pairs:
        problems.append("final relation differs from the closure of the logged links")
    if args.threads == 1 and not problems:
        mem = Cells(range(args.n))
        seq_results = [run_sequential(p, mem)[0] for p in scripts[0]]
        if tuple(mem.snapshot()) != final.parent or seq_results != res.results[0]:
            problems.append("single-thread run differs from the sequential run")
    rate = res.ops / elapsed if elapsed > 0 else float("inf")
    print(f"bench: {res.ops} ops on {args.threads} threads, n={args.n}, mix {args.mix}: "
          f"{elapsed:.2f}s, {rate:,.0f} ops/s, {len(links)} links")
    for p in problems:
        print(f"  FAILED: {p}")
    _emit({"schemaVersion": SCHEMA_VERSION, "command": "bench", "ok": not problems,
           "config": {"threads": args.threads, "n": args.n, "ops": args.ops, "mix": args.mix, "seed": seed},
           "links": len(links), "problems": problems,
           "timing": {"seconds": round(elapsed, 3), "opsPerSecond": round(rate, 1)}}, args.json)
    return EXIT_VIOLATION if problems else EXIT_OK


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rgforest", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help=f"RNG seed (overridden by ${SEED_ENV})")
        sp.add_argument("--json", metavar="OUT", help="write a JSON report ('-' for stdout)")

    sp = sub.add_parser("laws", help="check the algebraic law catalogue")
    sp.add_argument("--states", type=int, default=4)
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--law", action="append", metavar="ID")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("-v", "--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_laws)

    sp = sub.add_parser("explore", help="explore the interleavings of a scenario file")
    sp.add_argument("--scenario", required=True, metavar="FILE")
    sp.add_argument("--show", type=int, default=10, help="violations to print")
    common(sp)
    sp.set_defaults(func=cmd_explore)

    sp = sub.add_parser("oracle", help="sequential differential test against the abstract relation")
    sp.add_argument("--n", type=int, default=16)
    sp.add_argument("--ops", type=int, default=10000)
    sp.add_argument("--inject-fault", choices=sorted(FAULTS))
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", help="native-thread stress run with a final-state check")
    sp.add_argument("--threads", type=int, default=4)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--ops", type=int, default=100000)
    sp.add_argument("--mix", default="1:1:0", help="equate:test:cleanup shares")
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        args.seed_given = "--seed" in argv
        return args.func(args)
    except UsageError as exc:
        print(f"rgforest: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
