"""End-to-end acceptance criteria; each prints one PASS/FAIL line."""

import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from rgforest import forest as fo
from rgforest.concurrent_ops import LinkPolicy, build_clean_up, build_equate, build_test
from rgforest.rg_harness import Scenario, check_outcome_refinement, explore, replay

ROOT = Path(__file__).resolve().parent.parent


@contextmanager
def criterion(request, number, title, limit=None):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - t0
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {title} ({elapsed:.1f}s)"
        with request.config.pluginmanager.getplugin("capturemanager").global_and_fixture_disabled():
            print("\n" + line)


def cli(*args):
    return subprocess.run([sys.executable, "-m", "rgforest", *args], capture_output=True, text=True, cwd=ROOT)


def scn(n, *threads, **kw):
    return Scenario(n=n, threads=tuple(tuple(t) for t in threads), **kw)


def test_1_forest_oracle_suite(request):
    with criterion(request, 1, "root/eq_f properties and coupling invariant on all forests n<=5", 10):
        for n in range(1, 6):
            count = 0
            for f in fo.enumerate_forests(n):
                count += 1
                roots = [fo.root_elem(f, k) for k in range(n)]
                for a in range(n):
                    for b in range(n):
                        assert (roots[a] == roots[b]) == fo.eq_f(f, a, b)
                        if fo.le_f(f, a, roots[b]):
                            assert fo.eq_f(f, a, b)
                assert fo.coupling_invariant_holds(fo.retr(f), f)
            assert count == fo.FOREST_COUNTS[n]


def test_2_sequential_differential(request):
    with criterion(request, 2, "oracle --n 16 --ops 10000 matches the abstract relation", 30):
        r = cli("oracle", "--n", "16", "--ops", "10000")
        assert r.returncode == 0, r.stdout + r.stderr


def test_3_exhaustive_ordered(request):
    with criterion(request, 3, "equate(0,1) | equate(2,3) | test(0,3), exhaustive, no violations", 120):
        s = scn(4, [build_equate(0, 1)], [build_equate(2, 3)], [build_test(0, 3)])
        rep = explore(s)
        assert rep.ok, rep.violation_counts
        again = explore(s)
        assert rep.schedules == again.schedules > 0
        for check in ("guarantee", "rely", "coupling", "testPost", "variants"):
            assert rep.per_check_passes.get(check, 0) > 0


def test_4_cleanup_on_chain(request):
    with criterion(request, 4, "clean_up(0) | equate(0,4) on chain, exhaustive, no violations", 120):
        s = scn(5, [build_clean_up(0)], [build_equate(0, 4)], initial=(1, 2, 3, 4, 4))
        rep = explore(s)
        assert rep.ok, rep.violation_counts
        assert rep.per_check_passes["assertions"] > 0 and rep.per_check_passes["variants"] > 0
        assert rep.per_check_passes["guarantee"] > 0


def test_5_negative_scenario(request):
    with criterion(request, 5, "unordered symmetric equates break the partial order; ordered do not"):
        s = scn(2, [build_equate(0, 1)], [build_equate(1, 0)], policy=LinkPolicy.UNORDERED)
        rep = explore(s)
        hits = [v for v in rep.violations if v.check == "guarantee" and "partial order" in v.detail]
        assert hits
        v = hits[0]
        again = replay(s, v.schedule)
        assert any(w.check == v.check and w.step == v.step and w.detail == v.detail and w.after == v.after
                   for w in again.violations)
        ordered = explore(scn(2, [build_equate(0, 1)], [build_equate(1, 0)]))
        assert ordered.ok


def test_6_rely_violation(request):
    with criterion(request, 6, "two concurrent clean_ups trigger a rely violation"):
        s = scn(4, [build_clean_up(0)], [build_clean_up(1)], initial=(1, 2, 3, 3), rely_violation_demo=True)
        assert explore(s).violation_counts.get("rely", 0) >= 1


def test_7_outcome_refinement(request):
    with criterion(request, 7, "equate(0,1) | test(0,1): concrete outcomes within abstract outcomes", 60):
        rep = check_outcome_refinement(scn(3, [build_equate(0, 1)], [build_test(0, 1)]))
        assert rep.concrete_outcomes and rep.abstract_outcomes
        assert rep.concrete_outcomes <= rep.abstract_outcomes
        assert {dict(res)[(1, 0)] for res, _ in rep.concrete_outcomes} == {True, False}
        assert rep.ok


@pytest.mark.slow
def test_8_law_suite(request):
    with criterion(request, 8, "laws --states 4 --bound 3 --samples 100 --seed 0", 300):
        r = cli("laws", "--states", "4", "--bound", "3", "--samples", "100", "--seed", "0")
        assert r.returncode == 0, r.stdout[-3000:] + r.stderr
        assert "39 laws, 0 failures" in r.stdout
        for law in ("reify-test", "reify-guar", "reify-spec"):
            line = next(l for l in r.stdout.splitlines() if l.startswith(law + " "))
            assert "counterexample found" in line


def test_9_native_stress(request):
    with criterion(request, 9, "bench --threads 4 --n 64 --ops 100000 --mix 1:1:0", 60):
        r = cli("bench", "--threads", "4", "--n", "64", "--ops", "100000", "--mix", "1:1:0")
        assert r.returncode == 0, r.stdout + r.stderr
