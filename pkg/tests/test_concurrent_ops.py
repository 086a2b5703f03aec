import random

import pytest
from hypothesis import given, strategies as st

from rgforest import forest as fo
from rgforest.concurrent_ops import (
    BudgetExceeded, Cells, Faults, LinkPolicy, SharedForest, build_clean_up, build_equate,
    build_root_of, build_test, cas_cell, run_native, run_sequential,
)
from rgforest.relation_core import EquivRelation, equate_abstract, refl_trans_closure, Relation


def test_cas_cell():
    sf = SharedForest(3)
    assert cas_cell(sf, 0, 0, 1) and sf.cells == [1, 1, 2]
    assert not cas_cell(sf, 0, 0, 2) and sf.cells == [1, 1, 2]
    assert cas_cell(sf, 1, 1, 1) and sf.cells == [1, 1, 2]


def test_root_of_sequential():
    assert run_sequential(build_root_of(0), Cells([1, 2, 2])) == (2, 3)
    assert run_sequential(build_root_of(1), Cells([0, 1, 2])) == (1, 1)


def test_root_of_with_interleaved_link():
    mem = Cells([1, 2, 2, 3])
    fr = build_root_of(0).start()
    fr.step(mem)              # read f[0] = 1
    mem.cas(2, 2, 3)          # another thread links root 2 under 3
    while not fr.finished:
        fr.step(mem)
    assert fr.result == 3


def test_test_sequential():
    assert run_sequential(build_test(0, 1), Cells([1, 2, 2]))[0] is True
    assert run_sequential(build_test(0, 1), Cells([0, 1, 2]))[0] is False


def test_equate_sequential():
    mem = Cells([0, 1, 2])
    run_sequential(build_equate(0, 1), mem)
    assert mem.snapshot() == (1, 1, 2)
    before = Cells([1, 1, 2])
    run_sequential(build_equate(0, 1), before)
    assert before.snapshot() == (1, 1, 2)


def test_equate_policies_pick_link_direction():
    ordered, unordered = Cells([0, 1]), Cells([0, 1])
    run_sequential(build_equate(1, 0), ordered)
    run_sequential(build_equate(1, 0, LinkPolicy.UNORDERED), unordered)
    assert ordered.snapshot() == (1, 1)
    assert unordered.snapshot() == (0, 0)


def test_unordered_symmetric_equates_can_form_a_cycle():
    mem = Cells([0, 1])
    a = build_equate(0, 1, LinkPolicy.UNORDERED).start()
    b = build_equate(1, 0, LinkPolicy.UNORDERED).start()
    for fr in (a, a, b, b):   # both finish their root walks first
        fr.step(mem)
    a.step(mem)
    b.step(mem)
    assert mem.snapshot() == (1, 0)
    assert not fo.is_partial_order(fo.Forest.of(mem.snapshot()))


def test_clean_up_sequential():
    mem = Cells([1, 2, 2])
    run_sequential(build_clean_up(0), mem)
    assert mem.snapshot() == (2, 2, 2)
    root = Cells([1, 2, 2])
    _, steps = run_sequential(build_clean_up(2), root)
    assert root.snapshot() == (1, 2, 2) and steps == 1


def test_clean_up_faults():
    wrong = Cells([1, 2, 3, 3])
    run_sequential(build_clean_up(0), wrong, faults=Faults(cleanup_wrong_target=True))
    assert wrong.snapshot() == (0, 1, 2, 3)
    skip = Cells([1, 2, 3, 3])
    run_sequential(build_clean_up(0), skip, faults=Faults(skip_cleanup_last_write=True))
    # node 1 is the last one whose write would have changed anything
    assert skip.snapshot() == (3, 2, 3, 3)


def test_budget_exceeded_on_cycle():
    with pytest.raises(BudgetExceeded):
        run_sequential(build_root_of(0), Cells([1, 0]), budget=10)


def test_native_rejects_two_cleaners():
    with pytest.raises(ValueError):
        run_native([[build_clean_up(0)], [build_clean_up(1)]], SharedForest(2))


@st.composite
def op_scripts(draw):
    n = draw(st.integers(1, 8))
    el = st.integers(0, n - 1)
    op = st.one_of(
        st.builds(build_equate, el, el),
        st.builds(build_test, el, el),
        st.builds(build_clean_up, el),
        st.builds(build_root_of, el),
    )
    return n, draw(st.lists(op, max_size=25))


@given(op_scripts())
def test_sequential_ops_match_abstract(script):
    n, ops = script
    mem = Cells(range(n))
    eq = EquivRelation.identity(n)
    for p in ops:
        before = fo.Forest.of(mem.snapshot())
        result, _ = run_sequential(p, mem, budget=16 * n + 16)
        f = fo.Forest.of(mem.snapshot())
        assert fo.is_partial_order(f)
        if p.kind.value == "equate":
            eq = equate_abstract(eq, p.x, p.y)
        elif p.kind.value == "test":
            assert result == ((p.x, p.y) in eq)
        elif p.kind.value == "root_of":
            assert result == fo.root_elem(f, p.x)
        if p.kind.value != "equate":
            assert f.parent == before.parent or p.kind.value == "clean_up"
        assert fo.retr_pairs(f) == eq.pairs


def test_native_single_thread_matches_sequential():
    rng = random.Random(3)
    n = 10
    script = [build_equate(rng.randrange(n), rng.randrange(n)) if rng.random() < 0.5
              else build_test(rng.randrange(n), rng.randrange(n)) for _ in range(300)]
    res = run_native([script], SharedForest(n))
    mem = Cells(range(n))
    expect = [run_sequential(p, mem)[0] for p in script]
    assert res.results[0] == expect and res.forest.parent == mem.snapshot()


def test_native_concurrent_final_state():
    rng = random.Random(11)
    n = 16
    scripts = [[build_equate(rng.randrange(n), rng.randrange(n)) for _ in range(400)] for _ in range(4)]
    scripts[0] += [build_clean_up(k) for k in range(n)]
    sf = SharedForest(n)
    res = run_native(scripts, sf)
    assert fo.is_partial_order(res.forest)
    links = [note for _, note in sorted(res.link_log)]
    closure = refl_trans_closure(Relation.of(n, {(a, b) for a, b in links} | {(b, a) for a, b in links}))
    assert fo.retr_pairs(res.forest) == closure.pairs
    # every equate's arguments end up related
    for s in scripts:
        for p in s:
            if p.kind.value == "equate":
                assert (p.x, p.y) in closure.pairs
