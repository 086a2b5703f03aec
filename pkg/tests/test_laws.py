import pytest
from hypothesis import given, settings, strategies as st

from rgforest.trace_algebra.laws import (
    LAW_IDS, NEGATIVE_LAWS, SAFETY_PROJECTION, Instance, UnknownLaw, check_law, random_instance, run_law,
    LawSummary,
)
from rgforest.trace_algebra.model import StateSpace, Trace

CATALOG = (
    "cgd-ref pre-ref cpstep-ref cestep-ref test-conj-pull inv-introduce inv-maintains "
    "inv-distrib-Nondet inv-distrib-nondet inv-distrib-seq inv-distrib-par inv-distrib-conj "
    "inv-distrib-finite-iter inv-distrib-iter inv-test inv-assert inv-cpstep inv-cestep "
    "reify-Nondet reify-nondet reify-seq reify-par reify-conj reify-finite-iter reify-iter "
    "reify-test reify-cpstep reify-cestep reify-assert reify-guar reify-rely reify-frame reify-opt "
    "reify-spec reify-rgspec reify-expr reify-conditional reify-while single-reference"
).split()

SP4 = StateSpace()


def test_catalog_is_complete():
    assert sorted(LAW_IDS) == sorted(CATALOG) and len(LAW_IDS) == 39
    assert {"reify-test", "reify-guar", "reify-spec"} <= set(NEGATIVE_LAWS)
    assert set(SAFETY_PROJECTION) <= set(LAW_IDS)


def test_unknown_law():
    with pytest.raises(UnknownLaw):
        random_instance("no-such-law", 0)
    with pytest.raises(UnknownLaw):
        check_law("no-such-law", {})


def test_instances_are_deterministic():
    assert random_instance("reify-test", 0) == random_instance("reify-test", 0)
    assert random_instance("reify-test", 0) != random_instance("reify-test", 1)


def test_reify_test_instances_are_varied():
    distinct = {random_instance("reify-test", s) for s in range(100)}
    assert len(distinct) >= 90
    for inst in distinct:
        p = inst.as_dict()
        assert p["p1"] >= p["I"] & p["p2"]


def test_hand_built_instances():
    r2 = frozenset({(0, 1)})
    assert check_law("cpstep-ref", {"r1": r2 | {(1, 2)}, "r2": r2}).holds
    # inv-test with I = {0,1}, p = {1,2}
    assert check_law("inv-test", {"I": frozenset({0, 1}), "p": frozenset({1, 2})}).holds


def test_reify_guar_side_condition_violation_is_refuted():
    # g1 lacks the pair (0, 1) that g2 allows inside the invariant
    inv = frozenset({0, 1})
    res = check_law("reify-guar", {"I": inv, "g1": frozenset({(0, 0)}), "g2": frozenset({(0, 1)})})
    assert not res.side_condition and not res.holds
    assert isinstance(res.counterexample, Trace) and res.counterexample.states[:2] == (0, 1)


@pytest.mark.parametrize("law", NEGATIVE_LAWS)
def test_negative_generators_break_the_side_condition(law):
    found = False
    for seed in range(25):
        inst = random_instance(law, seed, negative=True)
        res = check_law(law, inst)
        assert not res.side_condition
        found = found or not res.holds
    assert found


@pytest.mark.parametrize("law", CATALOG)
def test_law_holds_on_sampled_instances(law):
    summary = run_law(law, samples=8, seed=1)
    assert summary.failed == 0, summary.failures[:1]
    assert summary.passed + summary.skipped == 8
    assert summary.passed >= 1


@settings(max_examples=20)
@given(st.sampled_from(CATALOG), st.integers(0, 10 ** 6))
def test_law_holds_on_any_seed(law, seed):
    inst = random_instance(law, seed)
    res = check_law(law, inst)
    assert res.holds or not res.side_condition


def test_smaller_space_and_bound():
    sp = StateSpace.from_size(2)
    for law in ("inv-distrib-seq", "reify-seq", "single-reference"):
        assert run_law(law, 5, 0, sp, bound=2).failed == 0


def test_summary_merge_and_json():
    a = LawSummary("reify-test", passed=3, negative_found=False, negative_tries=2)
    b = LawSummary("reify-test", passed=2, failed=1, failures=[(7, None)], negative_found=True, negative_tries=1)
    m = a.merge(b)
    assert (m.passed, m.failed, m.negative_found, m.negative_tries) == (5, 1, True, 3)
    doc = m.to_json()
    assert doc["failures"] == [{"seed": 7, "counterexample": None}]
    assert doc["negative"]["counterexampleFound"] is True


def test_instance_roundtrip():
    inst = random_instance("reify-guar", 3)
    assert isinstance(inst, Instance)
    assert Instance(inst.law, tuple(sorted(inst.as_dict().items()))) == inst
