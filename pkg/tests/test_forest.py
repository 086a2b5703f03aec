from itertools import product

import pytest
from hypothesis import given, strategies as st

from rgforest.forest import (
    FOREST_COUNTS, CycleError, Forest, coupling_invariant_holds, distance, enumerate_forests,
    eq_f, is_partial_order, le_f, le_relation, retr, roots_set, root_elem,
)
from rgforest.relation_core import DomainError, EquivRelation, is_equivalence, is_reflexive, is_transitive


def reach(parent, n, m):
    """Reference reachability by explicit visited-set walk."""
    seen, cur = set(), n
    while cur not in seen:
        if cur == m:
            return True
        seen.add(cur)
        cur = parent[cur]
    return False


@st.composite
def parent_maps(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    return tuple(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))


@st.composite
def valid_forests(draw, max_n=8):
    # attach each element below a higher-ranked one in a random order
    n = draw(st.integers(1, max_n))
    order = draw(st.permutations(range(n)))
    parent = list(range(n))
    for i, k in enumerate(order):
        if i and draw(st.booleans()):
            parent[k] = order[draw(st.integers(0, i - 1))]
    return Forest.of(parent)


def test_small_examples():
    f = Forest.of([1, 2, 2])
    ident = Forest.identity(3)
    assert le_f(f, 0, 2) and not le_f(f, 2, 0)
    assert all(le_f(ident, a, b) == (a == b) for a in range(3) for b in range(3))
    assert eq_f(f, 0, 1) and not eq_f(ident, 0, 1) and eq_f(ident, 2, 2)
    assert roots_set(ident) == {0, 1, 2}
    assert roots_set(f) == {2}
    assert roots_set(Forest.of([0, 0, 2, 2])) == {0, 2}
    assert root_elem(f, 0) == 2 and root_elem(ident, 1) == 1
    with pytest.raises(CycleError):
        root_elem(Forest.of([1, 0, 2]), 0)
    assert len(retr(f)) == 9
    assert retr(ident) == EquivRelation.identity(3)
    assert retr(Forest.of([0, 0, 2, 2])).classes() == [frozenset({0, 1}), frozenset({2, 3})]
    assert distance(f, 0, 2) == 2 and distance(f, 1, 2) == 1 and distance(f, 1, 1) == 0
    with pytest.raises(DomainError):
        distance(f, 2, 0)
    assert is_partial_order(ident) and not is_partial_order(Forest.of([1, 0]))
    assert coupling_invariant_holds(EquivRelation.identity(3), ident)
    assert not coupling_invariant_holds(EquivRelation.identity(3), Forest.of([1, 1, 2]))


def test_retr_rejects_cycle():
    with pytest.raises(CycleError):
        retr(Forest.of([1, 0]))


def test_enumeration_counts_match_brute_force():
    for n in range(1, 6):
        brute = sum(
            all(not (a != b and reach(p, a, b) and reach(p, b, a)) for a in range(n) for b in range(n))
            for p in product(range(n), repeat=n)
        )
        assert brute == FOREST_COUNTS[n]
        # rooted labelled forests on n nodes: (n + 1) ** (n - 1)
        assert FOREST_COUNTS[n] == (n + 1) ** (n - 1)
        assert sum(1 for _ in enumerate_forests(n)) == brute
    assert [f.parent for f in enumerate_forests(2)] == [(0, 0), (0, 1), (1, 1)]


def test_enumeration_limits():
    with pytest.raises(DomainError):
        list(enumerate_forests(7))
    with pytest.raises(DomainError):
        list(enumerate_forests(0))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_root_properties_hold_on_every_forest(n):
    for f in enumerate_forests(n):
        roots = [root_elem(f, k) for k in range(n)]
        for a in range(n):
            for b in range(n):
                assert (roots[a] == roots[b]) == eq_f(f, a, b)
                if le_f(f, a, roots[b]):
                    assert eq_f(f, a, b)
        assert coupling_invariant_holds(retr(f), f)


@given(parent_maps())
def test_le_f_matches_reference_walk(parent):
    f = Forest.of(parent)
    n = len(parent)
    for a in range(n):
        for b in range(n):
            assert le_f(f, a, b) == reach(parent, a, b)


@given(parent_maps())
def test_le_f_preorder_and_antisymmetry(parent):
    f = Forest.of(parent)
    le = le_relation(f)
    assert is_reflexive(le) and is_transitive(le)
    antisym = all(a == b or not (le_f(f, a, b) and le_f(f, b, a)) for a in f.domain for b in f.domain)
    assert antisym == is_partial_order(f)


@given(valid_forests())
def test_valid_forest_facts(f):
    assert is_partial_order(f)
    eq = retr(f)
    assert is_equivalence(eq)
    assert coupling_invariant_holds(eq, f)
    for k in f.domain:
        r = root_elem(f, k)
        assert r in roots_set(f) and le_f(f, k, r)
        assert distance(f, k, r) == sum(1 for _ in _path(f, k)) - 1


def _path(f, k):
    yield k
    while f[k] != k:
        k = f[k]
        yield k
