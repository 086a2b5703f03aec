"""Sequential Galler-Fischer forest: a parent map whose trees are the
equivalence classes.

Every function is pure and total on arbitrary parent maps (including ones
with non-trivial cycles), so the same code serves the implementation and
the checkers that watch it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .relation_core import DomainError, ElementDomain, EquivRelation, Relation

MAX_ENUMERATE = 6

# Number of acyclic parent maps over 0..n-1, found by filtering all n**n maps.
FOREST_COUNTS = {1: 1, 2: 3, 3: 16, 4: 125, 5: 1296, 6: 16807}


class CycleError(RuntimeError):
    """Following parents from an element never reached a self-loop."""


@dataclass(frozen=True)
class Forest:
    domain: ElementDomain
    parent: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(self.parent))
        if len(self.parent) != self.domain.n:
            raise DomainError(f"parent map has {len(self.parent)} entries for domain of {self.domain.n}")
        self.domain.check(*self.parent)

    @classmethod
    def of(cls, parent: Sequence[int]) -> "Forest":
        return cls(ElementDomain(len(parent)), tuple(parent))

    @classmethod
    def identity(cls, n: int) -> "Forest":
        return cls(ElementDomain(n), tuple(range(n)))

    @property
    def n(self) -> int:
        return self.domain.n

    def __getitem__(self, k: int) -> int:
        return self.parent[k]

    def with_parent(self, k: int, v: int) -> "Forest":
        p = list(self.parent)
        p[k] = v
        return Forest(self.domain, tuple(p))


@lru_cache(maxsize=1 << 16)
def _ancestor_masks(parent: tuple[int, ...]) -> tuple[int, ...]:
    # bounded walk: at most n parent steps visit every reachable element
    n = len(parent)
    out = []
    for k in range(n):
        mask = 1 << k
        cur = k
        for _ in range(n):
            cur = parent[cur]
            mask |= 1 << cur
        out.append(mask)
    return tuple(out)


def ancestor_masks(f: Forest) -> tuple[int, ...]:
    """Bitmask of ``{m | n <=_f m}`` for each element n."""
    return _ancestor_masks(f.parent)


def le_f(f: Forest, n: int, m: int) -> bool:
    """True iff m is reachable from n by zero or more parent steps."""
    f.domain.check(n, m)
    return bool(_ancestor_masks(f.parent)[n] >> m & 1)


def eq_f(f: Forest, n: int, m: int) -> bool:
    f.domain.check(n, m)
    anc = _ancestor_masks(f.parent)
    return bool(anc[n] & anc[m])


def roots_set(f: Forest) -> frozenset[int]:
    return frozenset(k for k, p in enumerate(f.parent) if p == k)


def root_elem(f: Forest, n: int) -> int:
    f.domain.check(n)
    cur = n
    for _ in range(f.n):
        nxt = f.parent[cur]
        if nxt == cur:
            return cur
        cur = nxt
    if f.parent[cur] == cur:
        return cur
    raise CycleError(f"no root above element {n} in parent map {list(f.parent)}")


def distance(f: Forest, x: int, y: int) -> int:
    """Number of parent arcs on the path from x up to its ancestor y."""
    f.domain.check(x, y)
    cur, d = x, 0
    for _ in range(f.n + 1):
        if cur == y:
            return d
        nxt = f.parent[cur]
        if nxt == cur:
            break
        cur, d = nxt, d + 1
    raise DomainError(f"{y} is not an ancestor of {x}")


@lru_cache(maxsize=1 << 16)
def _is_partial_order(parent: tuple[int, ...]) -> bool:
    anc = _ancestor_masks(parent)
    # antisymmetry: m in anc[n] and n in anc[m] forces n == m
    for n_, mask in enumerate(anc):
        m = mask & ~(1 << n_)
        while m:
            low = m & -m
            if anc[low.bit_length() - 1] >> n_ & 1:
                return False
            m ^= low
    return True


def is_partial_order(f: Forest) -> bool:
    return _is_partial_order(f.parent)


@lru_cache(maxsize=1 << 16)
def _retr_pairs(parent: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    anc = _ancestor_masks(parent)
    n = len(parent)
    return frozenset((a, b) for a in range(n) for b in range(n) if anc[a] & anc[b])


def retr(f: Forest) -> EquivRelation:
    """The equivalence relation a valid forest represents."""
    if not is_partial_order(f):
        # surfaces the offending element through root_elem's diagnosis
        for k in f.domain:
            root_elem(f, k)
        raise CycleError(f"parent map {list(f.parent)} has a non-trivial cycle")
    return EquivRelation(f.domain, _retr_pairs(f.parent))


def retr_pairs(f: Forest) -> frozenset[tuple[int, int]]:
    """Pairs related by eq_f; defined even on cyclic maps."""
    return _retr_pairs(f.parent)


def le_relation(f: Forest) -> Relation:
    anc = _ancestor_masks(f.parent)
    return Relation(f.domain, frozenset((a, b) for a in f.domain for b in f.domain if anc[a] >> b & 1))


def coupling_invariant_holds(eq: Relation, f: Forest) -> bool:
    if eq.domain.n != f.domain.n:
        return False
    return is_partial_order(f) and eq.pairs == _retr_pairs(f.parent)


def enumerate_forests(n: int) -> Iterator[Forest]:
    """Every acyclic parent map over 0..n-1, in lexicographic order."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"need a positive element count, got {n!r}")
    if n > MAX_ENUMERATE:
        raise DomainError(f"enumeration limited to n <= {MAX_ENUMERATE}")
    dom = ElementDomain(n)
    for parent in product(range(n), repeat=n):
        if _is_partial_order(parent):
            yield Forest(dom, parent)
