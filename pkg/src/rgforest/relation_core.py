"""Finite binary relations over a fixed element domain.

Relations are immutable pair sets.  Closures are computed by plain
saturation so that this module can serve as the trusted oracle for the
forest implementation; nothing here is clever.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

MAX_DOMAIN = 64

Pair = tuple[int, int]


class DomainError(ValueError):
    """An element or domain size outside the permitted range."""


@dataclass(frozen=True)
class ElementDomain:
    n: int
    limit: int = field(default=MAX_DOMAIN, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"domain size must be a positive integer, got {self.n!r}")
        if self.n > self.limit:
            raise DomainError(f"domain size {self.n} exceeds limit {self.limit}")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.n))

    def __len__(self) -> int:
        return self.n

    def __contains__(self, k) -> bool:
        return isinstance(k, int) and 0 <= k < self.n

    def check(self, *elems: int) -> None:
        for k in elems:
            if k not in self:
                raise DomainError(f"element {k!r} not in domain 0..{self.n - 1}")


def _as_domain(domain: ElementDomain | int) -> ElementDomain:
    return domain if isinstance(domain, ElementDomain) else ElementDomain(domain)


@dataclass(frozen=True)
class Relation:
    domain: ElementDomain
    pairs: frozenset[Pair]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for a, b in self.pairs:
            self.domain.check(a, b)

    @classmethod
    def of(cls, domain: ElementDomain | int, pairs: Iterable[Pair] = ()) -> "Relation":
        return cls(_as_domain(domain), frozenset(pairs))

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __le__(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.domain, self.pairs | other.pairs)

    def rows(self) -> list[int]:
        """Successor sets as bitmasks, one per element."""
        rows = [0] * self.domain.n
        for a, b in self.pairs:
            rows[a] |= 1 << b
        return rows


def identity_pairs(domain: ElementDomain) -> frozenset[Pair]:
    return frozenset((k, k) for k in domain)


def is_reflexive(r: Relation) -> bool:
    return identity_pairs(r.domain) <= r.pairs


def is_symmetric(r: Relation) -> bool:
    return all((b, a) in r.pairs for a, b in r.pairs)


def is_transitive(r: Relation) -> bool:
    succ: dict[int, set[int]] = {}
    for a, b in r.pairs:
        succ.setdefault(a, set()).add(b)
    return all((a, c) in r.pairs for a, b in r.pairs for c in succ.get(b, ()))


def is_equivalence(r: Relation) -> bool:
    return is_reflexive(r) and is_symmetric(r) and is_transitive(r)


def refl_trans_closure(r: Relation) -> Relation:
    """Least reflexive, transitive relation containing ``r``.

    Saturates successor rows until no row changes: whenever ``a -> b``,
    everything reachable from ``b`` is added to ``a``.
    """
    n = r.domain.n
    rows = r.rows()
    for k in range(n):
        rows[k] |= 1 << k
    changed = True
    while changed:
        changed = False
        for a in range(n):
            acc = rows[a]
            m = acc
            while m:
                low = m & -m
                acc |= rows[low.bit_length() - 1]
                m ^= low
            if acc != rows[a]:
                rows[a] = acc
                changed = True
    return Relation(r.domain, _pairs_from_rows(rows))


def _pairs_from_rows(rows: list[int]) -> frozenset[Pair]:
    out = []
    for a, row in enumerate(rows):
        m = row
        while m:
            low = m & -m
            out.append((a, low.bit_length() - 1))
            m ^= low
    return frozenset(out)


class EquivRelation(Relation):
    """A relation that is reflexive, symmetric and transitive on its domain.

    Construction validates the three properties.  ``classes()`` gives the
    partition view; ``from_classes`` builds from one.
    """

    def __post_init__(self):
        super().__post_init__()
        if not is_equivalence(Relation(self.domain, self.pairs)):
            raise ValueError("pairs do not form an equivalence relation")

    @classmethod
    def identity(cls, domain: ElementDomain | int) -> "EquivRelation":
        d = _as_domain(domain)
        return cls(d, identity_pairs(d))

    @classmethod
    def from_relation(cls, r: Relation) -> "EquivRelation":
        return cls(r.domain, r.pairs)

    @classmethod
    def from_classes(cls, domain: ElementDomain | int, classes: Iterable[Iterable[int]]) -> "EquivRelation":
        d = _as_domain(domain)
        pairs = set(identity_pairs(d))
        seen: set[int] = set()
        for block in classes:
            block = list(block)
            d.check(*block)
            if seen.intersection(block):
                raise ValueError("classes overlap")
            seen.update(block)
            pairs.update((a, b) for a in block for b in block)
        return cls(d, frozenset(pairs))

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "EquivRelation":
        """Build from a class-id per element (``labels[k]`` is k's class)."""
        labels = list(labels)
        groups: dict[int, list[int]] = {}
        for k, lab in enumerate(labels):
            groups.setdefault(lab, []).append(k)
        return cls.from_classes(len(labels), groups.values())

    def classes(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for k in self.domain:
            if k in seen:
                continue
            block = frozenset(b for (a, b) in self.pairs if a == k)
            seen |= block
            out.append(block)
        return out

    def labels(self) -> tuple[int, ...]:
        """Class id per element: the smallest member of its class."""
        lab = [0] * self.domain.n
        for block in self.classes():
            lo = min(block)
            for k in block:
                lab[k] = lo
        return tuple(lab)


def complement(r: Relation) -> Relation:
    dom = r.domain
    return Relation(dom, frozenset((a, b) for a in dom for b in dom) - r.pairs)


def prer(p: Iterable[int], domain: ElementDomain | int) -> Relation:
    """Pairs whose first component lies in ``p``."""
    d = _as_domain(domain)
    p = frozenset(p)
    d.check(*p)
    return Relation(d, frozenset((a, b) for a in p for b in d))


def postr(p: Iterable[int], domain: ElementDomain | int) -> Relation:
    """Pairs whose second component lies in ``p``."""
    d = _as_domain(domain)
    p = frozenset(p)
    d.check(*p)
    return Relation(d, frozenset((a, b) for a in d for b in p))


def rel_implies(r1: Relation, r2: Relation) -> Relation:
    """Pairs outside ``r1`` or inside ``r2``."""
    return complement(r1) | r2


def equate_abstract(eq: EquivRelation, x: int, y: int) -> EquivRelation:
    eq.domain.check(x, y)
    grown = Relation(eq.domain, eq.pairs | {(x, y), (y, x)})
    return EquivRelation.from_relation(refl_trans_closure(grown))


def test_abstract(eq: EquivRelation, x: int, y: int) -> bool:
    eq.domain.check(x, y)
    return (x, y) in eq.pairs


# keep pytest from collecting the operation above as a test function
test_abstract.__test__ = False
