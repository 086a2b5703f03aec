"""Bounded Aczel-trace semantics for a small wide-spectrum language.

A trace is a run ``(s0, l1, s1, ..., lk, sk)`` of states interleaved with
step labels (``PI`` for a program step, ``EPS`` for an environment step)
together with a status: terminated, pending or aborted.  Runs longer than
the bound are cut off.

Trace sets are kept in a canonical symbolic form (:class:`TraceSet`):

* ``aborts`` holds the minimal aborted runs; an aborted run stands for
  every extension of it, with every status;
* ``done`` holds terminated and pending traces not already implied by an
  abort;
* every prefix of a trace, the trace's own run included, is present as
  pending; zero-step pending traces belong to every command and are left
  implicit.

Two commands denote the same behaviour at a bound iff their canonical
forms are equal, so equality and inclusion are plain set operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

from ..relation_core import ElementDomain, postr as _postr, prer as _prer, rel_implies, Relation

PI, EPS = 0, 1
TERM, PEND, ABORT = "T", "P", "A"

MAX_STATES = 16
MAX_BOUND = 6

Run = tuple
Pred = frozenset
Rel = frozenset


class ModelError(ValueError):
    """State space or bound outside the supported range."""


# ---------------------------------------------------------------------------
# State spaces
# ---------------------------------------------------------------------------

_VAR_NAMES = ("x", "y", "z", "w")


@dataclass(frozen=True)
class StateSpace:
    """Named variables with small value domains; states are mixed-radix ints."""

    variables: tuple[tuple[str, int], ...] = (("x", 2), ("y", 2))

    def __post_init__(self):
        names = [v for v, _ in self.variables]
        if not names or len(set(names)) != len(names):
            raise ModelError("variables must be nonempty and distinct")
        if any(size < 1 for _, size in self.variables):
            raise ModelError("every variable needs at least one value")
        if self.size > MAX_STATES:
            raise ModelError(f"{self.size} states exceeds the limit of {MAX_STATES}")

    @classmethod
    def from_size(cls, n: int) -> "StateSpace":
        """Boolean variables when ``n`` is a power of two, else one n-valued variable."""
        if not isinstance(n, int) or n < 1 or n > MAX_STATES:
            raise ModelError(f"state count must lie in 1..{MAX_STATES}, got {n!r}")
        k = n.bit_length() - 1
        if n == 1 << k and k >= 1:
            return cls(tuple((_VAR_NAMES[i], 2) for i in range(k)))
        return cls((("x", n),))

    @property
    def size(self) -> int:
        return math.prod(s for _, s in self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.variables)

    @property
    def states(self) -> range:
        return range(self.size)

    def domain_of(self, var: str) -> int:
        return dict(self.variables)[var]

    def value(self, state: int, var: str) -> int:
        for name, size in reversed(self.variables):
            if name == var:
                return state % size
            state //= size
        raise KeyError(var)

    def valuation(self, state: int) -> dict[str, int]:
        return {v: self.value(state, v) for v in self.names}

    def encode(self, vals: dict[str, int]) -> int:
        s = 0
        for name, size in self.variables:
            s = s * size + vals[name]
        return s

    def update(self, state: int, var: str, k: int) -> int:
        vals = self.valuation(state)
        vals[var] = k
        return self.encode(vals)

    # predicates and relations over the space

    @property
    def everything(self) -> Pred:
        return frozenset(self.states)

    @property
    def univ(self) -> Rel:
        return frozenset(product(self.states, repeat=2))

    @property
    def identity(self) -> Rel:
        return frozenset((s, s) for s in self.states)

    def id_on(self, variables: Iterable[str]) -> Rel:
        """Pairs agreeing on every variable in ``variables``."""
        vs = tuple(variables)
        return frozenset((a, b) for a, b in self.univ if all(self.value(a, v) == self.value(b, v) for v in vs))

    def complement(self, p: Pred) -> Pred:
        return self.everything - p

    def rel_complement(self, r: Rel) -> Rel:
        return self.univ - r

    def _dom(self) -> ElementDomain:
        return ElementDomain(self.size)

    def prer(self, p: Pred) -> Rel:
        return _prer(p, self._dom()).pairs

    def postr(self, p: Pred) -> Rel:
        return _postr(p, self._dom()).pairs

    def implies(self, r1: Rel, r2: Rel) -> Rel:
        d = self._dom()
        return rel_implies(Relation(d, r1), Relation(d, r2)).pairs

    def maintains(self, inv: Pred) -> Rel:
        """Steps that keep ``inv`` whenever they start in it."""
        return self.implies(self.prer(inv), self.postr(inv))

    def check_pred(self, p: Pred) -> None:
        if not p <= self.everything:
            raise ModelError(f"predicate mentions states outside 0..{self.size - 1}")

    def check_rel(self, r: Rel) -> None:
        if any(a not in self.states or b not in self.states for a, b in r):
            raise ModelError(f"relation mentions states outside 0..{self.size - 1}")


def _check_bound(bound: int) -> None:
    if not isinstance(bound, int) or bound < 0 or bound > MAX_BOUND:
        raise ModelError(f"bound must lie in 0..{MAX_BOUND}, got {bound!r}")


# ---------------------------------------------------------------------------
# Traces and canonical trace sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Trace:
    states: tuple[int, ...]
    labels: tuple[int, ...]
    status: str

    def __post_init__(self):
        if len(self.labels) != len(self.states) - 1 or not self.states:
            raise ValueError("a trace needs one label per adjacent state pair")
        if self.status not in (TERM, PEND, ABORT):
            raise ValueError(f"unknown status {self.status!r}")

    @classmethod
    def of(cls, run: Run, status: str) -> "Trace":
        return cls(tuple(run[0::2]), tuple(run[1::2]), status)

    @property
    def run(self) -> Run:
        out = [self.states[0]]
        for lab, s in zip(self.labels, self.states[1:]):
            out += [lab, s]
        return tuple(out)

    def __len__(self) -> int:
        return len(self.labels)

    def describe(self, space: StateSpace | None = None) -> str:
        def st(s):
            if space is None:
                return str(s)
            return "{" + ",".join(f"{k}={v}" for k, v in space.valuation(s).items()) + "}"
        parts = [st(self.states[0])]
        for lab, s in zip(self.labels, self.states[1:]):
            parts.append("-pi->" if lab == PI else "-eps->")
            parts.append(st(s))
        return " ".join(parts) + f" [{ {TERM: 'terminated', PEND: 'pending', ABORT: 'aborted'}[self.status]}]"

    def to_json(self) -> dict:
        return {"states": list(self.states),
                "labels": ["pi" if x == PI else "eps" for x in self.labels],
                "status": self.status}


def _steps(run: Run) -> int:
    return len(run) // 2


def _covered(run: Run, aborts) -> bool:
    """Does some prefix of ``run`` (itself included) abort?"""
    if not aborts:
        return False
    for k in range(1, len(run) + 1, 2):
        if run[:k] in aborts:
            return True
    return False


@dataclass(frozen=True)
class TraceSet:
    done: frozenset  # (run, status) with status TERM or PEND
    aborts: frozenset  # minimal aborted runs
    bound: int = field(compare=True)

    @classmethod
    def build(cls, done: Iterable, aborts: Iterable, bound: int) -> "TraceSet":
        lim = 2 * bound + 1
        amin: set = set()
        for a in sorted((a for a in aborts if len(a) <= lim), key=len):
            if not _covered(a, amin):
                amin.add(a)
        out: set = set()
        for run, st in done:
            if len(run) > lim or len(run) == 1 and st == PEND:
                continue
            if amin and _covered(run, amin):
                continue
            out.add((run, st))
            if st == TERM and len(run) > 1:
                out.add((run, PEND))
        # prefix closure, longest prefix first so that a hit ends the walk
        for run in [r for r, _ in out if len(r) > 1] + [a for a in amin if len(a) > 1]:
            for k in range(len(run) - 2, 2, -2):
                key = (run[:k], PEND)
                if key in out:
                    break
                out.add(key)
        return cls(frozenset(out), frozenset(amin), bound)

    # views

    def runs(self) -> set:
        """Runs reached without aborting (zero-step runs left implicit)."""
        return {r for r, _ in self.done}

    def __contains__(self, t: Trace) -> bool:
        run = t.run
        if _covered(run, self.aborts):
            return True
        if t.status == PEND and len(run) == 1:
            return True
        return t.status != ABORT and (run, t.status) in self.done

    def __le__(self, other: "TraceSet") -> bool:
        return self.counterexample_against(other) is None

    def counterexample_against(self, other: "TraceSet") -> Trace | None:
        """Shortest trace of ``self`` missing from ``other`` (None if included)."""
        best = None
        for a in self.aborts:
            if not _covered(a, other.aborts):
                cand = (_steps(a), a, ABORT)
                best = cand if best is None or cand < best else best
        for run, st in self.done:
            if (run, st) not in other.done and not _covered(run, other.aborts):
                cand = (_steps(run), run, st)
                best = cand if best is None or cand < best else best
        return None if best is None else Trace.of(best[1], best[2])

    def traces(self, space: StateSpace) -> set[Trace]:
        """Explicit expansion, aborts closed under extension.  Small inputs only."""
        out = {Trace.of(r, s) for r, s in self.done}
        out |= {Trace((s,), (), PEND) for s in space.states}
        for a in self.aborts:
            for ext in _extensions(a, space, self.bound):
                for st in (TERM, PEND, ABORT):
                    out.add(Trace.of(ext, st))
        return out

    def __len__(self) -> int:
        return len(self.done) + len(self.aborts)


def _extensions(run: Run, space: StateSpace, bound: int) -> Iterator[Run]:
    yield run
    if _steps(run) >= bound:
        return
    for lab in (PI, EPS):
        for s in space.states:
            yield from _extensions(run + (lab, s), space, bound)


def all_runs(space: StateSpace, bound: int) -> Iterator[Run]:
    for s in space.states:
        yield from _extensions((s,), space, bound)


# ---------------------------------------------------------------------------
# Trace-set operators
# ---------------------------------------------------------------------------

def _empty(bound):
    return TraceSet(frozenset(), frozenset(), bound)


def ts_abort(space: StateSpace, bound: int) -> TraceSet:
    return TraceSet.build((), ((s,) for s in space.states), bound)


def ts_test(p: Pred, bound: int) -> TraceSet:
    return TraceSet.build((((s,), TERM) for s in p), (), bound)


def ts_step(r: Rel, label: int, bound: int) -> TraceSet:
    if bound == 0:
        return _empty(bound)
    return TraceSet.build((((a, label, b), TERM) for a, b in r), (), bound)


def ts_union(sets: Iterable[TraceSet], bound: int) -> TraceSet:
    done, aborts = set(), set()
    for t in sets:
        done |= t.done
        aborts |= t.aborts
    return TraceSet.build(done, aborts, bound)


def ts_seq(c: TraceSet, d: TraceSet, bound: int) -> TraceSet:
    by_start: dict = {}
    for run, st in d.done:
        by_start.setdefault(run[0], []).append((run, st))
    ab_start: dict = {}
    for a in d.aborts:
        ab_start.setdefault(a[0], []).append(a)
    done = {(r, s) for r, s in c.done if s == PEND}
    aborts = set(c.aborts)
    for run, st in c.done:
        if st != TERM:
            continue
        room = bound - _steps(run)
        last = run[-1]
        for r2, s2 in by_start.get(last, ()):
            if _steps(r2) <= room:
                done.add((run + r2[1:], s2))
        for a2 in ab_start.get(last, ()):
            if _steps(a2) <= room:
                aborts.add(run + a2[1:])
    return TraceSet.build(done, aborts, bound)


def ts_conj(c: TraceSet, d: TraceSet, bound: int) -> TraceSet:
    aborts = {a for a in c.aborts if _covered(a, d.aborts)}
    aborts |= {a for a in d.aborts if _covered(a, c.aborts)}
    done = set(c.done & d.done)
    if d.aborts:
        done |= {t for t in c.done if _covered(t[0], d.aborts)}
    if c.aborts:
        done |= {t for t in d.done if _covered(t[0], c.aborts)}
    return TraceSet.build(done, aborts, bound)


def ts_weak_conj(c: TraceSet, d: TraceSet, bound: int) -> TraceSet:
    base = ts_conj(c, d, bound)
    extra = set(base.aborts)
    for mine, theirs in ((c, d), (d, c)):
        if not mine.aborts:
            continue
        reach = theirs.runs()
        for a in mine.aborts:
            # an abort wins as soon as the other side can get that far
            if len(a) == 1 or a in reach or _covered(a, theirs.aborts):
                extra.add(a)
    if extra == set(base.aborts):
        return base
    return TraceSet.build(base.done, extra, bound)


def _merge_labels(l1: tuple, l2: tuple):
    out = []
    for a, b in zip(l1, l2):
        if a == PI and b == PI:
            return None
        out.append(PI if PI in (a, b) else EPS)
    return tuple(out)


def _par_status(s1: str, s2: str) -> str:
    if ABORT in (s1, s2):
        return ABORT
    if s1 == TERM and s2 == TERM:
        return TERM
    return PEND


def ts_par(c: TraceSet, d: TraceSet, space: StateSpace, bound: int) -> TraceSet:
    """Lockstep merge: a program step of one side meets an environment step
    of the other; a terminated side keeps offering environment steps."""

    def items(t: TraceSet) -> dict:
        by_states: dict = {}
        for run, st in t.done:
            by_states.setdefault(run[0::2], []).append((run[1::2], st))
        for a in t.aborts:
            by_states.setdefault(a[0::2], []).append((a[1::2], ABORT))
        for s in space.states:
            # zero-step pending traces exist for every command
            by_states.setdefault((s,), []).append(((), PEND))
        return by_states

    left, right = items(c), items(d)
    done, aborts = set(), set()

    def emit(states, labels, st):
        run = [states[0]]
        for lab, s in zip(labels, states[1:]):
            run += [lab, s]
        run = tuple(run)
        if st == ABORT:
            aborts.add(run)
        else:
            done.add((run, st))

    for states, ls in left.items():
        rs = right.get(states)
        if not rs:
            continue
        for l1, s1 in ls:
            for l2, s2 in rs:
                m = _merge_labels(l1, l2)
                if m is not None:
                    emit(states, m, _par_status(s1, s2))

    # a terminated side runs alongside longer traces of the other side
    for first, second in ((left, right), (right, left)):
        by_prefix: dict = {}
        for states, ls in second.items():
            for k in range(1, len(states)):
                by_prefix.setdefault(states[:k], []).append((states, ls))
        for states, ls in first.items():
            terms = [lab for lab, st in ls if st == TERM]
            if not terms:
                continue
            for longer, ls2 in by_prefix.get(states, ()):
                cut = len(states) - 1
                for l1 in terms:
                    for l2, s2 in ls2:
                        m = _merge_labels(l1, l2[:cut])
                        if m is not None:
                            emit(longer, m + l2[cut:], s2)
    return TraceSet.build(done, aborts, bound)


def ts_iterate(c: TraceSet, space: StateSpace, bound: int, greatest: bool) -> TraceSet:
    """Fixed point of ``y = nil or c;y``: least from magic, greatest from abort."""
    nil = ts_test(space.everything, bound)
    y = ts_abort(space, bound) if greatest else _empty(bound)
    while True:
        ny = ts_union((nil, ts_seq(c, y, bound)), bound)
        if ny == y:
            return y
        y = ny


# ---------------------------------------------------------------------------
# Expressions (constants and single-variable reads)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int

    def eval(self, space: StateSpace, s: int) -> int:
        return self.value

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def eval(self, space: StateSpace, s: int) -> int:
        return space.value(s, self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class NotVar:
    """Boolean negation of one variable read."""

    name: str

    def eval(self, space: StateSpace, s: int) -> int:
        return 1 - space.value(s, self.name)

    def __str__(self):
        return f"!{self.name}"


Expr = Const | Var | NotVar


def eval_set(e: Expr, k: int, space: StateSpace) -> Pred:
    """States in which ``e`` evaluates to ``k``."""
    return frozenset(s for s in space.states if e.eval(space, s) == k)


# ---------------------------------------------------------------------------
# Command syntax
# ---------------------------------------------------------------------------

class Command:
    """Base class for command syntax; see :func:`traces_of`."""

    __slots__ = ()


@dataclass(frozen=True)
class Test(Command):
    __test__ = False  # not a pytest class
    p: Pred


@dataclass(frozen=True)
class Pgm(Command):
    r: Rel


@dataclass(frozen=True)
class Env(Command):
    r: Rel


@dataclass(frozen=True)
class Abort(Command):
    pass


@dataclass(frozen=True)
class Nil(Command):
    pass


@dataclass(frozen=True)
class Assert(Command):
    p: Pred


@dataclass(frozen=True)
class Seq(Command):
    c: Command
    d: Command


@dataclass(frozen=True)
class Nondet(Command):
    cs: tuple[Command, ...]

    def __post_init__(self):
        if not self.cs:
            raise ModelError("choice over an empty set is not modelled")
        object.__setattr__(self, "cs", tuple(self.cs))


@dataclass(frozen=True)
class Conj(Command):
    c: Command
    d: Command


@dataclass(frozen=True)
class WeakConj(Command):
    c: Command
    d: Command


@dataclass(frozen=True)
class Par(Command):
    c: Command
    d: Command


@dataclass(frozen=True)
class FinIter(Command):
    c: Command


@dataclass(frozen=True)
class OmIter(Command):
    c: Command


@dataclass(frozen=True)
class Guar(Command):
    g: Rel


@dataclass(frozen=True)
class Demand(Command):
    r: Rel


@dataclass(frozen=True)
class Rely(Command):
    r: Rel


@dataclass(frozen=True)
class Term(Command):
    pass


@dataclass(frozen=True)
class Frame(Command):
    variables: frozenset[str]
    c: Command


@dataclass(frozen=True)
class Idle(Command):
    pass


@dataclass(frozen=True)
class Opt(Command):
    q: Rel


@dataclass(frozen=True)
class AtomicSpec(Command):
    q: Rel


@dataclass(frozen=True)
class Spec(Command):
    q: Rel


@dataclass(frozen=True)
class PreSpec(Command):
    p: Pred
    q: Rel


@dataclass(frozen=True)
class Inv(Command):
    inv: Pred


@dataclass(frozen=True)
class ExprEval(Command):
    e: Expr
    k: int


@dataclass(frozen=True)
class Assign(Command):
    var: str
    e: Expr


@dataclass(frozen=True)
class Cond(Command):
    b: Expr
    c: Command
    d: Command


@dataclass(frozen=True)
class While(Command):
    b: Expr
    c: Command


def cstep(r: Rel) -> Command:
    """A single step, program or environment, within ``r``."""
    return Nondet((Pgm(r), Env(r)))


def nondet(*cs: Command) -> Command:
    return cs[0] if len(cs) == 1 else Nondet(tuple(cs))


def wconj(*cs: Command) -> Command:
    out = cs[0]
    for c in cs[1:]:
        out = WeakConj(out, c)
    return out


def seq(*cs: Command) -> Command:
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = Seq(c, out)
    return out


# ---------------------------------------------------------------------------
# Denotation
# ---------------------------------------------------------------------------

def expand(c: Command, space: StateSpace) -> Command | None:
    """One-level unfolding of a derived command into more primitive syntax.

    Returns None for commands interpreted directly.
    """
    U = space.univ
    match c:
        case Nil():
            return Test(space.everything)
        case Assert(p):
            return nondet(Nil(), Seq(Test(space.complement(p)), Abort()))
        case Guar(g):
            return OmIter(nondet(Pgm(g), Env(U)))
        case Demand(r):
            return OmIter(nondet(Pgm(U), Env(r)))
        case Rely(r):
            return OmIter(nondet(cstep(U), Seq(Env(space.rel_complement(r)), Abort())))
        case Term():
            return Seq(FinIter(cstep(U)), OmIter(Env(U)))
        case Frame(vs, body):
            others = [v for v in space.names if v not in vs]
            return WeakConj(Guar(space.id_on(others)), body)
        case Idle():
            return Frame(frozenset(), Term())
        case Opt(q):
            return nondet(Pgm(q), Test(frozenset(s for s in space.states if (s, s) in q)))
        case AtomicSpec(q):
            return seq(Idle(), Opt(q), Idle())
        case Spec(q):
            return Nondet(tuple(
                seq(Test(frozenset({s0})), Term(), Test(frozenset(s for s in space.states if (s0, s) in q)))
                for s0 in space.states))
        case PreSpec(p, q):
            return Seq(Assert(p), Spec(q))
        case Assign(v, e):
            branches = []
            for k in range(space.domain_of(v)):
                upd = frozenset((s, space.update(s, v, k)) for s in space.states)
                branches.append(seq(ExprEval(e, k), Frame(frozenset({v}), Opt(upd)), Idle()))
            return Nondet(tuple(branches))
        case Cond(b, c1, c2):
            return Seq(nondet(Seq(ExprEval(b, 1), c1), Seq(ExprEval(b, 0), c2)), Idle())
        case While(b, body):
            return Seq(OmIter(Seq(ExprEval(b, 1), body)), ExprEval(b, 0))
    return None


def traces_of(c: Command, space: StateSpace, bound: int) -> TraceSet:
    """Canonical bounded trace set of ``c``."""
    _check_bound(bound)
    return _denote(c, space, bound)


@lru_cache(maxsize=1 << 15)
def _denote(c: Command, space: StateSpace, bound: int) -> TraceSet:
    match c:
        case Test(p):
            space.check_pred(p)
            return ts_test(p, bound)
        case Pgm(r):
            space.check_rel(r)
            return ts_step(r, PI, bound)
        case Env(r):
            space.check_rel(r)
            return ts_step(r, EPS, bound)
        case Abort():
            return ts_abort(space, bound)
        case Seq(c1, c2):
            return ts_seq(_denote(c1, space, bound), _denote(c2, space, bound), bound)
        case Nondet(cs):
            return ts_union((_denote(x, space, bound) for x in cs), bound)
        case Conj(c1, c2):
            return ts_conj(_denote(c1, space, bound), _denote(c2, space, bound), bound)
        case WeakConj(c1, c2):
            return ts_weak_conj(_denote(c1, space, bound), _denote(c2, space, bound), bound)
        case Par(c1, c2):
            return ts_par(_denote(c1, space, bound), _denote(c2, space, bound), space, bound)
        case FinIter(body):
            return ts_iterate(_denote(body, space, bound), space, bound, greatest=False)
        case OmIter(body):
            return ts_iterate(_denote(body, space, bound), space, bound, greatest=True)
        case Inv(p):
            space.check_pred(p)
            return _inv_direct(p, space, bound)
        case ExprEval(e, k):
            return _expr_direct(e, k, space, bound)
    unfolded = expand(c, space)
    if unfolded is None:
        raise ModelError(f"no semantics for {type(c).__name__}")
    return _denote(unfolded, space, bound)


def _inv_direct(inv: Pred, space: StateSpace, bound: int) -> TraceSet:
    # aborts outside the invariant; from inside, any run that stays inside,
    # stopping or pausing anywhere
    done = []
    for run in all_runs(space, bound):
        if all(s in inv for s in run[0::2]):
            done.append((run, TERM))
    return TraceSet.build(done, ((s,) for s in space.states if s not in inv), bound)


def _expr_direct(e: Expr, k: int, space: StateSpace, bound: int) -> TraceSet:
    # program steps stutter; the result is k if some state along the way gives k
    hits = eval_set(e, k, space)
    done = []
    for run in all_runs(space, bound):
        if any(run[i] == PI and run[i - 1] != run[i + 1] for i in range(1, len(run), 2)):
            continue
        # the read may still be to come, so every stuttering run is pending
        done.append((run, TERM) if any(s in hits for s in run[0::2]) else (run, PEND))
    return TraceSet.build(done, (), bound)


def refines(c: Command, d: Command, space: StateSpace, bound: int) -> bool:
    """Is ``c`` refined by ``d`` (every trace of d a trace of c)?"""
    return traces_of(d, space, bound) <= traces_of(c, space, bound)


def refinement_counterexample(c: Command, d: Command, space: StateSpace, bound: int) -> Trace | None:
    return traces_of(d, space, bound).counterexample_against(traces_of(c, space, bound))


def data_refines(c: Command, d: Command, inv: Pred, space: StateSpace, bound: int) -> bool:
    return refines(WeakConj(Inv(inv), c), WeakConj(Inv(inv), d), space, bound)


def equivalent(c: Command, d: Command, space: StateSpace, bound: int) -> bool:
    return traces_of(c, space, bound) == traces_of(d, space, bound)


def clear_cache() -> None:
    _denote.cache_clear()
