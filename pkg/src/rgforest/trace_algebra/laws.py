"""Catalogue of algebraic laws, seeded instance generators and a checker.

Each law is an equality, a refinement or a data refinement between two
commands built from free predicates, relations and sub-commands.  A law
instance is generated by rejection sampling so that it satisfies the
law's side condition; :func:`check_law` then compares the two sides as
exact bounded trace sets and returns the shortest trace that separates
them when they differ.

Premises of the form ``c data-refined-by d under I`` are produced either
by mutating the primitives of ``c`` within the freedom the invariant
leaves, or by strengthening ``c`` with a conjunct, and are confirmed by an
exact check before use.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .model import (
    Abort, Assert, Command, Cond, Conj, Env, ExprEval, FinIter, Frame, Guar, Idle, Inv, Nil,
    Nondet, NotVar, OmIter, Opt, Par, Pgm, PreSpec, Rely, Seq, Spec, StateSpace, Test, Trace,
    Var, WeakConj, While, Const, cstep, data_refines, eval_set, seq, traces_of,
)

EQ, REF, DREF = "eq", "ref", "dref"

MAX_DEPTH = 3
PREMISE_TRIES = 4
SIDE_TRIES = 200


class UnknownLaw(KeyError):
    pass


@dataclass(frozen=True)
class Instance:
    law: str
    params: tuple  # sorted (name, value) pairs

    def get(self, name):
        return dict(self.params)[name]

    def as_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class LawResult:
    law: str
    holds: bool
    side_condition: bool
    counterexample: Trace | None = None

    def to_json(self) -> dict:
        return {"law": self.law, "holds": self.holds, "sideCondition": self.side_condition,
                "counterexample": self.counterexample.to_json() if self.counterexample else None}


@dataclass(frozen=True)
class Law:
    id: str
    kind: str
    gen: Callable  # (rng, space) -> params dict satisfying the side condition
    build: Callable  # (params, space) -> (lhs, rhs)
    side: Callable = field(default=lambda p, sp, b: True)  # (params, space, bound) -> bool
    negative: Callable | None = None  # (rng, space) -> params violating the side condition
    note: str = ""


# ---------------------------------------------------------------------------
# Random building blocks
# ---------------------------------------------------------------------------

def rand_pred(rng: random.Random, sp: StateSpace) -> frozenset:
    return frozenset(s for s in sp.states if rng.random() < 0.5)


def rand_rel(rng: random.Random, sp: StateSpace) -> frozenset:
    return frozenset(p for p in sorted(sp.univ) if rng.random() < 0.5)


def rand_subset(rng: random.Random, xs, prob: float = 0.5) -> frozenset:
    return frozenset(x for x in sorted(xs) if rng.random() < prob)


def rand_prim(rng: random.Random, sp: StateSpace) -> Command:
    k = rng.randrange(7)
    if k == 0:
        return Test(rand_pred(rng, sp))
    if k == 1:
        return Pgm(rand_rel(rng, sp))
    if k == 2:
        return Env(rand_rel(rng, sp))
    if k == 3:
        return Assert(rand_pred(rng, sp))
    if k == 4:
        return cstep(rand_rel(rng, sp))
    if k == 5:
        return Seq(Pgm(rand_rel(rng, sp)), Env(rand_rel(rng, sp)))
    return Nil() if rng.random() < 0.8 else Abort()


_BINARY = (Seq, Conj, WeakConj, Par, lambda a, b: Nondet((a, b)))
_UNARY = (FinIter, OmIter)


def rand_cmd(rng: random.Random, sp: StateSpace, depth: int = MAX_DEPTH) -> Command:
    if depth <= 0 or rng.random() < 0.35:
        return rand_prim(rng, sp)
    if rng.random() < 0.2:
        return rng.choice(_UNARY)(rand_cmd(rng, sp, depth - 1))
    op = rng.choice(_BINARY)
    return op(rand_cmd(rng, sp, depth - 1), rand_cmd(rng, sp, depth - 1))


def rand_var(rng: random.Random, sp: StateSpace) -> str:
    return rng.choice(sp.names)


def rand_bool_expr(rng: random.Random, sp: StateSpace):
    bools = [v for v in sp.names if sp.domain_of(v) == 2]
    k = rng.randrange(5)
    if not bools or k == 0:
        return Const(rng.randrange(2))
    v = rng.choice(bools)
    return NotVar(v) if k == 1 else Var(v)


def rand_expr(rng: random.Random, sp: StateSpace):
    v = rand_var(rng, sp)
    if rng.random() < 0.2:
        return Const(rng.randrange(sp.domain_of(v))), rng.randrange(sp.domain_of(v))
    return Var(v), rng.randrange(sp.domain_of(v))


def inside(sp: StateSpace, inv: frozenset) -> frozenset:
    """Pairs that start and end inside the invariant."""
    return frozenset((a, b) for a in inv for b in inv)


# Mutations that the invariant cannot observe: shrink anything inside it,
# add anything outside it.

def _mutate(rng: random.Random, c: Command, inv: frozenset, sp: StateSpace) -> Command:
    box = inside(sp, inv)
    outside_pairs = sp.univ - box
    outside_states = sp.everything - inv
    match c:
        case Test(p):
            return Test(rand_subset(rng, p & inv, 0.8) | (p - inv) | rand_subset(rng, outside_states))
        case Pgm(r):
            return Pgm(rand_subset(rng, r & box, 0.8) | rand_subset(rng, outside_pairs, 0.3))
        case Env(r):
            return Env(rand_subset(rng, r & box, 0.8) | rand_subset(rng, outside_pairs, 0.3))
        case Assert(p):
            return Assert((p & inv) | rand_pred(rng, sp))
        case Seq(a, b):
            return Seq(_mutate(rng, a, inv, sp), _mutate(rng, b, inv, sp))
        case Conj(a, b):
            return Conj(_mutate(rng, a, inv, sp), _mutate(rng, b, inv, sp))
        case WeakConj(a, b):
            return WeakConj(_mutate(rng, a, inv, sp), _mutate(rng, b, inv, sp))
        case Par(a, b):
            return Par(_mutate(rng, a, inv, sp), _mutate(rng, b, inv, sp))
        case Nondet(cs):
            return Nondet(tuple(_mutate(rng, x, inv, sp) for x in cs))
        case FinIter(a):
            return FinIter(_mutate(rng, a, inv, sp))
        case OmIter(a):
            return OmIter(_mutate(rng, a, inv, sp))
    return c


def reified_pair(rng: random.Random, sp: StateSpace, inv: frozenset, bound: int,
                 depth: int = MAX_DEPTH - 1) -> tuple[Command, Command]:
    """Random ``(c, d)`` with ``c`` data-refined by ``d`` under ``inv``, checked exactly."""
    c = rand_cmd(rng, sp, depth)
    for _ in range(PREMISE_TRIES):
        d = _mutate(rng, c, inv, sp)
        if d != c and data_refines(c, d, inv, sp, bound):
            return c, d
    if rng.random() < 0.5:
        return c, Conj(c, rand_cmd(rng, sp, 0))
    return c, c


# ---------------------------------------------------------------------------
# Law definitions
# ---------------------------------------------------------------------------

def _p(**kw) -> dict:
    return kw


LAWS: dict[str, Law] = {}


def _law(id, kind, gen, build, side=None, negative=None, note=""):
    LAWS[id] = Law(id, kind, gen, build, side or (lambda p, sp, b: True), negative, note)


def _superset_of(rng, sp, base):
    return frozenset(base) | rand_pred(rng, sp)


# basic refinements

_law("cgd-ref", REF,
     lambda rng, sp, b: (lambda p1: _p(p1=p1, p2=rand_subset(rng, p1)))(rand_pred(rng, sp)),
     lambda P, sp: (Test(P["p1"]), Test(P["p2"])),
     side=lambda P, sp, b: P["p1"] >= P["p2"])

_law("pre-ref", REF,
     lambda rng, sp, b: (lambda p1: _p(p1=p1, p2=_superset_of(rng, sp, p1)))(rand_pred(rng, sp)),
     lambda P, sp: (Assert(P["p1"]), Assert(P["p2"])),
     side=lambda P, sp, b: P["p1"] <= P["p2"])

_law("cpstep-ref", REF,
     lambda rng, sp, b: (lambda r1: _p(r1=r1, r2=rand_subset(rng, r1)))(rand_rel(rng, sp)),
     lambda P, sp: (Pgm(P["r1"]), Pgm(P["r2"])),
     side=lambda P, sp, b: P["r1"] >= P["r2"])

_law("cestep-ref", REF,
     lambda rng, sp, b: (lambda r1: _p(r1=r1, r2=rand_subset(rng, r1)))(rand_rel(rng, sp)),
     lambda P, sp: (Env(P["r1"]), Env(P["r2"])),
     side=lambda P, sp, b: P["r1"] >= P["r2"])


def not_immediately_aborting(d: Command) -> bool:
    """Syntactic check: d is a test, or its first action is an atomic step."""
    match d:
        case Test() | Pgm() | Env():
            return True
        case Nondet(cs):
            return all(not_immediately_aborting(x) for x in cs)
        case Seq(a, b):
            if isinstance(a, (Pgm, Env)) or (isinstance(a, Nondet) and all(isinstance(x, (Pgm, Env)) for x in a.cs)):
                return True
            return isinstance(a, Test) and not_immediately_aborting(b)
    return False


def _gen_pull(rng, sp, b):
    while True:
        d = rand_cmd(rng, sp, 1)
        if not_immediately_aborting(d):
            return _p(p=rand_pred(rng, sp), c=rand_cmd(rng, sp), d=d)


_law("test-conj-pull", EQ, _gen_pull,
     lambda P, sp: (WeakConj(Seq(Test(P["p"]), P["c"]), P["d"]), Seq(Test(P["p"]), WeakConj(P["c"], P["d"]))),
     side=lambda P, sp, b: not_immediately_aborting(P["d"]))

# invariants

_law("inv-introduce", REF,
     lambda rng, sp, b: _p(I=rand_pred(rng, sp), c=rand_cmd(rng, sp)),
     lambda P, sp: (Seq(Assert(P["I"]), P["c"]), WeakConj(Inv(P["I"]), P["c"])))

_law("inv-maintains", EQ,
     lambda rng, sp, b: _p(I=rand_pred(rng, sp)),
     lambda P, sp: (Inv(P["I"]), Seq(Assert(P["I"]), OmIter(cstep(sp.maintains(P["I"]))))))


def _inv(P, c):
    return WeakConj(Inv(P["I"]), c)


def _gen_set(rng, sp, b):
    return _p(I=rand_pred(rng, sp), C=tuple(rand_cmd(rng, sp) for _ in range(rng.randint(1, 3))))


_law("inv-distrib-Nondet", EQ, _gen_set,
     lambda P, sp: (_inv(P, Nondet(P["C"])), Nondet(tuple(_inv(P, c) for c in P["C"]))),
     side=lambda P, sp, b: len(P["C"]) > 0)


def _gen_cd(rng, sp, b):
    return _p(I=rand_pred(rng, sp), c=rand_cmd(rng, sp), d=rand_cmd(rng, sp))


_law("inv-distrib-nondet", EQ, _gen_cd,
     lambda P, sp: (_inv(P, Nondet((P["c"], P["d"]))), Nondet((_inv(P, P["c"]), _inv(P, P["d"])))))
_law("inv-distrib-seq", EQ, _gen_cd,
     lambda P, sp: (_inv(P, Seq(P["c"], P["d"])), Seq(_inv(P, P["c"]), _inv(P, P["d"]))))
_law("inv-distrib-par", EQ, _gen_cd,
     lambda P, sp: (_inv(P, Par(P["c"], P["d"])), Par(_inv(P, P["c"]), _inv(P, P["d"]))))
_law("inv-distrib-conj", EQ, _gen_cd,
     lambda P, sp: (_inv(P, WeakConj(P["c"], P["d"])), WeakConj(_inv(P, P["c"]), _inv(P, P["d"]))))


def _gen_c(rng, sp, b):
    return _p(I=rand_pred(rng, sp), c=rand_cmd(rng, sp))


_law("inv-distrib-finite-iter", EQ, _gen_c,
     lambda P, sp: (_inv(P, FinIter(P["c"])), FinIter(_inv(P, P["c"]))))
_law("inv-distrib-iter", EQ, _gen_c,
     lambda P, sp: (_inv(P, OmIter(P["c"])), OmIter(_inv(P, P["c"]))))
_law("inv-test", EQ,
     lambda rng, sp, b: _p(I=rand_pred(rng, sp), p=rand_pred(rng, sp)),
     lambda P, sp: (_inv(P, Test(P["p"])), Seq(Assert(P["I"]), Test(P["p"]))))
_law("inv-assert", EQ,
     lambda rng, sp, b: _p(I=rand_pred(rng, sp), p=rand_pred(rng, sp)),
     lambda P, sp: (_inv(P, Assert(P["p"])), Assert(P["I"] & P["p"])))
_law("inv-cpstep", EQ,
     lambda rng, sp, b: _p(I=rand_pred(rng, sp), r=rand_rel(rng, sp)),
     lambda P, sp: (_inv(P, Pgm(P["r"])), Seq(Assert(P["I"]), Pgm(P["r"] & sp.postr(P["I"])))))
_law("inv-cestep", EQ,
     lambda rng, sp, b: _p(I=rand_pred(rng, sp), r=rand_rel(rng, sp)),
     lambda P, sp: (_inv(P, Env(P["r"])), Seq(Assert(P["I"]), Env(P["r"] & sp.postr(P["I"])))))

# data reification of composite commands


def _dref(P, sp, b, *pairs):
    return all(data_refines(c, d, P["I"], sp, b) for c, d in pairs)


def _gen_two_pairs(rng, sp, b):
    inv = rand_pred(rng, sp)
    c1, d1 = reified_pair(rng, sp, inv, b)
    c2, d2 = reified_pair(rng, sp, inv, b)
    return _p(I=inv, c1=c1, d1=d1, c2=c2, d2=d2)


def _side_two(P, sp, b):
    return _dref(P, sp, b, (P["c1"], P["d1"]), (P["c2"], P["d2"]))


def _gen_big_nondet(rng, sp, b):
    inv = rand_pred(rng, sp)
    C, D = [], []
    for _ in range(rng.randint(1, 3)):
        c, d = reified_pair(rng, sp, inv, b)
        C.append(c)
        D.append(d)
    D = D[: rng.randint(1, len(D))]
    return _p(I=inv, C=tuple(C), D=tuple(D))


_law("reify-Nondet", DREF, _gen_big_nondet,
     lambda P, sp: (Nondet(P["C"]), Nondet(P["D"])),
     side=lambda P, sp, b: all(any(data_refines(c, d, P["I"], sp, b) for c in P["C"]) for d in P["D"]))
_law("reify-nondet", DREF, _gen_two_pairs,
     lambda P, sp: (Nondet((P["c1"], P["c2"])), Nondet((P["d1"], P["d2"]))), side=_side_two)
_law("reify-seq", DREF, _gen_two_pairs,
     lambda P, sp: (Seq(P["c1"], P["c2"]), Seq(P["d1"], P["d2"])), side=_side_two)
_law("reify-par", DREF, _gen_two_pairs,
     lambda P, sp: (Par(P["c1"], P["c2"]), Par(P["d1"], P["d2"])), side=_side_two)
_law("reify-conj", DREF, _gen_two_pairs,
     lambda P, sp: (WeakConj(P["c1"], P["c2"]), WeakConj(P["d1"], P["d2"])), side=_side_two)


def _gen_one_pair(rng, sp, b):
    inv = rand_pred(rng, sp)
    c, d = reified_pair(rng, sp, inv, b)
    return _p(I=inv, c=c, d=d)


def _side_one(P, sp, b):
    return _dref(P, sp, b, (P["c"], P["d"]))


_law("reify-finite-iter", DREF, _gen_one_pair,
     lambda P, sp: (FinIter(P["c"]), FinIter(P["d"])), side=_side_one)
_law("reify-iter", DREF, _gen_one_pair,
     lambda P, sp: (OmIter(P["c"]), OmIter(P["d"])), side=_side_one)

# data reification of primitive and derived commands


def _gen_reify_test(rng, sp, b):
    inv, p2 = rand_pred(rng, sp), rand_pred(rng, sp)
    return _p(I=inv, p1=(inv & p2) | rand_pred(rng, sp), p2=p2)


def _neg_reify_test(rng, sp, b):
    while True:
        inv, p2 = rand_pred(rng, sp), rand_pred(rng, sp)
        if inv & p2:
            drop = rng.choice(sorted(inv & p2))
            return _p(I=inv, p1=rand_pred(rng, sp) - {drop}, p2=p2)


_law("reify-test", DREF, _gen_reify_test,
     lambda P, sp: (Test(P["p1"]), Test(P["p2"])),
     side=lambda P, sp, b: P["p1"] >= P["I"] & P["p2"], negative=_neg_reify_test)


def _boxed(sp, inv, r):
    return r & inside(sp, inv)


def _gen_wider(rng, sp, b, name1="r1", name2="r2"):
    """r1 contains every pair of r2 that starts and ends inside I."""
    inv, r2 = rand_pred(rng, sp), rand_rel(rng, sp)
    return {"I": inv, name1: _boxed(sp, inv, r2) | rand_rel(rng, sp), name2: r2}


def _neg_wider(name1, name2):
    def gen(rng, sp, b):
        while True:
            inv, r2 = rand_pred(rng, sp), rand_rel(rng, sp)
            boxed = _boxed(sp, inv, r2)
            if boxed:
                drop = rng.choice(sorted(boxed))
                return {"I": inv, name1: rand_rel(rng, sp) - {drop}, name2: r2}
    return gen


def _side_wider(name1, name2):
    return lambda P, sp, b: P[name1] >= _boxed(sp, P["I"], P[name2])


_law("reify-cpstep", DREF, _gen_wider, lambda P, sp: (Pgm(P["r1"]), Pgm(P["r2"])),
     side=_side_wider("r1", "r2"))
_law("reify-cestep", DREF, _gen_wider, lambda P, sp: (Env(P["r1"]), Env(P["r2"])),
     side=_side_wider("r1", "r2"))


def _gen_reify_assert(rng, sp, b):
    inv, p1 = rand_pred(rng, sp), rand_pred(rng, sp)
    return _p(I=inv, p1=p1, p2=(inv & p1) | rand_pred(rng, sp))


_law("reify-assert", DREF, _gen_reify_assert, lambda P, sp: (Assert(P["p1"]), Assert(P["p2"])),
     side=lambda P, sp, b: P["I"] & P["p1"] <= P["p2"])

_law("reify-guar", DREF,
     lambda rng, sp, b: _gen_wider(rng, sp, b, "g1", "g2"),
     lambda P, sp: (Guar(P["g1"]), Guar(P["g2"])),
     side=_side_wider("g1", "g2"), negative=_neg_wider("g1", "g2"))


def _gen_narrower(rng, sp, b, name1="r1", name2="r2"):
    """r2 contains every pair of r1 that starts and ends inside I."""
    inv, r1 = rand_pred(rng, sp), rand_rel(rng, sp)
    return {"I": inv, name1: r1, name2: _boxed(sp, inv, r1) | rand_rel(rng, sp)}


def _side_narrower(name1, name2):
    return lambda P, sp, b: _boxed(sp, P["I"], P[name1]) <= P[name2]


_law("reify-rely", DREF, _gen_narrower, lambda P, sp: (Rely(P["r1"]), Rely(P["r2"])),
     side=_side_narrower("r1", "r2"))


def _gen_reify_frame(rng, sp, b):
    names = list(sp.names)
    v = rng.choice(names)
    w = frozenset(x for x in names if x != v and rng.random() < 0.5)
    inv = rand_pred(rng, sp)
    keeps_v = sp.id_on([v])
    g = frozenset(pr for pr in rand_rel(rng, sp) if pr not in inside(sp, inv) or pr in keeps_v)
    return _p(I=inv, v=v, w=w, g=g, c=rand_cmd(rng, sp))


_law("reify-frame", DREF, _gen_reify_frame,
     lambda P, sp: (Frame(P["w"], P["c"]), WeakConj(Guar(P["g"]), Frame(P["w"] | {P["v"]}, P["c"]))),
     side=lambda P, sp, b: P["v"] not in P["w"] and _boxed(sp, P["I"], P["g"]) <= sp.id_on([P["v"]]))

_law("reify-opt", DREF,
     lambda rng, sp, b: _gen_wider(rng, sp, b, "q1", "q2"),
     lambda P, sp: (Opt(P["q1"]), Opt(P["q2"])), side=_side_wider("q1", "q2"))


def _spec_needed(sp, inv, p, q2):
    return frozenset((a, c) for a, c in q2 if a in inv and a in p and c in inv)


def _gen_reify_spec(rng, sp, b):
    inv, p, q2 = rand_pred(rng, sp), rand_pred(rng, sp), rand_rel(rng, sp)
    return _p(I=inv, p=p, q1=_spec_needed(sp, inv, p, q2) | rand_rel(rng, sp), q2=q2)


def _neg_reify_spec(rng, sp, b):
    while True:
        inv, p, q2 = rand_pred(rng, sp), rand_pred(rng, sp), rand_rel(rng, sp)
        need = _spec_needed(sp, inv, p, q2)
        if need:
            drop = rng.choice(sorted(need))
            return _p(I=inv, p=p, q1=rand_rel(rng, sp) - {drop}, q2=q2)


_law("reify-spec", DREF, _gen_reify_spec,
     lambda P, sp: (PreSpec(P["p"], P["q1"]), PreSpec(P["I"] & P["p"], P["q2"])),
     side=lambda P, sp, b: P["q1"] >= _spec_needed(sp, P["I"], P["p"], P["q2"]),
     negative=_neg_reify_spec)


def _gen_rgspec(rng, sp, b):
    inv = rand_pred(rng, sp)
    p1 = rand_pred(rng, sp)
    r1 = rand_rel(rng, sp)
    g2 = rand_rel(rng, sp)
    q2 = rand_rel(rng, sp)
    return _p(I=inv, p1=p1, p2=(inv & p1) | rand_pred(rng, sp),
              r1=r1, r2=_boxed(sp, inv, r1) | rand_rel(rng, sp),
              g1=_boxed(sp, inv, g2) | rand_rel(rng, sp), g2=g2,
              q1=_spec_needed(sp, inv, p1, q2) | rand_rel(rng, sp), q2=q2)


def _side_rgspec(P, sp, b):
    inv = P["I"]
    return (inv & P["p1"] <= P["p2"] and _boxed(sp, inv, P["r1"]) <= P["r2"]
            and P["g1"] >= _boxed(sp, inv, P["g2"]) and P["q1"] >= _spec_needed(sp, inv, P["p1"], P["q2"]))


_law("reify-rgspec", DREF, _gen_rgspec,
     lambda P, sp: (WeakConj(WeakConj(Rely(P["r1"]), Guar(P["g1"])), PreSpec(P["p1"], P["q1"])),
                    WeakConj(WeakConj(Rely(P["r2"]), Guar(P["g2"])), PreSpec(P["p2"], P["q2"]))),
     side=_side_rgspec)

# expressions and control flow


def _gen_reify_expr(rng, sp, b):
    for _ in range(SIDE_TRIES):
        P = _gen_narrower(rng, sp, b)
        e1, k1 = rand_expr(rng, sp)
        e2, k2 = rand_expr(rng, sp)
        P.update(e1=e1, k1=k1, e2=e2, k2=k2)
        if _side_reify_expr(P, sp, b):
            return P
    # a read compared with itself always qualifies
    P.update(e2=e1, k2=k1)
    return P


def _side_reify_expr(P, sp, b):
    return (_boxed(sp, P["I"], P["r1"]) <= P["r2"]
            and eval_set(P["e1"], P["k1"], sp) >= P["I"] & eval_set(P["e2"], P["k2"], sp))


_law("reify-expr", DREF, _gen_reify_expr,
     lambda P, sp: (WeakConj(Rely(P["r1"]), ExprEval(P["e1"], P["k1"])),
                    WeakConj(Rely(P["r2"]), ExprEval(P["e2"], P["k2"]))),
     side=_side_reify_expr)


def _same_guard(P, sp):
    inv = P["I"]
    return inv & eval_set(P["b1"], 1, sp) == inv & eval_set(P["b2"], 1, sp)


def _gen_guards(rng, sp, b, P):
    for _ in range(SIDE_TRIES):
        b1, b2 = rand_bool_expr(rng, sp), rand_bool_expr(rng, sp)
        P.update(b1=b1, b2=b2)
        if _same_guard(P, sp):
            return P
    P.update(b2=P["b1"])
    return P


def _gen_reify_cond(rng, sp, b):
    P = _gen_narrower(rng, sp, b)
    c1, d1 = reified_pair(rng, sp, P["I"], b, depth=0)
    c2, d2 = reified_pair(rng, sp, P["I"], b, depth=0)
    P.update(c1=c1, d1=d1, c2=c2, d2=d2)
    return _gen_guards(rng, sp, b, P)


_law("reify-conditional", DREF, _gen_reify_cond,
     lambda P, sp: (WeakConj(Rely(P["r1"]), Cond(P["b1"], P["c1"], P["c2"])),
                    WeakConj(Rely(P["r2"]), Cond(P["b2"], P["d1"], P["d2"]))),
     side=lambda P, sp, b: (_side_narrower("r1", "r2")(P, sp, b) and _same_guard(P, sp)
                            and _side_two(P, sp, b)))


def _gen_reify_while(rng, sp, b):
    P = _gen_narrower(rng, sp, b)
    c1, c2 = reified_pair(rng, sp, P["I"], b, depth=0)
    P.update(c1=c1, c2=c2)
    return _gen_guards(rng, sp, b, P)


_law("reify-while", DREF, _gen_reify_while,
     lambda P, sp: (WeakConj(Rely(P["r1"]), While(P["b1"], P["c1"])),
                    WeakConj(Rely(P["r2"]), While(P["b2"], P["c2"]))),
     side=lambda P, sp, b: (_side_narrower("r1", "r2")(P, sp, b) and _same_guard(P, sp)
                            and _dref(P, sp, b, (P["c1"], P["c2"]))))


def _gen_single_ref(rng, sp, b):
    e, k = rand_expr(rng, sp)
    return _p(r=rand_rel(rng, sp), e=e, k=k)


_law("single-reference", EQ, _gen_single_ref,
     lambda P, sp: (WeakConj(Rely(P["r"]), ExprEval(P["e"], P["k"])),
                    WeakConj(Rely(P["r"]), seq(Idle(), Test(eval_set(P["e"], P["k"], sp)), Idle()))))

LAW_IDS: tuple[str, ...] = tuple(LAWS)
NEGATIVE_LAWS: tuple[str, ...] = tuple(k for k, v in LAWS.items() if v.negative is not None)

# Laws whose free iteration makes termination matter only through the
# bounded safety projection.
SAFETY_PROJECTION = ("inv-distrib-finite-iter", "inv-distrib-iter", "reify-finite-iter", "reify-iter",
                     "reify-while")


# ---------------------------------------------------------------------------
# Generation and checking
# ---------------------------------------------------------------------------

def _law_or_raise(law_id: str) -> Law:
    try:
        return LAWS[law_id]
    except KeyError:
        raise UnknownLaw(law_id) from None


def _rng(law_id: str, seed: int, negative: bool) -> random.Random:
    return random.Random(f"{law_id}:{'neg' if negative else 'pos'}:{seed}")


def random_instance(law_id: str, seed: int, space: StateSpace | None = None, bound: int = 3,
                    negative: bool = False) -> Instance:
    """Seeded instance of ``law_id``; ``negative`` asks for one that breaks the side condition."""
    law = _law_or_raise(law_id)
    sp = space or StateSpace.from_size(4)
    rng = _rng(law_id, seed, negative)
    if negative:
        if law.negative is None:
            raise ValueError(f"{law_id} has no generator for side-condition violations")
        params = law.negative(rng, sp, bound)
    else:
        params = law.gen(rng, sp, bound)
    return Instance(law_id, tuple(sorted(params.items(), key=lambda kv: kv[0])))


def check_law(law_id: str, instance: Instance | dict, space: StateSpace | None = None,
              bound: int = 3) -> LawResult:
    law = _law_or_raise(law_id)
    sp = space or StateSpace.from_size(4)
    P = instance.as_dict() if isinstance(instance, Instance) else dict(instance)
    side = bool(law.side(P, sp, bound))
    lhs, rhs = law.build(P, sp)
    if law.kind == DREF:
        inv = P["I"]
        lhs, rhs = WeakConj(Inv(inv), lhs), WeakConj(Inv(inv), rhs)
    tl, tr = traces_of(lhs, sp, bound), traces_of(rhs, sp, bound)
    cex = tr.counterexample_against(tl)
    if cex is None and law.kind == EQ:
        cex = tl.counterexample_against(tr)
    return LawResult(law_id, cex is None, side, cex)


@dataclass
class LawSummary:
    law: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    negative_found: bool | None = None
    negative_example: Trace | None = None
    negative_tries: int = 0

    def merge(self, other: "LawSummary") -> "LawSummary":
        out = LawSummary(self.law, self.passed + other.passed, self.failed + other.failed,
                         self.skipped + other.skipped, self.failures + other.failures)
        if self.negative_found is not None or other.negative_found is not None:
            out.negative_found = bool(self.negative_found) or bool(other.negative_found)
            out.negative_example = self.negative_example or other.negative_example
            out.negative_tries = self.negative_tries + other.negative_tries
        return out

    def to_json(self) -> dict:
        d = {"law": self.law, "passed": self.passed, "failed": self.failed, "skipped": self.skipped,
             "failures": [{"seed": s, "counterexample": t.to_json() if t else None} for s, t in self.failures]}
        if self.negative_found is not None:
            d["negative"] = {"counterexampleFound": self.negative_found, "tries": self.negative_tries,
                             "counterexample": self.negative_example.to_json() if self.negative_example else None}
        return d


def run_law(law_id: str, samples: int, seed: int = 0, space: StateSpace | None = None, bound: int = 3,
            negative_tries: int = 25) -> LawSummary:
    """Check ``samples`` satisfying instances, plus violating ones when the law has them."""
    sp = space or StateSpace.from_size(4)
    summary = LawSummary(law_id)
    for i in range(samples):
        s = seed * 1_000_003 + i
        inst = random_instance(law_id, s, sp, bound)
        res = check_law(law_id, inst, sp, bound)
        if not res.side_condition:
            summary.skipped += 1
        elif res.holds:
            summary.passed += 1
        else:
            summary.failed += 1
            summary.failures.append((s, res.counterexample))
    if LAWS[law_id].negative is not None and samples > 0:
        summary.negative_found = False
        for i in range(negative_tries):
            s = seed * 1_000_003 + i
            inst = random_instance(law_id, s, sp, bound, negative=True)
            res = check_law(law_id, inst, sp, bound)
            summary.negative_tries += 1
            if not res.holds:
                summary.negative_found = True
                summary.negative_example = res.counterexample
                break
    return summary
