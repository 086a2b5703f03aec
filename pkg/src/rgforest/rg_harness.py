"""Deterministic interleaving explorer and rely-guarantee checkers.

A :class:`Scenario` names a forest size, an initial parent map and one
script of operations per thread.  :func:`explore` drives the step machines
of :mod:`rgforest.concurrent_ops` through every schedule (exhaustive mode,
depth-first with state copying) or through seeded random schedules, and
evaluates after every shared-memory step:

* the stepping operation's guarantee,
* every other active operation's rely,
* the coupling invariant between a shadow abstract relation and the forest,
* the annotated clean_up assertions (on arrival and while waiting),
* loop variants at iteration boundaries,
* test's must/may postcondition at return,

and, in exhaustive mode, compares the set of observable outcomes against
the outcomes of the abstract operations.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Sequence

from . import forest as fo
from .concurrent_ops import (
    NO_FAULTS,
    Cells,
    Faults,
    LinkPolicy,
    OpFrame,
    OpKind,
    StepEvent,
    ThreadProgram,
)
from .relation_core import ElementDomain, EquivRelation, equate_abstract

SCHEMA_VERSION = 1

CHECKS = ("guarantee", "coupling", "rely", "assertions", "variants", "testPost", "refinement")

# violation ids reported for each check name
CHECK_IDS = {
    "guarantee": "guarantee",
    "coupling": "coupling-invariant",
    "rely": "rely",
    "assertions": "assertion",
    "variants": "variant",
    "testPost": "test-post",
    "refinement": "refinement",
}
BUDGET = "budget"

DEFAULT_STEP_BOUND = 200


class ScenarioError(ValueError):
    """Malformed or out-of-bounds scenario."""


@dataclass(frozen=True)
class Scenario:
    n: int
    threads: tuple[tuple[ThreadProgram, ...], ...]
    policy: LinkPolicy = LinkPolicy.ORDERED
    initial: tuple[int, ...] | None = None
    mode: str = "exhaustive"
    seed: int = 0
    samples: int = 100
    step_bound: int = DEFAULT_STEP_BOUND
    checks: frozenset[str] = frozenset(CHECKS) - {"refinement"}
    rely_violation_demo: bool = False
    op_budget: int | None = None
    faults: Faults = NO_FAULTS
    shadow_fault: bool = False

    def __post_init__(self):
        dom = ElementDomain(self.n)
        pol = LinkPolicy(self.policy)
        object.__setattr__(self, "policy", pol)
        threads = tuple(
            tuple(replace(p, policy=pol) if p.kind is OpKind.EQUATE else p for p in script)
            for script in self.threads
        )
        object.__setattr__(self, "threads", threads)
        for script in threads:
            for p in script:
                dom.check(p.x, p.y)
        init = tuple(range(self.n)) if self.initial is None else tuple(self.initial)
        object.__setattr__(self, "initial", init)
        f = fo.Forest(dom, init)
        if not fo.is_partial_order(f):
            raise ScenarioError("initial parent map has a non-trivial cycle")
        if self.mode not in ("exhaustive", "random"):
            raise ScenarioError(f"unknown exploration mode {self.mode!r}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ScenarioError(f"unknown checks: {sorted(unknown)}")
        object.__setattr__(self, "checks", frozenset(self.checks))
        if self.step_bound < 1:
            raise ScenarioError("step bound must be positive")
        cleaners = sum(any(p.kind is OpKind.CLEAN_UP for p in s) for s in threads)
        if cleaners > 1 and not self.rely_violation_demo:
            raise ScenarioError("clean_up may appear in at most one thread "
                                "(set relyViolationDemo to explore concurrent cleaners)")
        if "refinement" in self.checks and self.mode != "exhaustive":
            raise ScenarioError("the refinement check needs exhaustive mode")

    @property
    def budget(self) -> int:
        if self.op_budget is not None:
            return self.op_budget
        longest = max((len(s) for s in self.threads), default=1)
        return 16 * self.n * max(1, longest)


@dataclass(frozen=True)
class Violation:
    check: str
    schedule: tuple[int, ...] = ()
    step: int = -1
    thread: int = -1
    before: tuple[int, ...] | None = None
    after: tuple[int, ...] | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "schedule": list(self.schedule), "step": self.step,
                "thread": self.thread, "detail": self.detail,
                "before": list(self.before) if self.before is not None else None,
                "after": list(self.after) if self.after is not None else None}


@dataclass(frozen=True)
class VariantObservation:
    thread: int
    loop: tuple
    value: tuple[int, int]


@dataclass
class ShadowState:
    eq: frozenset
    invoke: dict = field(default_factory=dict)
    ret: dict = field(default_factory=dict)


@dataclass
class CheckReport:
    schedules: int = 0
    violations: list[Violation] = field(default_factory=list)
    violation_counts: dict[str, int] = field(default_factory=dict)
    per_check_passes: dict[str, int] = field(default_factory=dict)
    truncated: int = 0
    concrete_outcomes: set = field(default_factory=set)
    abstract_outcomes: set | None = None
    elapsed: float = 0.0
    max_kept: int = 100

    @property
    def inconclusive(self) -> bool:
        return self.truncated > 0 or self.schedules == 0

    @property
    def ok(self) -> bool:
        return not self.violation_counts and not self.inconclusive

    def add(self, v: Violation) -> None:
        self.violation_counts[v.check] = self.violation_counts.get(v.check, 0) + 1
        if len(self.violations) < self.max_kept:
            self.violations.append(v)

    def by_check(self, check: str) -> list[Violation]:
        return [v for v in self.violations if v.check == check]

    def to_json(self) -> dict:
        out = {
            "schemaVersion": SCHEMA_VERSION,
            "schedules": self.schedules,
            "inconclusive": self.inconclusive,
            "truncated": self.truncated,
            "violations": [v.to_json() for v in self.violations],
            "violationCounts": dict(sorted(self.violation_counts.items())),
            "perCheckPasses": dict(sorted(self.per_check_passes.items())),
            "timing": {"seconds": round(self.elapsed, 6)},
        }
        if self.abstract_outcomes is not None:
            out["refinement"] = {
                "concrete": len(self.concrete_outcomes),
                "abstract": len(self.abstract_outcomes),
                "included": self.concrete_outcomes <= self.abstract_outcomes,
            }
        return out


# ---------------------------------------------------------------------------
# Per-forest facts, cached by parent tuple
# ---------------------------------------------------------------------------

def _roots(parent: tuple[int, ...]) -> frozenset[int]:
    return _roots_cached(parent)


@lru_cache(maxsize=1 << 16)
def _roots_cached(parent):
    return frozenset(k for k, p in enumerate(parent) if p == k)


def _le_grows(before: tuple[int, ...], after: tuple[int, ...]) -> bool:
    ab = fo._ancestor_masks(before)
    aa = fo._ancestor_masks(after)
    return all(b & ~a == 0 for b, a in zip(ab, aa))


@lru_cache(maxsize=1 << 14)
def _equate_pairs(eq: frozenset, n: int, x: int, y: int) -> frozenset:
    return equate_abstract(EquivRelation(ElementDomain(n), eq), x, y).pairs


def _forest(parent) -> fo.Forest:
    return fo.Forest.of(parent)


# ---------------------------------------------------------------------------
# Checkers (pure; the explorer fills in schedule coordinates)
# ---------------------------------------------------------------------------

def check_step_guarantee(kind: OpKind, f_before: fo.Forest | Sequence[int], f_after: fo.Forest | Sequence[int],
                         linked: tuple[int, int] | None = None) -> Violation | None:
    """Guarantee of one atomic step of an operation of ``kind``.

    ``linked`` carries the equate's arguments when the step is its
    successful linking CAS.
    """
    b = tuple(getattr(f_before, "parent", f_before))
    a = tuple(getattr(f_after, "parent", f_after))
    kind = OpKind(kind)
    if kind in (OpKind.TEST, OpKind.ROOT_OF):
        if a != b:
            return Violation("guarantee", before=b, after=a, detail=f"{kind.value} step modified f")
        return None
    rb, ra = fo._retr_pairs(b), fo._retr_pairs(a)
    if kind is OpKind.CLEAN_UP:
        if rb != ra:
            return Violation("guarantee", before=b, after=a,
                             detail=f"clean_up step changed retr: {_symdiff(rb, ra)}")
        return None
    problems = []
    if not _roots(a) <= _roots(b):
        problems.append(f"roots grew: {sorted(_roots(a) - _roots(b))}")
    if not _le_grows(b, a):
        problems.append("descendant order shrank")
    if not rb <= ra:
        problems.append("retr shrank")
    if fo._is_partial_order(b) and not fo._is_partial_order(a):
        problems.append("partial order broken (non-trivial cycle)")
    if linked is not None:
        n = len(b)
        if fo._is_partial_order(b) and ra != _equate_pairs(rb, n, *linked):
            problems.append(f"linking CAS did not equate {linked}")
    elif ra != rb and not problems:
        problems.append("retr changed outside the linking CAS")
    if problems:
        return Violation("guarantee", before=b, after=a, detail="equate step: " + "; ".join(problems))
    return None


def _symdiff(x: frozenset, y: frozenset) -> str:
    lost = sorted(x - y)
    gained = sorted(y - x)
    return f"lost {lost} gained {gained}"


def check_rely(victim: OpKind, f_before, f_after) -> Violation | None:
    """Does an environment step respect the rely of an active ``victim``?"""
    b = tuple(getattr(f_before, "parent", f_before))
    a = tuple(getattr(f_after, "parent", f_after))
    victim = OpKind(victim)
    if not fo._retr_pairs(b) <= fo._retr_pairs(a):
        return Violation("rely", before=b, after=a, detail=f"retr shrank under {victim.value}")
    if victim is OpKind.CLEAN_UP:
        if not _roots(a) <= _roots(b):
            return Violation("rely", before=b, after=a, detail="roots grew under clean_up")
        if not _le_grows(b, a):
            return Violation("rely", before=b, after=a, detail="descendant order shrank under clean_up")
    return None


def check_coupling_invariant(shadow: ShadowState | frozenset, f) -> Violation | None:
    eq = shadow.eq if isinstance(shadow, ShadowState) else shadow
    a = tuple(getattr(f, "parent", f))
    if fo._is_partial_order(a) and eq == fo._retr_pairs(a):
        return None
    detail = "forest has a non-trivial cycle" if not fo._is_partial_order(a) else ""
    diff = _symdiff(eq, fo._retr_pairs(a))
    return Violation("coupling-invariant", after=a, detail=f"{detail} shadow vs retr: {diff}".strip())


def check_test_postcondition(frame: OpFrame, shadow: ShadowState | None = None) -> Violation | None:
    x, y, t = frame.arg_x, frame.arg_y, frame.result
    before = fo._retr_pairs(frame.f_invoke)
    after = fo._retr_pairs(frame.f_return)
    if (x, y) in before and not t:
        return Violation("test-post", detail=f"test({x},{y}) returned false but the pair was related at invocation")
    if t and (x, y) not in after:
        return Violation("test-post", detail=f"test({x},{y}) returned true but the pair is unrelated at return")
    return None


def assertion_holds(label: str, regs: dict, f: Sequence[int], f0: Sequence[int],
                    literal_f0: bool = False) -> bool:
    """Annotated clean_up assertion at program point ``label``.

    Common part: the initial root of x lies below rx, and rx lies below the
    current root of x.  ``literal_f0`` evaluates the first comparison in
    the initial forest instead of the current one.
    """
    ff = _forest(f)
    f0f = _forest(f0)
    x, rx, fx = regs["x"], regs["rx"], regs["fx"]
    try:
        r0 = fo.root_elem(f0f, x)
        rcur = fo.root_elem(ff, x)
    except fo.CycleError:
        return False
    base = fo.le_f(f0f if literal_f0 else ff, r0, rx) and fo.le_f(ff, rx, rcur)
    if not base:
        return False
    if label == "inv":
        return fo.le_f(ff, x, rx)
    if label == "body":
        return x != rx and fo.le_f(ff, x, rx)
    if label == "after_read":
        return x != fx and fo.le_f(ff, x, fx) and fo.le_f(ff, fx, rx)
    if label == "after_write":
        return fo.le_f(ff, fx, rx)
    raise ValueError(f"unknown program point {label!r}")


def check_assertions_and_stability(frame: OpFrame, f, label: str | None = None,
                                   regs: dict | None = None) -> Violation | None:
    label = label or frame.waiting_point()
    if label is None:
        return None
    regs = regs or frame.regs()
    a = tuple(getattr(f, "parent", f))
    if assertion_holds(label, regs, a, frame.f0):
        return None
    return Violation("assertion", after=a, detail=f"clean_up assertion {label!r} fails with {regs}")


def variant_value(frame_regs: dict, measure: str, f: Sequence[int]) -> tuple[int, int]:
    """Lexicographic pair (number of roots, distance term); raises when undefined."""
    ff = _forest(f)
    roots = len(_roots(ff.parent))
    if measure == "x->rx":
        term = fo.distance(ff, frame_regs["x"], frame_regs["rx"])
    else:
        term = 0
        for reg in measure.split("+"):
            v = frame_regs[reg]
            term += fo.distance(ff, v, fo.root_elem(ff, v))
    return roots, term


def check_variants(observations: Sequence[VariantObservation]) -> Violation | None:
    """Consecutive observations of one loop must strictly decrease."""
    for prev, cur in zip(observations, observations[1:]):
        if not cur.value < prev.value:
            return Violation("variant", thread=cur.thread,
                             detail=f"loop {cur.loop}: {prev.value} -> {cur.value} does not decrease")
    return None


# ---------------------------------------------------------------------------
# Explorer
# ---------------------------------------------------------------------------

class _State:
    __slots__ = ("cells", "ops", "frames", "halted", "eq", "last_obs", "results", "reported", "sched")

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.cells = self.cells[:]
        s.ops = self.ops[:]
        s.frames = [fr.copy() if fr is not None else None for fr in self.frames]
        s.halted = self.halted[:]
        s.eq = self.eq
        s.last_obs = dict(self.last_obs)
        s.results = dict(self.results)
        s.reported = set(self.reported)
        s.sched = self.sched[:]
        return s


class _Runner:
    def __init__(self, scn: Scenario, report: CheckReport):
        self.scn = scn
        self.report = report
        self.checks = scn.checks
        self.passes = report.per_check_passes
        self.budget = scn.budget

    def initial(self) -> _State:
        s = _State()
        s.cells = list(self.scn.initial)
        t = len(self.scn.threads)
        s.ops = [0] * t
        s.frames = [None] * t
        s.halted = [False] * t
        s.eq = fo._retr_pairs(tuple(self.scn.initial))
        s.last_obs = {}
        s.results = {}
        s.reported = set()
        s.sched = []
        return s

    def runnable(self, s: _State) -> list[int]:
        return [i for i, script in enumerate(self.scn.threads)
                if not s.halted[i] and s.ops[i] < len(script)]

    def _pass(self, check: str) -> None:
        self.passes[check] = self.passes.get(check, 0) + 1

    def _flag(self, s: _State, v: Violation, tid: int, before, after) -> None:
        # one report per checker per path keeps a persistent breach from flooding
        if v.check in s.reported:
            return
        s.reported.add(v.check)
        self.report.add(replace(v, schedule=tuple(s.sched), step=len(s.sched) - 1, thread=tid,
                                before=v.before if v.before is not None else before,
                                after=v.after if v.after is not None else after))

    def apply(self, s: _State, tid: int) -> None:
        scn = self.scn
        checks = self.checks
        prog = scn.threads[tid][s.ops[tid]]
        before = tuple(s.cells)
        fr = s.frames[tid]
        if fr is None:
            fr = prog.start(scn.faults)
            fr.f_invoke = before
            if fr.kind is OpKind.CLEAN_UP:
                fr.f0 = before
            s.frames[tid] = fr
        s.sched.append(tid)

        if "variants" in checks:
            regs = {"x": fr.x, "rx": fr.rx, "ry": fr.ry}
            for loop, measure in fr.boundaries():
                key = (tid, s.ops[tid], loop)
                try:
                    val = variant_value(regs, measure, before)
                except (fo.CycleError, fo.DomainError) as exc:
                    self._flag(s, Violation("variant", detail=f"loop {loop}: variant undefined ({exc})"),
                               tid, before, before)
                    continue
                prev = s.last_obs.get(key)
                s.last_obs[key] = val
                if prev is not None:
                    v = check_variants([VariantObservation(tid, loop, prev), VariantObservation(tid, loop, val)])
                    if v:
                        self._flag(s, v, tid, before, before)
                    else:
                        self._pass("variants")

        mem = Cells(s.cells)
        ev: StepEvent = fr.step(mem)
        s.cells = mem.cells
        after = tuple(s.cells)
        kind = fr.kind

        if "guarantee" in checks:
            v = check_step_guarantee(kind, before, after,
                                     linked=(fr.arg_x, fr.arg_y) if ev.linked else None)
            if v:
                self._flag(s, v, tid, before, after)
            else:
                self._pass("guarantee")

        if ev.linked and not scn.shadow_fault:
            s.eq = _equate_pairs(s.eq, scn.n, fr.arg_x, fr.arg_y)
        if "coupling" in checks:
            v = check_coupling_invariant(s.eq, after)
            if v:
                self._flag(s, v, tid, before, after)
            else:
                self._pass("coupling")

        if "rely" in checks:
            for j, other in enumerate(s.frames):
                if j == tid or other is None:
                    continue
                if kind is OpKind.CLEAN_UP and other.kind is OpKind.CLEAN_UP:
                    self._flag(s, Violation("rely", detail=f"clean_up on threads {j} and {tid} active together"),
                               tid, before, after)
                v = check_rely(other.kind, before, after)
                if v:
                    self._flag(s, replace(v, detail=f"{v.detail} (victim thread {j}, offender thread {tid})"),
                               tid, before, after)
                else:
                    self._pass("rely")

        if "assertions" in checks:
            for label, regs in ev.points:
                v = check_assertions_and_stability(fr, after, label, regs)
                if v:
                    self._flag(s, v, tid, before, after)
                else:
                    self._pass("assertions")
            for j, other in enumerate(s.frames):
                if j == tid or other is None or other.kind is not OpKind.CLEAN_UP:
                    continue
                v = check_assertions_and_stability(other, after)
                if v:
                    self._flag(s, replace(v, detail=v.detail + f" after environment step of thread {tid}"),
                               j, before, after)
                elif other.waiting_point():
                    self._pass("assertions")

        if fr.finished:
            fr.f_return = after
            if kind is OpKind.TEST:
                s.results[(tid, s.ops[tid])] = bool(fr.result)
                if "testPost" in checks:
                    v = check_test_postcondition(fr)
                    if v:
                        self._flag(s, v, tid, before, after)
                    else:
                        self._pass("testPost")
            s.frames[tid] = None
            s.ops[tid] += 1
        elif fr.steps >= self.budget:
            self._flag(s, Violation(BUDGET, detail=f"{prog.describe()} exceeded its budget of {self.budget} steps"),
                       tid, before, after)
            s.halted[tid] = True
            s.frames[tid] = None

    def outcome(self, s: _State):
        return (tuple(sorted(s.results.items())), fo._retr_pairs(tuple(s.cells)))


def explore(scn: Scenario) -> CheckReport:
    """Run every (or a sample of) schedule of ``scn`` through the checkers."""
    t0 = time.perf_counter()
    report = CheckReport()
    runner = _Runner(scn, report)
    witnesses: dict = {}

    def leaf(s: _State) -> None:
        report.schedules += 1
        out = runner.outcome(s)
        if out not in report.concrete_outcomes:
            report.concrete_outcomes.add(out)
            witnesses[out] = tuple(s.sched)

    if scn.mode == "exhaustive":
        stack = [runner.initial()]
        bound = scn.step_bound
        while stack:
            s = stack.pop()
            ready = runner.runnable(s)
            if not ready:
                leaf(s)
                continue
            if len(s.sched) >= bound:
                report.truncated += 1
                continue
            # push in reverse so thread 0 is explored first
            for k, tid in enumerate(reversed(ready)):
                child = s if k == len(ready) - 1 else s.copy()
                runner.apply(child, tid)
                stack.append(child)
    else:
        rng = random.Random(scn.seed)
        for _ in range(scn.samples):
            s = runner.initial()
            while True:
                ready = runner.runnable(s)
                if not ready:
                    leaf(s)
                    break
                if len(s.sched) >= scn.step_bound:
                    report.truncated += 1
                    break
                runner.apply(s, rng.choice(ready))

    if "refinement" in scn.checks:
        abstract = abstract_outcomes(scn)
        report.abstract_outcomes = abstract
        for out in sorted(report.concrete_outcomes - abstract, key=repr):
            report.add(Violation("refinement", schedule=witnesses[out], step=len(witnesses[out]) - 1,
                                 detail=f"outcome {_describe_outcome(out)} has no abstract counterpart"))
        passed = len(report.concrete_outcomes & abstract)
        if passed:
            report.per_check_passes["refinement"] = passed
    report.elapsed = time.perf_counter() - t0
    return report


def replay(scn: Scenario, schedule: Iterable[int]) -> CheckReport:
    """Re-execute one schedule (or prefix) and report what fires on it."""
    report = CheckReport()
    runner = _Runner(scn, report)
    s = runner.initial()
    for tid in schedule:
        if tid not in runner.runnable(s):
            raise ScenarioError(f"thread {tid} cannot step at position {len(s.sched)}")
        runner.apply(s, tid)
    if not runner.runnable(s):
        report.schedules = 1
        report.concrete_outcomes.add(runner.outcome(s))
    return report


def final_state(scn: Scenario, schedule: Iterable[int]) -> tuple[int, ...]:
    runner = _Runner(scn, CheckReport())
    s = runner.initial()
    for tid in schedule:
        runner.apply(s, tid)
    return tuple(s.cells)


def _describe_outcome(out) -> str:
    results, pairs = out
    n = max((a for a, _ in pairs), default=0) + 1
    classes = EquivRelation(ElementDomain(n), pairs).classes()
    tests = ", ".join(f"t{tid}.{k}={v}" for (tid, k), v in results)
    return f"[{tests}] classes {[sorted(c) for c in classes]}"


# ---------------------------------------------------------------------------
# Abstract side of the refinement check
# ---------------------------------------------------------------------------

def abstract_outcomes(scn: Scenario) -> set:
    """Outcomes of the abstract operations under every interleaving.

    Abstract equate is one atomic closure step.  Abstract test has an
    invocation event and a return event; at return it may answer any value
    allowed by its must/may contract against the two snapshots.
    clean_up and root_of have no abstract effect.
    """
    n = scn.n
    events: list[list[tuple]] = []
    for tid, script in enumerate(scn.threads):
        evs = []
        for k, p in enumerate(script):
            if p.kind is OpKind.EQUATE:
                evs.append(("equate", p.x, p.y, (tid, k)))
            elif p.kind is OpKind.TEST:
                evs.append(("invoke", p.x, p.y, (tid, k)))
                evs.append(("return", p.x, p.y, (tid, k)))
        events.append(evs)

    out: set = set()
    seen: set = set()

    def go(pos: tuple, eq: frozenset, pending: tuple, results: tuple) -> None:
        key = (pos, eq, pending, results)
        if key in seen:
            return
        seen.add(key)
        moved = False
        for tid, evs in enumerate(events):
            i = pos[tid]
            if i >= len(evs):
                continue
            moved = True
            kind, x, y, op = evs[i]
            npos = pos[:tid] + (i + 1,) + pos[tid + 1:]
            if kind == "equate":
                go(npos, _equate_pairs(eq, n, x, y), pending, results)
            elif kind == "invoke":
                go(npos, eq, pending + ((op, (x, y) in eq),), results)
            else:
                must = dict(pending)[op]
                rest = tuple(p for p in pending if p[0] != op)
                for t in (False, True):
                    if must and not t:
                        continue
                    if t and (x, y) not in eq:
                        continue
                    go(npos, eq, rest, tuple(sorted(results + ((op, t),))))
        if not moved:
            out.add((results, eq))

    go(tuple(0 for _ in events), fo._retr_pairs(tuple(scn.initial)), (), ())
    return out


def check_outcome_refinement(scn: Scenario) -> CheckReport:
    if scn.mode != "exhaustive":
        raise ScenarioError("outcome refinement needs exhaustive mode")
    return explore(replace(scn, checks=scn.checks | {"refinement"}))


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

_OPS = {"equate": OpKind.EQUATE, "test": OpKind.TEST, "clean_up": OpKind.CLEAN_UP,
        "cleanup": OpKind.CLEAN_UP, "root_of": OpKind.ROOT_OF}


def scenario_from_json(doc: dict) -> Scenario:
    try:
        n = doc["n"]
        if not isinstance(n, int):
            raise ScenarioError("n must be an integer")
        policy = doc.get("policy", "ordered")
        if policy not in ("ordered", "unordered"):
            raise ScenarioError(f"unknown policy {policy!r}")
        threads = []
        for script in doc["threads"]:
            progs = []
            for op in script:
                kind = _OPS.get(op["op"])
                if kind is None:
                    raise ScenarioError(f"unknown operation {op['op']!r}")
                x = op["x"]
                y = op.get("y", 0)
                if kind in (OpKind.EQUATE, OpKind.TEST) and "y" not in op:
                    raise ScenarioError(f"{op['op']} needs both x and y")
                progs.append(ThreadProgram(kind, x, y, LinkPolicy(policy)))
            threads.append(tuple(progs))
        mode = doc.get("mode", "exhaustive")
        seed, samples = 0, 100
        if isinstance(mode, dict):
            rnd = mode.get("random")
            if not isinstance(rnd, dict):
                raise ScenarioError("mode object must be {\"random\": {...}}")
            seed = int(rnd.get("seed", 0))
            samples = int(rnd.get("samples", 100))
            mode = "random"
        checks = doc.get("checks")
        checks = frozenset(checks) if checks is not None else frozenset(CHECKS) - {"refinement"}
        return Scenario(
            n=n,
            threads=tuple(threads),
            policy=LinkPolicy(policy),
            initial=tuple(doc["initial"]) if doc.get("initial") is not None else None,
            mode=mode,
            seed=seed,
            samples=samples,
            step_bound=int(doc.get("stepBound", DEFAULT_STEP_BOUND)),
            checks=checks,
            rely_violation_demo=bool(doc.get("relyViolationDemo", False)),
            op_budget=doc.get("opBudget"),
        )
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario: {exc}") from exc


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return scenario_from_json(doc)


def scenario_to_json(scn: Scenario) -> dict:
    doc = {
        "n": scn.n,
        "policy": scn.policy.value,
        "threads": [[_op_json(p) for p in script] for script in scn.threads],
        "mode": "exhaustive" if scn.mode == "exhaustive"
        else {"random": {"seed": scn.seed, "samples": scn.samples}},
        "stepBound": scn.step_bound,
        "checks": sorted(scn.checks),
    }
    if scn.initial != tuple(range(scn.n)):
        doc["initial"] = list(scn.initial)
    if scn.rely_violation_demo:
        doc["relyViolationDemo"] = True
    if scn.op_budget is not None:
        doc["opBudget"] = scn.op_budget
    return doc


def _op_json(p: ThreadProgram) -> dict:
    d = {"op": p.kind.value, "x": p.x}
    if p.kind in (OpKind.EQUATE, OpKind.TEST):
        d["y"] = p.y
    return d
