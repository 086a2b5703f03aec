"""Concurrent Galler-Fischer operations as explicit step machines.

Each operation is an :class:`OpFrame` whose :meth:`OpFrame.step` performs
exactly one shared-memory access (read, write or CAS of one cell) and then
runs all following register-only code eagerly, stopping in front of the
next shared access.  The same frames are driven by the deterministic
scheduler in :mod:`rgforest.rg_harness` (virtual mode) and by real threads
in :func:`run_native` (native mode).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Protocol, Sequence

from .forest import Forest
from .relation_core import ElementDomain


class LinkPolicy(str, Enum):
    ORDERED = "ordered"
    UNORDERED = "unordered"


class OpKind(str, Enum):
    ROOT_OF = "root_of"
    TEST = "test"
    EQUATE = "equate"
    CLEAN_UP = "clean_up"


@dataclass(frozen=True)
class Faults:
    """Deliberate implementation bugs, used to show the checkers bite."""

    skip_cleanup_last_write: bool = False
    cleanup_wrong_target: bool = False

    @property
    def any(self) -> bool:
        return self.skip_cleanup_last_write or self.cleanup_wrong_target


NO_FAULTS = Faults()


class BudgetExceeded(RuntimeError):
    pass


class Memory(Protocol):
    def read(self, i: int) -> int: ...
    def write(self, i: int, v: int) -> None: ...
    def cas(self, i: int, expect: int, new: int, note=None) -> bool: ...


class Cells:
    """Plain cell array for single-threaded (virtual) execution."""

    __slots__ = ("cells",)

    def __init__(self, parent: Iterable[int]):
        self.cells = list(parent)

    def read(self, i: int) -> int:
        return self.cells[i]

    def write(self, i: int, v: int) -> None:
        self.cells[i] = v

    def cas(self, i: int, expect: int, new: int, note=None) -> bool:
        if self.cells[i] != expect:
            return False
        self.cells[i] = new
        return True

    def snapshot(self) -> tuple[int, ...]:
        return tuple(self.cells)


class SharedForest:
    """Parent array shared between real threads.

    CPython exposes no user-level compare-and-swap, so each cell carries a
    lock held only for the duration of a write or CAS.  Reads of a list slot
    are atomic under the interpreter lock.  Successful CASes that carry a
    ``note`` are appended to ``link_log`` with a global sequence number taken
    while the cell lock is held.
    """

    def __init__(self, domain: ElementDomain | int, parent: Sequence[int] | None = None):
        self.domain = domain if isinstance(domain, ElementDomain) else ElementDomain(domain)
        n = self.domain.n
        self.cells = list(range(n) if parent is None else parent)
        self.domain.check(*self.cells)
        if len(self.cells) != n:
            raise ValueError("parent map length does not match domain")
        self._locks = [threading.Lock() for _ in range(n)]
        self._seq = itertools.count()
        self.link_log: list[tuple[int, object]] = []

    def read(self, i: int) -> int:
        return self.cells[i]

    def write(self, i: int, v: int) -> None:
        with self._locks[i]:
            self.cells[i] = v

    def cas(self, i: int, expect: int, new: int, note=None) -> bool:
        with self._locks[i]:
            if self.cells[i] != expect:
                return False
            self.cells[i] = new
            if note is not None:
                self.link_log.append((next(self._seq), note))
            return True

    def snapshot(self) -> Forest:
        return Forest(self.domain, tuple(self.cells))


def cas_cell(sf: Memory, i: int, expect: int, new: int) -> bool:
    return sf.cas(i, expect, new)


# program counters: the shared access the frame performs on its next step
WALK_X = "walk_x"
WALK_Y = "walk_y"
GUARD_X = "guard_x"
GUARD_Y = "guard_y"
CAS = "cas"
READ_FX = "read_fx"
WRITE = "write"
DONE = "done"


@dataclass
class StepEvent:
    access: str
    cell: int
    value: int
    success: bool = True
    linked: bool = False
    # (label, registers) for each annotated clean_up point passed in this step
    points: list = field(default_factory=list)


@dataclass
class OpFrame:
    kind: OpKind
    arg_x: int
    arg_y: int = 0
    policy: LinkPolicy = LinkPolicy.ORDERED
    faults: Faults = NO_FAULTS
    x: int = 0
    y: int = 0
    rx: int = 0
    ry: int = 0
    fx: int = 0
    done: bool = False
    t: bool = False
    pc: str = WALK_X
    result: object = None
    steps: int = 0
    walk_serial: int = 0
    iter_start: bool = False
    # snapshots filled in by whoever drives the frame
    f_invoke: tuple | None = None
    f_return: tuple | None = None
    f0: tuple | None = None

    @property
    def finished(self) -> bool:
        return self.pc == DONE

    def copy(self) -> "OpFrame":
        return replace(self)

    def _start_walk(self, pc: str) -> None:
        self.walk_serial += 1
        self.pc = pc

    def boundaries(self) -> list[tuple[tuple, str]]:
        """Loop-iteration boundaries the frame sits at before its next step.

        Each entry is ``(loop_key, measure)``; ``measure`` names the distance
        term of the loop's variant.
        """
        out = []
        pc = self.pc
        if pc == WALK_X:
            if self.kind is OpKind.EQUATE and self.iter_start:
                out.append((("equate",), "rx"))
            out.append((("walk", self.walk_serial), "rx"))
        elif pc == WALK_Y:
            out.append((("walk", self.walk_serial), "ry"))
        elif pc == GUARD_X:
            out.append((("test",), "rx+ry"))
        elif pc == READ_FX:
            out.append((("clean_up",), "x->rx"))
        return out

    def waiting_point(self) -> str | None:
        """Annotated clean_up assertion the frame currently rests at."""
        if self.kind is not OpKind.CLEAN_UP:
            return None
        if self.pc == READ_FX:
            return "body"
        if self.pc == WRITE:
            return "after_read"
        return None

    def regs(self) -> dict:
        return {"x": self.x, "rx": self.rx, "fx": self.fx}

    def step(self, mem: Memory) -> StepEvent:
        """Perform one shared access, then local code up to the next one."""
        if self.pc == DONE:
            raise RuntimeError("operation already returned")
        self.steps += 1
        pc = self.pc
        kind = self.kind

        if pc == WALK_X or pc == WALK_Y:
            self.iter_start = False
            reg = "rx" if pc == WALK_X else "ry"
            cur = getattr(self, reg)
            v = mem.read(cur)
            ev = StepEvent("read", cur, v)
            if v != cur:
                setattr(self, reg, v)
                return ev
            # walk finished: cur is a root at the instant of this read
            if kind is OpKind.ROOT_OF:
                self.result = self.rx
                self.pc = DONE
            elif kind is OpKind.CLEAN_UP:
                self._cleanup_loop_head(ev)
            elif pc == WALK_X:
                self._start_walk(WALK_Y)
            elif kind is OpKind.TEST:
                self.pc = GUARD_X
            else:
                self.pc = CAS
            return ev

        if pc == GUARD_X or pc == GUARD_Y:
            reg = self.rx if pc == GUARD_X else self.ry
            v = mem.read(reg)
            ev = StepEvent("read", reg, v)
            if v != reg:
                self._start_walk(WALK_X)
            elif pc == GUARD_X:
                self.pc = GUARD_Y
            else:
                self.t = self.rx == self.ry
                self.result = self.t
                self.pc = DONE
            return ev

        if pc == CAS:
            rx, ry = self.rx, self.ry
            if rx == ry:
                target, new = rx, rx
            elif self.policy is LinkPolicy.ORDERED:
                target, new = min(rx, ry), max(rx, ry)
            else:
                target, new = rx, ry
            linking = target != new
            ok = mem.cas(target, target, new, note=(self.arg_x, self.arg_y) if linking else None)
            self.done = ok
            ev = StepEvent("cas", target, new, success=ok, linked=ok and linking)
            if ok:
                self.pc = DONE
            else:
                self.iter_start = True
                self._start_walk(WALK_X)
            return ev

        if pc == READ_FX:
            self.fx = mem.read(self.x)
            ev = StepEvent("read", self.x, self.fx)
            ev.points.append(("after_read", self.regs()))
            self.pc = WRITE
            return ev

        if pc == WRITE:
            x, rx = self.x, self.rx
            f = self.faults
            if f.skip_cleanup_last_write and self.fx != rx and mem.read(self.fx) == rx:
                # x is the last node whose write changes anything; the fault
                # replaces that write by the read above
                ev = StepEvent("read", self.fx, rx)
            else:
                target = x if f.cleanup_wrong_target else rx
                mem.write(x, target)
                ev = StepEvent("write", x, target)
            ev.points.append(("after_write", self.regs()))
            self.x = self.fx
            self._cleanup_loop_head(ev)
            return ev

        raise RuntimeError(f"unknown program counter {pc!r}")

    def _cleanup_loop_head(self, ev: StepEvent) -> None:
        ev.points.append(("inv", self.regs()))
        if self.x == self.rx:
            self.pc = DONE
        else:
            ev.points.append(("body", self.regs()))
            self.pc = READ_FX


@dataclass(frozen=True)
class ThreadProgram:
    """A not-yet-started operation invocation."""

    kind: OpKind
    x: int
    y: int = 0
    policy: LinkPolicy = LinkPolicy.ORDERED

    def start(self, faults: Faults = NO_FAULTS) -> OpFrame:
        fr = OpFrame(self.kind, self.x, self.y, self.policy, faults)
        fr.x, fr.y = self.x, self.y
        fr.rx, fr.ry = self.x, self.y
        if self.kind is OpKind.TEST:
            fr.pc = GUARD_X
        else:
            fr.walk_serial = 1
            fr.pc = WALK_X
            fr.iter_start = self.kind is OpKind.EQUATE
        return fr

    def describe(self) -> str:
        if self.kind in (OpKind.TEST, OpKind.EQUATE):
            return f"{self.kind.value}({self.x},{self.y})"
        return f"{self.kind.value}({self.x})"


def build_root_of(x: int) -> ThreadProgram:
    return ThreadProgram(OpKind.ROOT_OF, x)


def build_test(x: int, y: int) -> ThreadProgram:
    return ThreadProgram(OpKind.TEST, x, y)


def build_equate(x: int, y: int, policy: LinkPolicy = LinkPolicy.ORDERED) -> ThreadProgram:
    return ThreadProgram(OpKind.EQUATE, x, y, LinkPolicy(policy))


def build_clean_up(x: int) -> ThreadProgram:
    return ThreadProgram(OpKind.CLEAN_UP, x)


def run_sequential(prog: ThreadProgram, mem: Memory, budget: int | None = None,
                   faults: Faults = NO_FAULTS) -> tuple[object, int]:
    """Run one operation to completion without interference.

    Returns ``(result, shared_steps)``.
    """
    fr = prog.start(faults)
    while not fr.finished:
        if budget is not None and fr.steps >= budget:
            raise BudgetExceeded(f"{prog.describe()} exceeded {budget} steps")
        fr.step(mem)
    return fr.result, fr.steps


@dataclass
class NativeResult:
    forest: Forest
    link_log: list
    results: list[list]
    ops: int


def run_native(scripts: Sequence[Sequence[ThreadProgram]], sf: SharedForest,
               budget: int | None = None) -> NativeResult:
    """Run each script on its own thread against ``sf``.

    At most one script may contain clean_up operations.
    """
    cleaners = sum(any(p.kind is OpKind.CLEAN_UP for p in s) for s in scripts)
    if cleaners > 1:
        raise ValueError("clean_up may run on at most one thread")
    results: list[list] = [[] for _ in scripts]
    errors: list[BaseException] = []
    start = threading.Barrier(len(scripts)) if scripts else None

    def worker(i: int) -> None:
        try:
            start.wait()
            out = results[i]
            for prog in scripts[i]:
                fr = prog.start()
                while not fr.finished:
                    if budget is not None and fr.steps >= budget:
                        raise BudgetExceeded(f"{prog.describe()} exceeded {budget} steps")
                    fr.step(sf)
                out.append(fr.result)
        except BaseException as exc:  # reported to the caller below
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(len(scripts))]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    if errors:
        raise errors[0]
    return NativeResult(sf.snapshot(), list(sf.link_log), results, sum(len(s) for s in scripts))
