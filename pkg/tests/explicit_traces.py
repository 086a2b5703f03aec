"""Naive reference semantics: trace sets as explicit sets of (run, status).

Written independently of the symbolic canonical form in the model and used
only as a test oracle.  Runs are tuples (s0, l1, s1, ...); every set is
closed under the same conventions: an aborted run brings every extension
with every status, every trace's run is also pending together with all of
its prefixes, and zero-step pending traces are always present.
"""

from itertools import product

from rgforest.trace_algebra.model import (
    ABORT, EPS, PEND, PI, TERM, Abort, Conj, Env, FinIter, Inv, Nondet, OmIter, Par, Pgm, Seq,
    Test, WeakConj, expand, cstep, seq, Assert,
)


def runs_upto(space, bound):
    out = []
    for k in range(bound + 1):
        for states in product(space.states, repeat=k + 1):
            for labels in product((PI, EPS), repeat=k):
                run = [states[0]]
                for lab, s in zip(labels, states[1:]):
                    run += [lab, s]
                out.append(tuple(run))
    return out


class Explicit:
    def __init__(self, space, bound):
        self.space, self.bound = space, bound
        self.runs = runs_upto(space, bound)
        self.universe = frozenset((r, st) for r in self.runs for st in (TERM, PEND, ABORT))

    def close(self, traces):
        out = set(traces)
        aborted = {r for r, st in out if st == ABORT}
        for r in self.runs:
            if any(r[:k] in aborted for k in range(1, len(r) + 1, 2)):
                out |= {(r, TERM), (r, PEND), (r, ABORT)}
        for r, _ in list(out):
            for k in range(1, len(r) + 1, 2):
                out.add((r[:k], PEND))
        out |= {((s,), PEND) for s in self.space.states}
        return frozenset(t for t in out if len(t[0]) <= 2 * self.bound + 1)

    def of(self, c):
        sp = self.space
        if isinstance(c, Test):
            return self.close(((s,), TERM) for s in c.p)
        if isinstance(c, (Pgm, Env)):
            lab = PI if isinstance(c, Pgm) else EPS
            if self.bound == 0:
                return self.close(())
            return self.close(((a, lab, b), TERM) for a, b in c.r)
        if isinstance(c, Abort):
            return self.universe
        if isinstance(c, Nondet):
            out = set()
            for x in c.cs:
                out |= self.of(x)
            return self.close(out)
        if isinstance(c, Seq):
            return self.seq(self.of(c.c), self.of(c.d))
        if isinstance(c, Conj):
            return self.of(c.c) & self.of(c.d)
        if isinstance(c, WeakConj):
            a, b = self.of(c.c), self.of(c.d)
            out = set(a & b)
            for mine, theirs in ((a, b), (b, a)):
                out |= {(r, ABORT) for r, st in mine if st == ABORT and (r, PEND) in theirs}
            return self.close(out)
        if isinstance(c, Par):
            return self.par(self.of(c.c), self.of(c.d))
        if isinstance(c, (FinIter, OmIter)):
            body = self.of(c.c)
            nil = self.close(((s,), TERM) for s in sp.states)
            y = self.universe if isinstance(c, OmIter) else self.close(())
            while True:
                ny = self.close(nil | self.seq(body, y))
                if ny == y:
                    return y
                y = ny
        if isinstance(c, Inv):
            maintain = sp.implies(sp.prer(c.inv), sp.postr(c.inv))
            return self.of(seq(Assert(c.inv), OmIter(cstep(maintain))))
        unfolded = expand(c, sp)
        if unfolded is None:
            raise NotImplementedError(type(c).__name__)
        return self.of(unfolded)

    def seq(self, a, b):
        out = {(r, st) for r, st in a if st != TERM}
        for r1, st1 in a:
            if st1 != TERM:
                continue
            for r2, st2 in b:
                if r2[0] == r1[-1] and len(r1) + len(r2) - 1 <= 2 * self.bound + 1:
                    out.add((r1 + r2[1:], st2))
        return self.close(out)

    def par(self, a, b):
        def padded(traces):
            # a terminated trace may be followed by environment steps; the
            # padding flag keeps two padded sides from running on together
            out = {(r, st, False) for r, st in traces}
            for r, st in traces:
                if st != TERM:
                    continue
                for ext in self.runs:
                    if len(ext) > len(r) and ext[:len(r)] == r and all(ext[i] == EPS for i in range(len(r), len(ext), 2)):
                        out.add((ext, TERM, True))
            return out

        pa, pb = padded(a), padded(b)
        index = {}
        for r, st, pad in pb:
            index.setdefault(r[0::2], []).append((r[1::2], st, pad))
        out = set()
        for r, st, pad1 in pa:
            for labels, st2, pad2 in index.get(r[0::2], ()):
                if pad1 and pad2:
                    continue
                merged = []
                for x, y in zip(r[1::2], labels):
                    if x == PI and y == PI:
                        break
                    merged.append(PI if PI in (x, y) else EPS)
                else:
                    status = ABORT if ABORT in (st, st2) else TERM if st == st2 == TERM else PEND
                    run = [r[0]]
                    for lab, s in zip(merged, r[2::2]):
                        run += [lab, s]
                    out.add((tuple(run), status))
        return self.close(out)
