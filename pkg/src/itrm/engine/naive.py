"""Reference runner that keeps the whole history and searches it exhaustively.

It exists to cross-check :func:`itrm.engine.run`.  Every configuration reached
is kept in one flat list.  After each new entry every admissible start is
tried, least first, with no hashing, caching or pruning: two consecutive
stretches must agree entry by entry (lines, test outcomes, limit marks and the
shape of the loops inside them) with a uniform register shift.  Limits are
taken directly as the lim inf over the recorded stretch.  Quadratic memory and
cubic time; only meant for small budgets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from ..isa import JEQ, ORACLE, Program
from ..oracles import Oracle, UnresolvedBit, Zeros
from ..ordinals import ZERO as ORD0, Ordinal, OrdinalOverflowError, add, subtract, times_omega
from .trace import Trace
from .core import (DEFAULT_BUDGET, Budget, BudgetExceeded, Configuration, Halt, is_halting,
                   never_zero, step)


@dataclass
class _Entry:
    time: Ordinal
    line: int
    regs: Tuple[int, ...]
    outcome: Optional[bool] = None  # of the instruction executed here
    mark: Optional[int] = None  # level of the limit that produced this entry
    lasso: Optional[Tuple[int, int, int]] = None  # (start, middle, end) indices


@dataclass(frozen=True)
class NaiveDiverge:
    level: int
    kind = "diverge"

    def __str__(self):
        return f"DIVERGE level={self.level}"


class _Naive:
    def __init__(self, program: Program, oracle: Oracle, budget: Budget):
        self.p = program
        self.x = oracle
        self.b = budget
        self.h: List[_Entry] = []

    def scope(self, level: int) -> int:
        for i in range(len(self.h) - 1, -1, -1):
            m = self.h[i].mark
            if m is not None and m >= level:
                return i
        return 0

    def anchors(self, level: int) -> List[int]:
        if level == 0:
            raise ValueError
        s = self.scope(level)
        return [s] + [i for i in range(s + 1, len(self.h)) if self.h[i].mark == level - 1]

    def _d(self, i, ins):
        r = self.h[i].regs
        return r[ins.args[0]] - r[ins.args[1]]

    def _same(self, a0: int, a1: int, n: int):
        """Compare history[a0:a1] with history[a1:n]; returns the shift or None."""
        h = self.h
        length = a1 - a0
        if n - a1 != length or length < 1:
            return None
        shift = tuple(y - x for x, y in zip(h[a0].regs, h[a1].regs))
        if any(d < 0 for d in shift):
            return None
        for i in range(a0, a1 + 1):
            e, f = h[i], h[i + length]
            if e.line != f.line:
                return None
            if any(y - x != d for x, y, d in zip(e.regs, f.regs, shift)):
                return None
            if i == a1:
                break
            if e.outcome != f.outcome:
                return None
            if i == a0:
                continue  # how the two stretches were entered may differ
            if e.mark != f.mark or (e.lasso is None) != (f.lasso is None):
                return None
            if e.lasso is not None and tuple(k - i for k in e.lasso) != tuple(k - i - length for k in f.lasso):
                return None
        return shift

    def _stable(self, a0: int, a1: int) -> bool:
        """Every test in history[a0:a1] keeps its outcome under all repetitions."""
        h = self.h
        length = a1 - a0
        loops = [h[j].lasso for j in range(a0 + 1, a1 + 1) if h[j].lasso is not None]
        for i in range(a0, a1):
            ins = self.p[h[i].line]
            if ins.op not in (JEQ, ORACLE):
                continue
            if h[i + 1].mark is not None:
                continue  # a limit was taken here instead of executing the instruction
            enclosing = [(s, m) for s, m, e in loops if s <= i < e]
            if any(i >= m for s, m in enclosing):
                continue  # a copy of an earlier entry
            spans = [m - s for s, m in enclosing] + [length]
            if ins.op == ORACLE:
                r = ins.args[0]
                if any(h[i + q].regs[r] != h[i].regs[r] for q in spans):
                    return False
            else:
                d = self._d(i, ins)
                coeffs = [self._d(i + q, ins) - d for q in spans]
                if d == 0:
                    if any(coeffs):
                        return False
                elif not never_zero(d, coeffs):
                    return False
        return True

    def _limit(self, a0: int, a1: int, n: int, level: int, shift):
        h = self.h
        seg = h[a0:n + 1]
        line = min(e.line for e in seg)
        regs = tuple(0 if d else min(e.regs[r] for e in seg) for r, d in enumerate(shift))
        t = add(h[a0].time, times_omega(subtract(h[a1].time, h[a0].time)))
        return _Entry(t, line, regs, mark=level, lasso=(a0, a1, n))

    def detect(self, level: int):
        n = len(self.h) - 1
        if level == 0:
            starts = list(range(self.scope(0), n))
            pairs = [(s, (s + n) // 2) for s in starts if (n - s) % 2 == 0
                     and (n - s) // 2 <= self.b.max_period]
        else:
            bs = self.anchors(level)
            m = len(bs) - 1
            pairs = [(bs[s], bs[(s + m) // 2]) for s in range(m) if (m - s) % 2 == 0
                     and (m - s) // 2 <= self.b.max_period]
        for a0, a1 in pairs:
            shift = self._same(a0, a1, n)
            if shift is not None and self._stable(a0, a1):
                return self._limit(a0, a1, n, level, shift)
        return None

    def trace(self, verdict, record: bool) -> Trace:
        tr = Trace(record)
        for e in self.h:
            if e.mark is None:
                tr.step(e.time, 0, e.line, e.regs)
            else:
                a0, a1, _ = e.lasso
                t0 = self.h[a0].time
                tr.limit(e.time, e.mark, t0, subtract(self.h[a1].time, t0), e.line, e.regs)
        tr.end(verdict)
        return tr

    def go(self, input: int):
        nreg = max(self.p.register_count, 1)
        regs = [0] * nreg
        regs[0] = input
        self.h.append(_Entry(ORD0, 0, tuple(regs)))
        steps = limits = 0
        while True:
            cur = self.h[-1]
            if is_halting(self.p, cur.line):
                return Halt(cur.regs[0], cur.time)
            found = None
            if cur.mark is None:
                if len(self.h) > 1:
                    found = self.detect(0)
            elif cur.mark + 1 < self.b.max_nesting_level:
                found = self.detect(cur.mark + 1)
            if found is not None:
                limits += 1
                if limits > self.b.max_limit_events:
                    return BudgetExceeded("limit_events")
                a0 = found.lasso[0]
                self.h.append(found)
                if (not any(x - y for x, y in zip(self.h[found.lasso[1]].regs, self.h[a0].regs))
                        and found.line == self.h[a0].line and found.regs == self.h[a0].regs):
                    return NaiveDiverge(found.mark)
                continue
            if steps >= self.b.max_successor_steps:
                return BudgetExceeded("steps")
            steps += 1
            ins = self.p[cur.line]
            if ins.op == JEQ:
                cur.outcome = cur.regs[ins.args[0]] == cur.regs[ins.args[1]]
            nxt = step(Configuration(cur.time, cur.line, cur.regs), self.p, self.x)
            self.h.append(_Entry(nxt.clock, nxt.line, nxt.registers))


def run_naive(program: Program, oracle: Optional[Oracle] = None,
              budget: Budget = DEFAULT_BUDGET, *, input: int = 0, record_trace: bool = True):
    """Same contract as :func:`itrm.engine.run`: returns ``(verdict, trace)``."""
    n = _Naive(program, oracle if oracle is not None else Zeros(), budget)
    try:
        verdict = n.go(input)
    except UnresolvedBit:
        verdict = BudgetExceeded("oracle")
    except OrdinalOverflowError:
        verdict = BudgetExceeded("nesting")
    return verdict, n.trace(verdict, record_trace)
