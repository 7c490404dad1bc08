"""Accelerated transfinite runner.

Successor steps are executed one at a time.  After each step the current
level-0 window (all configurations since the last limit) is searched for a
lasso: two consecutive periods with the same line/test-outcome sequence and a
uniform non-negative register shift.  A certified lasso licenses a jump to
``sigma + period * w`` with the lim inf rule applied.

Configurations reached by level-k limits are collected as anchors of a
level-(k+1) window, and the same two-matching-periods rule is applied to the
blocks between anchors.  A limit that reproduces its own start configuration
with zero shift is a strong loop and ends the run with ``Diverge``.
"""

from __future__ import annotations

from itertools import chain
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..isa import COPY, HALT, INC, JEQ, ORACLE, ZERO, Program
from ..oracles import Oracle, UnresolvedBit, Zeros
from ..ordinals import ZERO as ORD0, Ordinal, OrdinalOverflowError, add, subtract
from .core import (DEFAULT_BUDGET, Budget, BudgetExceeded, Diverge, Halt, LoopCertificate,
                   apply_limit, cert_token, digest_tokens, first_zero, item_holds, step_item,
                   step_token, with_level)
from .trace import Trace

# how many earlier visits of the current line are tried as period candidates
OCC_SCAN = 64

_MOD = (1 << 61) - 1
_MUL = 1_000_003
_POW = [1]

_OPNUM = {HALT: 0, ZERO: 1, INC: 2, COPY: 3, JEQ: 4, ORACLE: 5}


def _pow(k: int) -> int:
    while len(_POW) <= k:
        _POW.append(_POW[-1] * _MUL % _MOD)
    return _POW[k]


def _uniform_shift(r0, r1, r2) -> Optional[Tuple[int, ...]]:
    """r1 - r0 if it equals r2 - r1 and is non-negative."""
    delta = tuple(b - a for a, b in zip(r0, r1))
    for d, b, c in zip(delta, r1, r2):
        if d < 0 or c - b != d:
            return None
    return delta


class _Closed:
    """A finished window together with the certificate that ended it."""

    __slots__ = ("level", "cert", "start", "outline", "shape", "lines", "regs", "blocks")

    def __init__(self, level, cert, start, outline, shape, lines=None, regs=None, blocks=None):
        self.level = level
        self.cert = cert
        self.start = start
        # top-level content before the certificate's start: step tuples and certificates
        self.outline = outline
        self.shape = shape
        self.lines = lines
        self.regs = regs
        self.blocks = blocks

    def points(self) -> Iterator[Tuple[int, tuple]]:
        if self.level == 0:
            return zip(self.lines, self.regs)
        return chain.from_iterable(b.points() for b in self.blocks)

    def full_outline(self) -> list:
        return self.outline + [self.cert]


def _shifted_points(a: _Closed, b: _Closed, delta) -> bool:
    for (_, ra), (_, rb) in zip(a.points(), b.points()):
        for x, y, d in zip(ra, rb, delta):
            if y - x != d:
                return False
    return True


class _Window0:
    __slots__ = ("base", "off", "lines", "regs", "outs", "hashes", "occ", "blocked", "rejected")

    def __init__(self, base: Ordinal, off: int, line: int, regs: tuple):
        self.base, self.off = base, off
        self.lines = [line]
        self.regs = [regs]
        self.outs: List[Optional[bool]] = []
        self.hashes = [0]
        self.occ: Dict[int, List[int]] = {}
        self.blocked: Dict[int, int] = {}
        self.rejected = False

    def time(self, i: int) -> Ordinal:
        return add(self.base, self.off + i)

    def push(self, out, line, regs):
        tok = self.lines[-1] * 3 + (0 if out is None else 1 + out) + 1
        self.hashes.append((self.hashes[-1] * _MUL + tok) % _MOD)
        self.outs.append(out)
        self.lines.append(line)
        self.regs.append(regs)

    def _span_hash(self, a, b):
        return (self.hashes[b] - self.hashes[a] * _pow(b - a)) % _MOD

    def detect(self, instrs, max_period: int):
        n = len(self.lines) - 1
        line = self.lines[n]
        occ = self.occ.setdefault(line, [])
        regs = self.regs
        best = None
        scanned = 0
        for p in reversed(occ):
            P = n - p
            s = p - P
            if P > max_period or s < 0 or scanned >= OCC_SCAN:
                break
            scanned += 1
            if self.blocked.get(P, -1) > n or self.lines[s] != line:
                continue
            delta = _uniform_shift(regs[s], regs[p], regs[n])
            if delta is None or self._span_hash(s, p) != self._span_hash(p, n):
                continue
            if self._certifiable(s, P, delta, instrs):
                best = (s, P, delta)  # later candidates have larger P, earlier start
            else:
                self.rejected = True
        occ.append(n)
        return best

    def _certifiable(self, s, P, delta, instrs) -> bool:
        lines, outs, regs = self.lines, self.outs, self.regs
        m, n = s + P, s + 2 * P
        if lines[s:m] != lines[m:n] or outs[s:m] != outs[m:n]:
            return False
        for i in range(s, m + 1):
            for x, y, d in zip(regs[i], regs[i + P], delta):
                if y - x != d:
                    return False
        for i in range(s, m):
            ins = instrs[lines[i]]
            if ins.op == JEQ:
                a, b = ins.args[0], ins.args[1]
                d = regs[i][a] - regs[i][b]
                c = delta[a] - delta[b]
                if d == 0:
                    if c:
                        return False
                elif c:
                    k = first_zero(d, c)
                    if k is not None:
                        # the test flips after k repetitions; skip this period until then
                        self.blocked[P] = i + k * P
                        return False
            elif ins.op == ORACLE and delta[ins.args[0]]:
                return False
        return True

    def close(self, s, P, delta, instrs) -> _Closed:
        lines, outs, regs = self.lines, self.outs, self.regs
        seg = range(s, s + P)
        minima = tuple(map(min, zip(*regs[s:s + P])))
        items = []
        for i in seg:
            it = step_item(instrs[lines[i]], regs[i])
            if it is not None:
                items.append(with_level(it, delta))
        cert = LoopCertificate(
            level=0,
            start=self.time(s),
            period=Ordinal.finite(P),
            start_line=lines[s],
            start_registers=regs[s],
            digest=digest_tokens([step_token(lines[i], outs[i]) for i in seg]),
            delta=delta,
            minima=minima,
            min_line=min(lines[s:s + P]),
            children=(),
            constraints=tuple(items),
        )
        outline = [(lines[i], regs[i], outs[i]) for i in range(s)]
        shape = (0, tuple(lines), tuple(outs), s, P)
        return _Closed(0, cert, (self.time(0), lines[0], regs[0]), outline, shape,
                       lines=lines, regs=regs)


class _Upper:
    """Anchors are configurations at level-(k-1) limits; blocks lie between them."""

    __slots__ = ("level", "anchors", "blocks")

    def __init__(self, level: int, first_anchor):
        self.level = level
        self.anchors = [first_anchor]
        self.blocks: List[_Closed] = []

    def detect(self, instrs, max_period: int):
        n = len(self.blocks)
        a = self.anchors
        _, ln, rn = a[n]
        blocks = self.blocks
        for K in range(min(n // 2, max_period), 0, -1):
            s = n - 2 * K
            m = s + K
            if a[s][1] != ln or a[m][1] != ln:
                continue
            delta = _uniform_shift(a[s][2], a[m][2], rn)
            if delta is None:
                continue
            if any(blocks[s + i].shape != blocks[m + i].shape for i in range(K)):
                continue
            if not all(_shifted_points(blocks[s + i], blocks[m + i], delta) for i in range(K)):
                continue
            if all(item_holds(with_level(it, delta))
                   for it in _segment_items(blocks[s:m], instrs)):
                return s, K, delta
        return None

    def close(self, s, K, delta, instrs) -> _Closed:
        a = self.anchors
        seg = self.blocks[s:s + K]
        outline_seg = [el for b in seg for el in b.full_outline()]
        tokens = [cert_token(el) if isinstance(el, LoopCertificate) else step_token(el[0], el[2])
                  for el in outline_seg]
        pts = [p for b in seg for p in b.points()]
        cert = LoopCertificate(
            level=self.level,
            start=a[s][0],
            period=subtract(a[s + K][0], a[s][0]),
            start_line=a[s][1],
            start_registers=a[s][2],
            digest=digest_tokens(tokens),
            delta=delta,
            minima=tuple(map(min, zip(*(r for _, r in pts)))),
            min_line=min(l for l, _ in pts),
            children=tuple(el for el in outline_seg if isinstance(el, LoopCertificate)),
            constraints=tuple(with_level(it, delta) for it in _segment_items(seg, instrs)),
        )
        outline = [el for b in self.blocks[:s] for el in b.full_outline()]
        shape = (self.level, tuple(b.shape for b in self.blocks), s, K)
        return _Closed(self.level, cert, a[0], outline, shape, blocks=self.blocks)


def _segment_items(blocks: Sequence[_Closed], instrs):
    for b in blocks:
        for el in b.full_outline():
            if isinstance(el, LoopCertificate):
                yield from el.constraints
            else:
                it = step_item(instrs[el[0]], el[1])
                if it is not None:
                    yield it


class _Runner:
    def __init__(self, program: Program, oracle: Oracle, budget: Budget, record_trace: bool):
        self.program = program
        self.oracle = oracle
        self.budget = budget
        self.trace = Trace(record_trace)
        self.nesting_hit = False

    def execute(self, input: int):
        verdict = self._go(input)
        self.trace.end(verdict)
        return verdict, self.trace

    def _go(self, input: int):
        program, budget, trace = self.program, self.budget, self.trace
        instrs = program.instructions
        L = len(instrs)
        ops = [(_OPNUM[i.op],) + tuple(i.args) + (0,) * (3 - len(i.args)) for i in instrs]
        halting = [False] * L + [True]
        for k, o in enumerate(ops):
            halting[k] = o[0] == 0
        nreg = max(program.register_count, 1)
        regs0 = [0] * nreg
        regs0[0] = input
        start = tuple(regs0)
        w = _Window0(ORD0, 0, 0, start)
        trace.step(ORD0, 0, 0, start)
        uppers: Dict[int, _Upper] = {}
        steps = 0
        limits = 0
        max_steps = budget.max_successor_steps
        max_period = budget.max_period
        bit = self.oracle.bit

        while True:
            line = w.lines[-1]
            cur = w.regs[-1]
            if halting[line]:
                return Halt(cur[0], w.time(len(w.lines) - 1))
            if steps >= max_steps:
                if w.rejected:
                    return BudgetExceeded("period_search")
                return BudgetExceeded("nesting" if self.nesting_hit else "steps")
            op, a, b, t = ops[line]
            out = None
            nl = line + 1
            if op == 4:
                out = cur[a] == cur[b]
                if out:
                    nl = t
                new = cur
            else:
                regs = list(cur)
                if op == 1:
                    regs[a] = 0
                elif op == 2:
                    regs[a] += 1
                elif op == 3:
                    regs[b] = regs[a]
                else:
                    try:
                        regs[a] = bit(regs[a])
                    except UnresolvedBit:
                        return BudgetExceeded("oracle")
                new = tuple(regs)
            steps += 1
            w.push(out, nl, new)
            trace.step(w.base, w.off + len(w.lines) - 1, nl, new)
            if halting[nl]:
                continue
            found = w.detect(instrs, max_period)
            if found is None:
                continue

            closed = w.close(*found, instrs)
            level = 0
            while True:
                cert = closed.cert
                limits += 1
                if limits > budget.max_limit_events:
                    return BudgetExceeded("limit_events")
                try:
                    conf = apply_limit(cert)
                except OrdinalOverflowError:
                    return BudgetExceeded("nesting")
                trace.limit(conf.clock, level, cert.start, cert.period, conf.line, conf.registers,
                            cert)
                if (not any(cert.delta) and conf.line == cert.start_line
                        and conf.registers == cert.start_registers):
                    return Diverge(cert)
                for k in [k for k in uppers if k <= level]:
                    del uppers[k]
                up = uppers.get(level + 1)
                if up is None:
                    up = uppers[level + 1] = _Upper(level + 1, closed.start)
                up.blocks.append(closed)
                up.anchors.append((conf.clock, conf.line, conf.registers))
                if halting[conf.line]:
                    break
                if level + 1 >= budget.max_nesting_level:
                    self.nesting_hit = True
                    break
                found = up.detect(instrs, max_period)
                if found is None:
                    break
                closed = up.close(*found, instrs)
                del uppers[level + 1]
                level += 1
            w = _Window0(conf.clock, 0, conf.line, conf.registers)


def run(program: Program, oracle: Optional[Oracle] = None, budget: Budget = DEFAULT_BUDGET,
        *, input: int = 0, record_trace: bool = True):
    """Run ``program`` on ``input`` with ``oracle``; returns ``(verdict, trace)``."""
    return _Runner(program, oracle if oracle is not None else Zeros(), budget,
                   record_trace).execute(input)


def detect_lasso(configs: Sequence, program: Program,
                 budget: Budget = DEFAULT_BUDGET) -> Optional[LoopCertificate]:
    """Best level-0 certificate over a stored run segment, or None.

    ``configs`` are consecutive successor-step configurations.  Every pair
    (sigma, P) with sigma + 2P inside the segment is tried; the least sigma
    wins, then the least P.
    """
    if not configs:
        return None
    instrs = program.instructions
    c0 = configs[0]
    w = _Window0(c0.clock, 0, c0.line, tuple(c0.registers))
    for prev, c in zip(configs, configs[1:]):
        ins = instrs[prev.line]
        out = prev.registers[ins.args[0]] == prev.registers[ins.args[1]] if ins.op == JEQ else None
        w.push(out, c.line, tuple(c.registers))
    n = len(configs) - 1
    for s in range(n):
        for P in range(1, min((n - s) // 2, budget.max_period) + 1):
            if w.lines[s] != w.lines[s + P] or w.lines[s] != w.lines[s + 2 * P]:
                continue
            delta = _uniform_shift(w.regs[s], w.regs[s + P], w.regs[s + 2 * P])
            if delta is not None and w._certifiable(s, P, delta, instrs):
                return w.close(s, P, delta, instrs).cert
    return None
