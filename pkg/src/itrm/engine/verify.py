"""Independent certificate checker.

The checker knows nothing about how certificates are found.  It replays two
periods from the certificate's start configuration using only the successor
step and the limit rule (applied to the certificate's own children, which are
themselves replayed and checked), then confirms the claimed digest, shift,
lim inf data and the stability of every test executed in the first period.
"""

from __future__ import annotations

from typing import List, Tuple

from ..isa import Program
from ..oracles import Oracle, UnresolvedBit
from ..ordinals import Ordinal, OrdinalError, add, compare, subtract
from .core import (Configuration, LoopCertificate, apply_limit, cert_token, digest_tokens,
                   is_halting, item_holds, outcome_of, step, step_item, step_token, with_level)

DEFAULT_MAX_STEPS = 10_000_000


class _Reject(Exception):
    pass


class _Replayer:
    def __init__(self, program: Program, oracle: Oracle, max_steps: int):
        self.p = program
        self.x = oracle
        self.left = max_steps

    def _walk(self, c: Configuration, children, end: Ordinal):
        """Run from ``c`` to time ``end``; returns (end config, points, tokens, items)."""
        points = [(c.line, c.registers)]
        tokens: List[list] = []
        items: List[tuple] = []
        for child in list(children) + [None]:
            target = end if child is None else child.start
            if compare(target, c.clock) < 0:
                raise _Reject("child out of order")
            gap = subtract(target, c.clock)
            if not gap.is_finite:
                raise _Reject("unaccounted limit inside period")
            n = int(gap)
            if n > self.left:
                raise _Reject("replay too long")
            self.left -= n
            for _ in range(n):
                if is_halting(self.p, c.line):
                    raise _Reject("halts inside period")
                ins = self.p[c.line]
                it = step_item(ins, c.registers)
                if it is not None:
                    items.append(it)
                tokens.append(step_token(c.line, outcome_of(ins, c.registers)))
                c = step(c, self.p, self.x)
                points.append((c.line, c.registers))
            if child is None:
                break
            if child.start_line != c.line or child.start_registers != c.registers:
                raise _Reject("child does not start at the replayed configuration")
            cpoints, citems = self.replay(child)
            points.extend(cpoints)
            items.extend(citems)
            tokens.append(cert_token(child))
            c = apply_limit(child)
            points.append((c.line, c.registers))
        return c, points, tokens, items

    def replay(self, cert: LoopCertificate) -> Tuple[list, list]:
        """Check ``cert``; returns its points over two periods and its first-period items."""
        if any(d < 0 for d in cert.delta):
            raise _Reject("negative shift")
        if cert.level < 0 or any(ch.level >= cert.level for ch in cert.children):
            raise _Reject("child level")
        if cert.level > 0 and not any(ch.level == cert.level - 1 for ch in cert.children):
            raise _Reject("level not witnessed by children")
        if cert.level == 0 and (cert.children or not cert.period.is_finite or int(cert.period) < 1):
            raise _Reject("bad level-0 period")
        if len(cert.start_registers) != max(self.p.register_count, 1):
            raise _Reject("register count")
        start = cert.start_configuration
        mid_t = add(cert.start, cert.period)
        end_t = add(mid_t, cert.period)
        mid, pts0, tok0, items = self._walk(start, cert.children, mid_t)
        delta = tuple(b - a for a, b in zip(start.registers, mid.registers))
        if delta != tuple(cert.delta):
            raise _Reject("shift mismatch")
        shifted = [ch.shifted(cert.start, mid_t, delta) for ch in cert.children]
        end, pts1, tok1, _ = self._walk(mid, shifted, end_t)
        if tok0 != tok1 or digest_tokens(tok0) != cert.digest:
            raise _Reject("digest")
        if len(pts0) != len(pts1):
            raise _Reject("period shape")
        for (l0, r0), (l1, r1) in zip(pts0, pts1):
            if l0 != l1 or any(b - a != d for a, b, d in zip(r0, r1, delta)):
                raise _Reject("non-uniform shift")
        if min(l for l, _ in pts0) != cert.min_line:
            raise _Reject("min line")
        if tuple(map(min, zip(*(r for _, r in pts0)))) != tuple(cert.minima):
            raise _Reject("minima")
        items = [with_level(it, delta) for it in items]
        if not all(item_holds(it) for it in items):
            raise _Reject("unstable test")
        return pts0 + pts1, items


def verify_certificate(program: Program, oracle: Oracle, cert: LoopCertificate,
                       max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """True iff replaying ``cert`` confirms every claim it makes."""
    try:
        _Replayer(program, oracle, max_steps).replay(cert)
    except (_Reject, UnresolvedBit, OrdinalError, IndexError, ValueError):
        return False
    return True


def verify_run(program: Program, oracle: Oracle, certificates, *, input: int = 0,
               verdict=None, max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """Check a run's certificate chain against the run itself, starting at time 0.

    ``certificates`` are the certificates whose limits were taken, in the
    order they were taken.  Each must start at a configuration the run really
    reaches at its claimed start time, and must pass :func:`verify_certificate`.
    If ``verdict`` is given it must follow from the final configuration.
    """
    nreg = max(program.register_count, 1)
    regs = [0] * nreg
    regs[0] = input
    c = Configuration(Ordinal.finite(0), 0, tuple(regs))
    seen = {c.clock: c}
    left = max_steps
    try:
        for cert in certificates:
            start = cert.start_configuration
            if compare(cert.start, c.clock) >= 0:
                gap = subtract(cert.start, c.clock)
                if not gap.is_finite or int(gap) > left:
                    return False
                left -= int(gap)
                for _ in range(int(gap)):
                    if is_halting(program, c.line):
                        return False
                    c = step(c, program, oracle)
                if (c.line, c.registers) != (start.line, start.registers):
                    return False
            else:
                # a higher-level loop closing at the current anchor
                if seen.get(cert.start) != start:
                    return False
                if add(add(cert.start, cert.period), cert.period) != c.clock:
                    return False
                shifted = tuple(r + 2 * d for r, d in zip(start.registers, cert.delta))
                if (c.line, c.registers) != (start.line, shifted):
                    return False
            if not verify_certificate(program, oracle, cert, max_steps):
                return False
            seen[cert.start] = start
            c = apply_limit(cert)
            seen[c.clock] = c
        if verdict is None:
            return True
        if verdict.kind == "diverge":
            last = certificates[-1] if certificates else None
            return (last is not None and last == verdict.certificate and not any(last.delta)
                    and (c.line, c.registers) == (last.start_line, last.start_registers))
        if verdict.kind == "halt":
            while not is_halting(program, c.line):
                if left <= 0:
                    return False
                left -= 1
                c = step(c, program, oracle)
            return c.registers[0] == verdict.output and c.clock == verdict.time
        return True
    except (UnresolvedBit, OrdinalError, IndexError, ValueError):
        return False
