"""Goedel numbering of programs.

Programs are ordered by weight, then length, then lexicographically by
instruction.  The weight of a program is its length plus the sum of all of
its operands (register indices and jump targets), so only finitely many
programs share a weight and every natural number decodes to exactly one
syntactically valid program.  Index 0 is the empty program.

Restricting to programs with at most n registers gives a second enumeration
with the same order; both are computed by counting, never by filtering.

Instructions compare by opcode in the order HALT, ZERO, INC, COPY, JEQ,
ORACLE and then by operand tuple.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import count as _count
from typing import Iterator, List, Optional

from .isa import COPY, HALT, INC, JEQ, OPCODES, ORACLE, ZERO, Instruction, Program

_RANK = {op: i for i, op in enumerate(OPCODES)}


def instruction_weight(ins: Instruction) -> int:
    return sum(ins.args)


def program_weight(p: Program) -> int:
    return len(p) + sum(instruction_weight(i) for i in p)


def instruction_key(ins: Instruction):
    return (_RANK[ins.op], ins.args)


def _pairs(s: int, regs: Optional[int]) -> int:
    """Number of (a, b) with a + b == s and both below ``regs`` (if bounded)."""
    if regs is None:
        return s + 1
    return max(0, min(s, regs - 1) - max(0, s - regs + 1) + 1)


@lru_cache(maxsize=None)
def _instructions_of_weight(w: int, length: int, regs: Optional[int]) -> int:
    n = 1 if w == 0 else 0  # HALT
    if regs is None or w < regs:
        n += 3  # ZERO, INC, ORACLE
    n += _pairs(w, regs)  # COPY
    n += sum(_pairs(w - t, regs) for t in range(min(w, length) + 1))  # JEQ
    return n


@lru_cache(maxsize=None)
def _sequences(n: int, total: int, length: int, regs: Optional[int]) -> int:
    """Number of n-instruction sequences (targets <= length) of total weight ``total``."""
    if n == 0:
        return 1 if total == 0 else 0
    return sum(_instructions_of_weight(w, length, regs) * _sequences(n - 1, total - w, length, regs)
               for w in range(total + 1))


@lru_cache(maxsize=None)
def count_programs(weight: int, registers: Optional[int] = None) -> int:
    """Number of programs of the given weight (using fewer than ``registers`` registers)."""
    return sum(_sequences(L, weight - L, L, registers) for L in range(weight + 1))


def _candidates(max_weight: int, length: int, regs: Optional[int]) -> Iterator[Instruction]:
    """All instructions of weight <= max_weight, in key order."""
    top = max_weight if regs is None else min(max_weight, regs - 1)
    yield Instruction(HALT)
    for op in (ZERO, INC):
        for r in range(top + 1):
            yield Instruction(op, (r,))
    for a in range(top + 1):
        for b in range(min(max_weight - a, top) + 1):
            yield Instruction(COPY, (a, b))
    for a in range(top + 1):
        for b in range(min(max_weight - a, top) + 1):
            for t in range(min(length, max_weight - a - b) + 1):
                yield Instruction(JEQ, (a, b, t))
    for r in range(top + 1):
        yield Instruction(ORACLE, (r,))


def _check_bound(registers: Optional[int]) -> None:
    if registers is not None and registers < 1:
        raise ValueError("register bound must be >= 1")


def index_of(p: Program, registers: Optional[int] = None) -> int:
    """Position of ``p`` in the enumeration (of programs with at most ``registers`` registers)."""
    _check_bound(registers)
    if registers is not None and p.register_count > registers:
        raise ValueError(f"program uses {p.register_count} registers, bound is {registers}")
    W, L = program_weight(p), len(p)
    idx = sum(count_programs(w, registers) for w in range(W))
    idx += sum(_sequences(l, W - l, l, registers) for l in range(L))
    rem = W - L
    for k, ins in enumerate(p):
        key = instruction_key(ins)
        left = L - k - 1
        for c in _candidates(rem, L, registers):
            if instruction_key(c) >= key:
                break
            idx += _sequences(left, rem - instruction_weight(c), L, registers)
        rem -= instruction_weight(ins)
    return idx


def program_of(i: int, registers: Optional[int] = None) -> Program:
    """Inverse of :func:`index_of`."""
    _check_bound(registers)
    if i < 0:
        raise ValueError("program indices are natural numbers")
    W = 0
    while i >= count_programs(W, registers):
        i -= count_programs(W, registers)
        W += 1
    L = 0
    while i >= _sequences(L, W - L, L, registers):
        i -= _sequences(L, W - L, L, registers)
        L += 1
    rem = W - L
    out: List[Instruction] = []
    for k in range(L):
        left = L - k - 1
        for c in _candidates(rem, L, registers):
            n = _sequences(left, rem - instruction_weight(c), L, registers)
            if i < n:
                out.append(c)
                rem -= instruction_weight(c)
                break
            i -= n
    return Program(tuple(out))


def iter_programs(start: int = 0) -> Iterator[Program]:
    for i in _count(start):
        yield program_of(i)


def enumerate_bounded(n: int, count: int) -> List[Program]:
    """The first ``count`` programs using at most ``n`` registers, in index order."""
    _check_bound(n)
    return [program_of(i, n) for i in range(count)]
