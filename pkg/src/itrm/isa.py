"""Instruction set, assembler and disassembler.

Six instructions over natural-number registers::

    ZERO r      R[r] := 0
    INC r       R[r] := R[r] + 1
    COPY s d    R[d] := R[s]
    JEQ a b t   jump to line t if R[a] == R[b]
    ORACLE r    R[r] := x(R[r])
    HALT

Running past the last line halts as well.  Input is preloaded into r0 and the
output is read from r0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

# the assembler rejects larger register indices; decoded programs are not capped
MAX_REGISTERS = 256

ZERO, INC, COPY, JEQ, ORACLE, HALT = "ZERO", "INC", "COPY", "JEQ", "ORACLE", "HALT"
OPCODES = (HALT, ZERO, INC, COPY, JEQ, ORACLE)
ARITY = {ZERO: 1, INC: 1, COPY: 2, JEQ: 3, ORACLE: 1, HALT: 0}


class AsmError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Instruction:
    op: str
    args: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.op not in ARITY:
            raise ValueError(f"unknown opcode {self.op!r}")
        if len(self.args) != ARITY[self.op]:
            raise ValueError(f"{self.op} takes {ARITY[self.op]} operands")
        if any((not isinstance(a, int)) or a < 0 for a in self.args):
            raise ValueError("operands must be natural numbers")

    @property
    def registers(self) -> Tuple[int, ...]:
        return self.args[:2] if self.op == JEQ else self.args

    @property
    def target(self) -> Optional[int]:
        return self.args[2] if self.op == JEQ else None

    def __str__(self):
        if self.op == JEQ:
            a, b, t = self.args
            return f"JEQ r{a} r{b} {t}"
        return " ".join([self.op] + [f"r{a}" for a in self.args])


def zero(r): return Instruction(ZERO, (r,))
def inc(r): return Instruction(INC, (r,))
def copy(src, dst): return Instruction(COPY, (src, dst))
def jeq(a, b, target): return Instruction(JEQ, (a, b, target))
def oracle(r): return Instruction(ORACLE, (r,))
def halt(): return Instruction(HALT)


@dataclass(frozen=True)
class Program:
    instructions: Tuple[Instruction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        n = len(self.instructions)
        for i, ins in enumerate(self.instructions):
            if ins.op == JEQ and ins.target > n:
                raise AsmError(f"jump target {ins.target} out of range (0..{n})", i + 1)

    @property
    def register_count(self) -> int:
        return 1 + max((r for ins in self.instructions for r in ins.registers), default=-1)

    @property
    def uses_oracle(self) -> bool:
        return any(ins.op == ORACLE for ins in self.instructions)

    def __len__(self):
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __getitem__(self, i):
        return self.instructions[i]

    def __str__(self):
        return print_program(self)


_LINE = re.compile(r"^\s*(?:([A-Za-z_]\w*|\d+)\s*:)?\s*(.*?)\s*$")
_REG = re.compile(r"^[rR](\d+)$")
_NUM = re.compile(r"^\d+$")


def parse_program(text: str) -> Program:
    """Assemble program text; labels resolve to line numbers."""
    rows = []  # (source line no, label, mnemonic, operands, column of operand list)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split(";", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        label, rest = m.group(1), m.group(2)
        if not rest:
            raise AsmError("label without instruction", lineno)
        fields = rest.replace(",", " ").split()
        rows.append((lineno, label, fields, body.index(rest) + 1))

    labels = {}
    for idx, (lineno, label, _, _) in enumerate(rows):
        if label is not None and label.isdigit():
            # numeric prefixes are line annotations and must match the position
            if int(label) != idx:
                raise AsmError(f"line annotation {label} does not match position {idx}", lineno)
            continue
        if label is not None:
            if label in labels:
                raise AsmError(f"duplicate label {label!r}", lineno)
            labels[label] = idx

    instrs = []
    n = len(rows)
    for lineno, label, fields, col in rows:
        op = fields[0].upper()
        if op not in ARITY:
            raise AsmError(f"unknown mnemonic {fields[0]!r}", lineno, col)
        operands = fields[1:]
        if len(operands) != ARITY[op]:
            raise AsmError(f"{op} expects {ARITY[op]} operand(s), got {len(operands)}", lineno, col)
        args = []
        for k, tok in enumerate(operands):
            if op == JEQ and k == 2:
                if _NUM.match(tok):
                    t = int(tok)
                elif tok in labels:
                    t = labels[tok]
                else:
                    raise AsmError(f"undefined label {tok!r}", lineno)
                if t > n:
                    raise AsmError(f"jump target {t} out of range (0..{n})", lineno)
                args.append(t)
            else:
                rm = _REG.match(tok)
                if not rm:
                    raise AsmError(f"expected register, got {tok!r}", lineno)
                r = int(rm.group(1))
                if r >= MAX_REGISTERS:
                    raise AsmError(f"register r{r} exceeds limit of {MAX_REGISTERS}", lineno)
                args.append(r)
        instrs.append(Instruction(op, tuple(args)))
    return Program(tuple(instrs))


def print_program(p: Program) -> str:
    return "".join(f"{ins}\n" for ins in p.instructions)


def pad_program(p: Program) -> Program:
    """Insert ``COPY r0 r0`` at the front and shift every jump target."""
    shifted = [jeq(i.args[0], i.args[1], i.args[2] + 1) if i.op == JEQ else i
               for i in p.instructions]
    return Program((copy(0, 0),) + tuple(shifted))


def program(*instrs: Instruction) -> Program:
    return Program(tuple(instrs))
