"""Machine state, verdicts, budgets and loop certificates."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields, replace
from math import gcd
from typing import List, Optional, Sequence, Tuple

from ..isa import COPY, HALT, INC, JEQ, ORACLE, ZERO, Program
from ..ordinals import Ordinal, add, parse_cnf, subtract, times_omega

Registers = Tuple[int, ...]


@dataclass(frozen=True)
class Budget:
    max_successor_steps: int = 1_000_000
    max_limit_events: int = 10_000
    max_nesting_level: int = 4
    max_period: int = 100_000

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{f.name} must be a positive integer, got {v!r}")

    def scaled(self, factor: int) -> "Budget":
        return Budget(*(getattr(self, f.name) * factor for f in fields(self)))

    def doubled(self) -> "Budget":
        return self.scaled(2)

    def __le__(self, other: "Budget") -> bool:
        return all(getattr(self, f.name) <= getattr(other, f.name) for f in fields(self))


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Configuration:
    clock: Ordinal
    line: int
    registers: Registers


@dataclass(frozen=True)
class LoopCertificate:
    """Witness that a stretch of the run repeats forever.

    ``start`` is the time sigma at which the repeating stretch begins and
    ``period`` its length.  Two consecutive periods were observed with the same
    line/test-outcome sequence and every register shifted by ``delta``.
    ``children`` lists the lower-level certificates whose limits fall inside
    the first period, in time order.
    """

    level: int
    start: Ordinal
    period: Ordinal
    start_line: int
    start_registers: Registers
    digest: str
    delta: Registers
    minima: Registers
    min_line: int
    children: Tuple["LoopCertificate", ...] = ()
    constraints: tuple = field(default=(), compare=False, repr=False)

    @property
    def limit_time(self) -> Ordinal:
        return add(self.start, times_omega(self.period))

    @property
    def start_configuration(self) -> Configuration:
        return Configuration(self.start, self.start_line, self.start_registers)

    def shifted(self, old_base: Ordinal, new_base: Ordinal, reg_shift: Sequence[int]) -> "LoopCertificate":
        """The same certificate one enclosing period later."""
        sh = lambda v: tuple(a + b for a, b in zip(v, reg_shift))
        return replace(
            self,
            start=add(new_base, subtract(self.start, old_base)),
            start_registers=sh(self.start_registers),
            minima=sh(self.minima),
            children=tuple(c.shifted(old_base, new_base, reg_shift) for c in self.children),
            constraints=(),
        )

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "sigma": str(self.start),
            "period": str(self.period),
            "line": self.start_line,
            "regs": list(self.start_registers),
            "digest": self.digest,
            "delta": list(self.delta),
            "minima": list(self.minima),
            "min_line": self.min_line,
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LoopCertificate":
        return cls(
            level=d["level"],
            start=parse_cnf(d["sigma"]),
            period=parse_cnf(d["period"]),
            start_line=d["line"],
            start_registers=tuple(d["regs"]),
            digest=d["digest"],
            delta=tuple(d["delta"]),
            minima=tuple(d["minima"]),
            min_line=d["min_line"],
            children=tuple(cls.from_dict(c) for c in d["children"]),
        )


# verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class Halt:
    output: int
    time: Ordinal
    kind = "halt"

    def __str__(self):
        return f"HALT out={self.output} t={self.time}"


@dataclass(frozen=True)
class Diverge:
    certificate: LoopCertificate
    kind = "diverge"

    @property
    def level(self) -> int:
        return self.certificate.level

    def __str__(self):
        return f"DIVERGE level={self.level}"


BUDGET_REASONS = ("steps", "limit_events", "nesting", "period_search", "oracle")


@dataclass(frozen=True)
class BudgetExceeded:
    reason: str
    kind = "budget"

    def __post_init__(self):
        if self.reason not in BUDGET_REASONS:
            raise ValueError(f"unknown budget reason {self.reason!r}")

    def __str__(self):
        return f"BUDGET reason={self.reason}"


def verdict_key(v) -> tuple:
    """What two engines must agree on: kind, output and halting time (or level)."""
    if v.kind == "halt":
        return ("halt", v.output, v.time)
    if v.kind == "diverge":
        return ("diverge", v.level)
    return ("budget",)


# successor and limit semantics ------------------------------------------------

def is_halting(p: Program, line: int) -> bool:
    return line >= len(p) or p[line].op == HALT


def step(c: Configuration, p: Program, x) -> Configuration:
    """One successor step.  ``c.line`` must name a non-HALT instruction."""
    ins = p[c.line]
    regs = list(c.registers)
    line = c.line + 1
    op, args = ins.op, ins.args
    if op == ZERO:
        regs[args[0]] = 0
    elif op == INC:
        regs[args[0]] += 1
    elif op == COPY:
        regs[args[1]] = regs[args[0]]
    elif op == JEQ:
        if regs[args[0]] == regs[args[1]]:
            line = args[2]
    elif op == ORACLE:
        regs[args[0]] = x.bit(regs[args[0]])
    else:
        raise ValueError("HALT is not stepped")
    return Configuration(add(c.clock, 1), line, tuple(regs))


def apply_limit(cert: LoopCertificate) -> Configuration:
    """Configuration at ``start + period * w``: lim inf of lines and registers."""
    regs = tuple(0 if d > 0 else m for d, m in zip(cert.delta, cert.minima))
    return Configuration(cert.limit_time, cert.min_line, regs)


def outcome_of(ins, regs: Sequence[int]) -> Optional[bool]:
    if ins.op == JEQ:
        return regs[ins.args[0]] == regs[ins.args[1]]
    return None


# repetition constraints -------------------------------------------------------
#
# A test executed inside a certified stretch sees register values of the form
# value + sum(k_i * c_i) where k_i counts repetitions at each nesting level.
# A JEQ outcome is stable iff that expression never changes between zero and
# nonzero for any k in N^n; an ORACLE query is stable iff all c_i are zero.

def never_zero(d: int, coeffs: Sequence[int]) -> bool:
    """True iff ``d + sum(k_i * c_i) != 0`` for every vector of naturals k."""
    cs = [c for c in coeffs if c]
    if d == 0:
        return False
    if not cs:
        return True
    g = 0
    for c in cs:
        g = gcd(g, abs(c))
    if d % g:
        return True
    pos = any(c > 0 for c in cs)
    neg = any(c < 0 for c in cs)
    if pos and neg:
        return False
    target = -d if pos else d  # need sum(k_i * |c_i|) == target
    if target <= 0:
        return True
    vals = sorted({abs(c) // g for c in cs})
    t = target // g
    if vals[0] == 1 or t % vals[0] == 0:
        return False
    if len(vals) == 1:
        return True
    # beyond the Schur bound every multiple of the gcd is representable
    if t > (vals[0] - 1) * (vals[-1] - 1):
        return False
    reach = [False] * (t + 1)
    reach[0] = True
    for i in range(1, t + 1):
        reach[i] = any(v <= i and reach[i - v] for v in vals)
    return not reach[t]


def first_zero(d: int, c: int) -> Optional[int]:
    """Smallest natural k with ``d + k*c == 0``, if any."""
    if c == 0:
        return 0 if d == 0 else None
    if (-d) % c == 0 and -d // c >= 0:
        return -d // c
    return None


def step_item(ins, regs: Sequence[int]) -> Optional[tuple]:
    """Constraint record for one executed instruction, without coefficients."""
    if ins.op == JEQ:
        a, b = ins.args[0], ins.args[1]
        return ("J", a, b, regs[a] - regs[b], ())
    if ins.op == ORACLE:
        r = ins.args[0]
        return ("O", r, r, 0, ())
    return None


def with_level(item: tuple, delta: Sequence[int]) -> tuple:
    kind, a, b, d, coeffs = item
    c = delta[a] - delta[b] if kind == "J" else delta[a]
    return (kind, a, b, d, coeffs + (c,))


def item_holds(item: tuple) -> bool:
    kind, _, _, d, coeffs = item
    if kind == "O":
        return not any(coeffs)
    if d == 0:
        return not any(coeffs)
    return never_zero(d, coeffs)


# digests ------------------------------------------------------------------------

def step_token(line: int, outcome: Optional[bool]) -> list:
    return [line, outcome]


def cert_token(cert: LoopCertificate) -> list:
    return ["L", cert.level, str(cert.period), cert.digest]


def digest_tokens(tokens: List[list]) -> str:
    blob = json.dumps(tokens, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
