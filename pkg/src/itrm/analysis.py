"""Budgeted approximations of halting sets, jumps, autoreductions and decision probes.

Every answer is three-valued.  A ``budget`` entry means the engine could not
settle the question within the given resources; it is never read as a no.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

from .engine import DEFAULT_BUDGET, Budget, run
from .engine.real import bit_status
from .isa import Program
from .numbering import program_of
from .oracles import (JumpOracle, Oracle, UnresolvedBit, bit, delete_bit, delete_bits, pair,
                      set_code)


@dataclass(frozen=True)
class Entry:
    """One line of a report: ``id``, ``verdict`` and optional ``time`` / ``detail``."""

    id: object
    verdict: str
    time: Optional[str] = None
    detail: Optional[str] = None

    def to_json(self) -> str:
        d = {"id": self.id, "verdict": self.verdict}
        if self.time is not None:
            d["time"] = self.time
        if self.detail is not None:
            d["detail"] = self.detail
        return json.dumps(d, separators=(",", ":"))


def _jsonl(entries: Iterable[Entry]) -> str:
    return "".join(e.to_json() + "\n" for e in entries)


def _engine_entry(ident, verdict, detail=None) -> Entry:
    if verdict.kind == "halt":
        return Entry(ident, "halt", str(verdict.time), detail)
    if verdict.kind == "diverge":
        return Entry(ident, "diverge", None, detail)
    return Entry(ident, "budget", None, verdict.reason if detail is None else detail)


# bounded halting and the jump ---------------------------------------------------

@dataclass
class HaltingReport:
    registers: int
    oracle: str
    budget: Budget
    entries: List[Entry] = field(default_factory=list)

    def members(self) -> List[int]:
        return [e.id for e in self.entries if e.verdict == "halt"]

    def non_members(self) -> List[int]:
        return [e.id for e in self.entries if e.verdict == "diverge"]

    def unknown(self) -> List[int]:
        return [e.id for e in self.entries if e.verdict == "budget"]

    def to_jsonl(self) -> str:
        return _jsonl(self.entries)


def bounded_halting(n: int, x: Oracle, max_index: int, b: Budget = DEFAULT_BUDGET) -> HaltingReport:
    """Verdicts for the programs 0..max_index of the n-register enumeration, input 0."""
    if n < 1:
        raise ValueError("register bound must be >= 1")
    rep = HaltingReport(n, x.spec, b)
    for i in range(max_index + 1):
        v, _ = run(program_of(i, n), x, b, record_trace=False)
        rep.entries.append(_engine_entry(i, v))
    return rep


@dataclass
class JumpApprox:
    """Partial characteristic function of the jump: 1, 0 or None (unknown)."""

    oracle: str
    budget: Budget
    values: List[Optional[int]]
    entries: List[Entry]

    def __call__(self, i: int) -> Optional[int]:
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def as_oracle(self) -> Oracle:
        from .oracles import PartialOracle
        return PartialOracle(self.values, spec=f"jump:{self.oracle}")

    def to_jsonl(self) -> str:
        return _jsonl(self.entries)


def jump_approx(x: Oracle, max_index: int, b: Budget = DEFAULT_BUDGET) -> JumpApprox:
    vals: List[Optional[int]] = []
    entries = []
    for i in range(max_index + 1):
        v, _ = run(program_of(i), x, b, record_trace=False)
        vals.append({"halt": 1, "diverge": 0}.get(v.kind))
        entries.append(_engine_entry(i, v))
    return JumpApprox(x.spec, b, vals, entries)


def jump_iterate(x: Oracle, k: int, b: Budget = DEFAULT_BUDGET) -> Oracle:
    """The k-th jump of ``x`` as a lazily evaluated oracle with sticky failures."""
    for _ in range(k):
        x = JumpOracle(x, b)
    return x


# autoreduction --------------------------------------------------------------------

@dataclass
class AutoreductionReport:
    program: str
    oracle: str
    positions: List[int]
    outcomes: List[Entry]

    @property
    def all_match(self) -> bool:
        return all(e.verdict == "match" for e in self.outcomes)

    def to_jsonl(self) -> str:
        return _jsonl(self.outcomes)


def _reduction_entry(n: int, v, x: Oracle) -> Entry:
    try:
        expected = bit(x, n)
    except UnresolvedBit:
        return Entry(n, "budget", None, "oracle")
    status = bit_status(v)
    if status in ("0", "1"):
        got = int(status)
        if got == expected:
            return Entry(n, "match", str(v.time))
        return Entry(n, "mismatch", str(v.time), f"expected={expected} got={got}")
    if status == "non-boolean":
        return Entry(n, "non-boolean", str(v.time), f"out={v.output}")
    return Entry(n, status, None, v.reason if v.kind == "budget" else None)


def autoreduction_check(p: Program, x: Oracle, N: int, b: Budget = DEFAULT_BUDGET) -> AutoreductionReport:
    """Does ``p`` with bit n deleted from ``x`` output bit n of ``x``, for n < N?"""
    if N < 1:
        raise ValueError("N must be >= 1")
    outs = []
    for n in range(N):
        v, _ = run(p, delete_bit(x, n), b, input=n, record_trace=False)
        outs.append(_reduction_entry(n, v, x))
    return AutoreductionReport(str(p), x.spec, list(range(N)), outs)


def strong_autoreduction_check(p: Program, x: Oracle, S: Iterable[int],
                               b: Budget = DEFAULT_BUDGET) -> AutoreductionReport:
    """Recover each s in S from ``x`` with all of S deleted; input is ``pair(s, code(S))``."""
    positions = sorted(set(S))
    if not positions:
        raise ValueError("S must be a nonempty finite set")
    if positions[0] < 0:
        raise ValueError("S must contain natural numbers")
    y = delete_bits(x, positions)
    c = set_code(positions)
    outs = []
    for s in positions:
        v, _ = run(p, y, b, input=pair(s, c), record_trace=False)
        outs.append(_reduction_entry(s, v, x))
    return AutoreductionReport(str(p), x.spec, positions, outs)


# probes -------------------------------------------------------------------------------

PROBE_OUTCOMES = ("accepted", "rejected", "non-boolean", "diverges", "budget")


def _probe(p: Program, y: Oracle, b: Budget) -> Entry:
    v, _ = run(p, y, b, record_trace=False)
    status = bit_status(v)
    if status == "1":
        return Entry(y.spec, "accepted", str(v.time))
    if status == "0":
        return Entry(y.spec, "rejected", str(v.time))
    if status == "non-boolean":
        return Entry(y.spec, status, str(v.time), f"out={v.output}")
    return Entry(y.spec, status, None, v.reason if v.kind == "budget" else None)


@dataclass
class ProbeReport:
    program: str
    entries: List[Entry]

    def outcome(self, i: int) -> str:
        return self.entries[i].verdict

    def to_jsonl(self) -> str:
        return _jsonl(self.entries)


def recognizability_probe(q: Program, candidates: Sequence[Oracle],
                          b: Budget = DEFAULT_BUDGET) -> ProbeReport:
    """Run ``q`` on input 0 against each candidate.  Evidence only; never a proof."""
    return ProbeReport(str(q), [_probe(q, y, b) for y in candidates])


def recognizes_within(rep: ProbeReport, target: int) -> bool:
    """Accepts candidate ``target`` and rejects every other candidate."""
    return all((e.verdict == "accepted") if i == target else (e.verdict == "rejected")
               for i, e in enumerate(rep.entries))


@dataclass
class DecidabilityReport:
    program: str
    entries: List[Entry]
    inside: List[str]
    outside: List[str]
    deciding: bool

    def to_jsonl(self) -> str:
        return _jsonl(self.entries)


def decidability_probe(p: Program, battery: Sequence[Oracle],
                       b: Budget = DEFAULT_BUDGET) -> DecidabilityReport:
    entries = [_probe(p, y, b) for y in battery]
    inside = [e.id for e in entries if e.verdict == "accepted"]
    outside = [e.id for e in entries if e.verdict == "rejected"]
    deciding = len(inside) + len(outside) == len(entries)
    return DecidabilityReport(str(p), entries, inside, outside, deciding)
