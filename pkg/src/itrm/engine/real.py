"""Reals computed by programs, one bit per input."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from ..isa import Program
from ..oracles import Oracle
from .core import DEFAULT_BUDGET, Budget
from .runner import run

BIT_STATUSES = ("0", "1", "non-boolean", "diverges", "budget")


@dataclass(frozen=True)
class BitResult:
    index: int
    status: str
    output: Optional[int] = None

    @property
    def bit(self) -> Optional[int]:
        return int(self.status) if self.status in ("0", "1") else None


def bit_status(verdict) -> str:
    if verdict.kind == "halt":
        return str(verdict.output) if verdict.output in (0, 1) else "non-boolean"
    return "diverges" if verdict.kind == "diverge" else "budget"


def compute_real(p: Program, x: Optional[Oracle] = None, n_bits: int = 1,
                 b: Budget = DEFAULT_BUDGET) -> List[BitResult]:
    """Run ``p`` on inputs ``0 .. n_bits-1`` and classify each output."""
    if n_bits < 1:
        raise ValueError("n_bits must be >= 1")
    out = []
    for i in range(n_bits):
        v, _ = run(p, x, b, input=i, record_trace=False)
        out.append(BitResult(i, bit_status(v), v.output if v.kind == "halt" else None))
    return out


def computes_real(results: List[BitResult]) -> bool:
    return all(r.bit is not None for r in results)
