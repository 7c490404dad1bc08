"""Execution engines for transfinite register machines."""

from .core import (BUDGET_REASONS, DEFAULT_BUDGET, Budget, BudgetExceeded, Configuration,
                   Diverge, Halt, LoopCertificate, apply_limit, is_halting, never_zero, step,
                   verdict_key)
from .naive import run_naive
from .real import BIT_STATUSES, BitResult, bit_status, compute_real, computes_real
from .runner import detect_lasso, run
from .trace import Trace
from .verify import verify_certificate, verify_run

__all__ = [
    "BIT_STATUSES", "BitResult", "bit_status", "compute_real", "computes_real",
    "BUDGET_REASONS", "DEFAULT_BUDGET", "Budget", "BudgetExceeded", "Configuration", "Diverge",
    "Halt", "detect_lasso", "LoopCertificate", "Trace", "apply_limit", "is_halting", "never_zero", "run", "run_naive", "step",
    "verdict_key", "verify_certificate", "verify_run",
]
