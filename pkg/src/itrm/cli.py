"""Command-line interface: ``itrm <command> ...``.

Exit codes: 0 resolved, 1 corpus mismatch, 2 usage or parse error,
3 at least one answer left unresolved by the budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import analysis
from .corpus import MANIFEST, check_entry, load_corpus
from .engine import DEFAULT_BUDGET, Budget, run
from .isa import AsmError, parse_program, print_program
from .numbering import index_of
from .oracles import OracleError, parse_oracle
from .ordinals import OrdinalError, parse_cnf

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

STEPS_ENV = "ITRM_DEFAULT_BUDGET_STEPS"


class UsageError(Exception):
    pass


def _default_steps() -> int:
    raw = os.environ.get(STEPS_ENV)
    if raw is None:
        return DEFAULT_BUDGET.max_successor_steps
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{STEPS_ENV} must be a positive integer, got {raw!r}")
    if v < 1:
        raise UsageError(f"{STEPS_ENV} must be a positive integer, got {raw!r}")
    return v


def _budget(args) -> Budget:
    steps = args.budget_steps if args.budget_steps is not None else _default_steps()
    try:
        return Budget(steps, args.budget_limits, args.budget_nesting, args.budget_period)
    except ValueError as e:
        raise UsageError(str(e))


def _add_budget(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("budget")
    g.add_argument("--budget-steps", type=int, default=None, metavar="N",
                   help=f"successor steps (default {DEFAULT_BUDGET.max_successor_steps}, "
                        f"or ${STEPS_ENV})")
    g.add_argument("--budget-limits", type=int, default=DEFAULT_BUDGET.max_limit_events, metavar="N")
    g.add_argument("--budget-nesting", type=int, default=DEFAULT_BUDGET.max_nesting_level, metavar="N")
    g.add_argument("--budget-period", type=int, default=DEFAULT_BUDGET.max_period, metavar="N")


def _read_program(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    try:
        return parse_program(text)
    except AsmError as e:
        raise UsageError(f"{path}: {e}")


def _oracle(spec: str, program_path: Optional[str] = None):
    base = os.path.dirname(os.path.abspath(program_path)) if program_path else None
    try:
        return parse_oracle(spec, base_dir=base)
    except OracleError as e:
        raise UsageError(f"bad oracle spec: {e}")


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


# commands -----------------------------------------------------------------------

def cmd_asm(args) -> int:
    p = _read_program(args.program)
    _emit(print_program(p) + f"; index={index_of(p)}\n")
    return EXIT_OK


def cmd_run(args) -> int:
    p = _read_program(args.program)
    x = _oracle(args.oracle, args.program)
    b = _budget(args)
    verdict, trace = run(p, x, b, input=args.input, record_trace=args.trace is not None)
    if args.trace is not None:
        trace.write(args.trace)
        print(f"trace: {len(trace)} records -> {args.trace}", file=sys.stderr)
    _emit(f"{verdict}\n")
    return EXIT_BUDGET if verdict.kind == "budget" else EXIT_OK


def cmd_halting(args) -> int:
    if args.registers < 1:
        raise UsageError("--registers must be >= 1")
    rep = analysis.bounded_halting(args.registers, _oracle(args.oracle), args.max_index, _budget(args))
    _emit(rep.to_jsonl())
    print(f"halt {len(rep.members())}, diverge {len(rep.non_members())}, "
          f"unknown {len(rep.unknown())}", file=sys.stderr)
    return EXIT_BUDGET if rep.unknown() else EXIT_OK


def cmd_jump(args) -> int:
    ja = analysis.jump_approx(_oracle(args.oracle), args.max_index, _budget(args))
    lines = []
    for e in ja.entries:
        d = {"id": e.id, "verdict": "unknown" if e.verdict == "budget" else e.verdict}
        if e.time is not None:
            d["time"] = e.time
        if e.detail is not None:
            d["detail"] = e.detail
        lines.append(json.dumps(d, separators=(",", ":")) + "\n")
    _emit("".join(lines))
    unknown = sum(v is None for v in ja.values)
    print(f"{len(ja) - unknown} of {len(ja)} jump bits resolved", file=sys.stderr)
    return EXIT_BUDGET if unknown else EXIT_OK


def _parse_set(text: str) -> List[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--set expects comma-separated naturals, got {text!r}")
    if not vals or any(v < 0 for v in vals):
        raise UsageError("--set must name at least one natural number")
    return vals


def cmd_autored(args) -> int:
    p = _read_program(args.program)
    x = _oracle(args.oracle, args.program)
    b = _budget(args)
    if args.set is not None:
        rep = analysis.strong_autoreduction_check(p, x, _parse_set(args.set), b)
    else:
        if args.bits < 1:
            raise UsageError("--bits must be >= 1")
        rep = analysis.autoreduction_check(p, x, args.bits, b)
    _emit(rep.to_jsonl())
    n_match = sum(e.verdict == "match" for e in rep.outcomes)
    print(f"{n_match} of {len(rep.outcomes)} positions match", file=sys.stderr)
    unresolved = any(e.verdict == "budget" for e in rep.outcomes)
    return EXIT_BUDGET if unresolved else EXIT_OK


def cmd_corpus(args) -> int:
    try:
        entries = load_corpus(args.manifest)
    except (OSError, ValueError, KeyError) as e:
        raise UsageError(f"cannot load corpus: {e}")
    b = _budget(args)
    failures = 0
    for entry in entries:
        if not args.verify:
            _emit(json.dumps({"id": entry.name, "verdict": entry.kind,
                              "detail": entry.expected_text()}, separators=(",", ":")) + "\n")
            continue
        try:
            ok, verdict = check_entry(entry, b)
            got = str(verdict)
        except (AsmError, OracleError, OSError) as e:
            ok, got = False, f"error: {e}"
        failures += not ok
        _emit(json.dumps({"id": entry.name, "verdict": "pass" if ok else "fail",
                          "detail": got}, separators=(",", ":")) + "\n")
    if args.verify:
        print(f"{len(entries) - failures} of {len(entries)} corpus entries pass", file=sys.stderr)
    return EXIT_MISMATCH if failures else EXIT_OK


DEBUG_HELP = """commands:
  step [n]      advance n records (default 1)
  next-limit    advance to the next limit
  until <cnf>   advance to the first record at or after time <cnf>
  regs          show the current configuration
  end           show the verdict
  help          this text
  quit          leave
"""


def cmd_debug(args) -> int:
    """Walk through a recorded run one event at a time."""
    p = _read_program(args.program)
    x = _oracle(args.oracle, args.program)
    verdict, trace = run(p, x, _budget(args), input=args.input)
    recs = [r for r in trace.records() if r["ev"] in ("step", "limit")]
    pos = 0
    out = sys.stdout

    def show():
        r = recs[pos]
        tag = f"limit L{r['level']}" if r["ev"] == "limit" else "step"
        ins = p[r["line"]] if r["line"] < len(p) else "(end)"
        out.write(f"t={r['t']} {tag} line={r['line']} [{ins}] regs={r['regs']}\n")

    interactive = sys.stdin.isatty()
    show()
    while True:
        if interactive:
            out.write("itrm> ")
            out.flush()
        line = sys.stdin.readline()
        if not line:
            break
        cmd, _, arg = line.strip().partition(" ")
        if cmd in ("quit", "q", "exit"):
            break
        if cmd in ("", "help", "?"):
            out.write(DEBUG_HELP)
            continue
        if cmd in ("step", "s"):
            try:
                n = int(arg) if arg else 1
            except ValueError:
                out.write("step expects a number\n")
                continue
            pos = min(pos + max(n, 0), len(recs) - 1)
        elif cmd in ("next-limit", "n"):
            nxt = next((i for i in range(pos + 1, len(recs)) if recs[i]["ev"] == "limit"), None)
            if nxt is None:
                out.write("no further limit\n")
                continue
            pos = nxt
        elif cmd in ("until", "u"):
            try:
                target = parse_cnf(arg)
            except OrdinalError as e:
                out.write(f"bad ordinal: {e}\n")
                continue
            nxt = next((i for i in range(pos, len(recs)) if parse_cnf(recs[i]["t"]) >= target), None)
            if nxt is None:
                out.write("not reached\n")
                continue
            pos = nxt
        elif cmd in ("regs", "r"):
            pass
        elif cmd == "end":
            out.write(f"{verdict}\n")
            continue
        else:
            out.write(f"unknown command {cmd!r}; try help\n")
            continue
        show()
    out.flush()
    return EXIT_BUDGET if verdict.kind == "budget" else EXIT_OK


# wiring ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="itrm", description="Infinite time register machine workbench.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("asm", help="print the canonical form and index of a program")
    p.add_argument("program")
    p.set_defaults(func=cmd_asm)

    p = sub.add_parser("run", help="run a program and print its verdict")
    p.add_argument("program")
    p.add_argument("--oracle", default="zeros")
    p.add_argument("--input", type=int, default=0)
    p.add_argument("--trace", metavar="PATH", help="write the JSONL trace here")
    _add_budget(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("halting", help="bounded halting set approximation")
    p.add_argument("--registers", type=int, required=True)
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--oracle", default="zeros")
    _add_budget(p)
    p.set_defaults(func=cmd_halting)

    p = sub.add_parser("jump", help="approximate the jump of an oracle")
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--oracle", default="zeros")
    _add_budget(p)
    p.set_defaults(func=cmd_jump)

    p = sub.add_parser("autored", help="check a program as an autoreduction")
    p.add_argument("program")
    p.add_argument("--oracle", default="zeros")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--bits", type=int, help="test positions 0..N-1")
    g.add_argument("--set", help="comma-separated positions deleted together")
    _add_budget(p)
    p.set_defaults(func=cmd_autored)

    p = sub.add_parser("corpus", help="list or verify the shipped corpus")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--manifest", default=str(MANIFEST))
    _add_budget(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("debug", help="step through a run interactively")
    p.add_argument("program")
    p.add_argument("--oracle", default="zeros")
    p.add_argument("--input", type=int, default=0)
    _add_budget(p)
    p.set_defaults(func=cmd_debug)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_index", 0) is not None and getattr(args, "max_index", 0) < 0:
        print("itrm: error: --max-index must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "input", 0) < 0:
        print("itrm: error: --input must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"itrm: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
