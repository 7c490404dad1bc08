import random

import pytest

from itrm.corpus import load_corpus
from itrm.isa import COPY, HALT, INC, JEQ, ORACLE, ZERO, Instruction, Program
from itrm.oracles import parse_oracle

BATTERY_SPECS = ["zeros", "ones", "finite:1", "finite:0110", "periodic:10", "periodic:011",
                 "join:zeros,ones", "flip:zeros@2"]


def battery():
    return [parse_oracle(s) for s in BATTERY_SPECS]


def random_program(rng: random.Random, max_lines=8, max_regs=3, oracle=False, min_lines=1) -> Program:
    """Uniform-ish random program; biased toward loops so that limits occur."""
    L = rng.randint(min_lines, max_lines)
    R = rng.randint(1, max_regs)
    ops = [ZERO, INC, INC, COPY, JEQ, JEQ, JEQ, HALT] + ([ORACLE] if oracle else [])
    out = []
    for _ in range(L):
        op = rng.choice(ops)
        if op == HALT:
            out.append(Instruction(HALT))
        elif op in (ZERO, INC, ORACLE):
            out.append(Instruction(op, (rng.randrange(R),)))
        elif op == COPY:
            out.append(Instruction(op, (rng.randrange(R), rng.randrange(R))))
        else:
            out.append(Instruction(op, (rng.randrange(R), rng.randrange(R), rng.randrange(L + 1))))
    return Program(tuple(out))


def lasso_program(rng: random.Random, regs: int = 2) -> Program:
    """At most 6 lines: a counting loop whose exit test sits at the loop head.

    Plain random programs this small almost never halt past w; these do often,
    because the head line is the least loop line and the counter resets there.
    """
    ra, rb = rng.sample(range(regs), 2)
    nb = rng.randint(1, 2)
    length = 4 + nb
    body = []
    for _ in range(nb):
        op = rng.choice([INC, INC, ZERO, COPY])
        args = (rng.randrange(regs), rng.randrange(regs)) if op == COPY else (rng.randrange(regs),)
        body.append(Instruction(op, args))
    out = [Instruction(INC, (ra,)), Instruction(JEQ, (ra, rb, rng.randint(3 + nb, length)))]
    out += body + [Instruction(JEQ, (rb, rb, 1))]
    out.append(rng.choice([Instruction(HALT), Instruction(INC, (rng.randrange(regs),))]))
    return Program(tuple(out))


def random_programs(seed: int, n: int, **kw):
    rng = random.Random(seed)
    return [random_program(rng, **kw) for _ in range(n)]


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


# acceptance summary: one line per criterion --------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        num = int(report.nodeid.rsplit("test_criterion_", 1)[1].split("_", 1)[0])
        note = dict(report.user_properties).get("summary", "")
        _ACCEPTANCE[num] = (report.outcome, note)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        outcome, note = _ACCEPTANCE[num]
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {tag}" + (f"  ({note})" if note else ""))
