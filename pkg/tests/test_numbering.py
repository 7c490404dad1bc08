import itertools
import random

import pytest

from itrm.isa import COPY, HALT, INC, JEQ, ORACLE, ZERO, Instruction, Program, jeq, program
from itrm.numbering import (count_programs, enumerate_bounded, index_of, iter_programs,
                            program_of, program_weight)

OP_ORDER = [HALT, ZERO, INC, COPY, JEQ, ORACLE]


def _all_instructions(max_operand, length):
    yield Instruction(HALT)
    for op in (ZERO, INC, ORACLE):
        for r in range(max_operand + 1):
            yield Instruction(op, (r,))
    for a, b in itertools.product(range(max_operand + 1), repeat=2):
        yield Instruction(COPY, (a, b))
    for a, b, t in itertools.product(range(max_operand + 1), range(max_operand + 1),
                                     range(min(length, max_operand) + 1)):
        yield Instruction(JEQ, (a, b, t))


def brute_force_prefix(max_weight):
    """Every program of weight <= max_weight, sorted by (weight, length, instruction keys)."""
    progs = []
    for L in range(max_weight + 1):
        pool = [i for i in _all_instructions(max_weight, L) if L + sum(i.args) <= max_weight]
        for combo in itertools.product(pool, repeat=L):
            p = Program(combo)
            if program_weight(p) <= max_weight:
                progs.append(p)
    key = lambda p: (program_weight(p), len(p),
                     [(OP_ORDER.index(i.op), i.args) for i in p])
    return sorted(progs, key=key)


@pytest.fixture(scope="module")
def reference():
    return brute_force_prefix(4)


def test_first_hundred_match_brute_force(reference):
    assert len(reference) >= 100
    assert [program_of(i) for i in range(len(reference))] == reference


def test_counts_match_brute_force(reference):
    for wgt in range(5):
        assert count_programs(wgt) == sum(program_weight(p) == wgt for p in reference)


def test_index_examples():
    assert index_of(Program()) == 0
    assert program_of(0) == Program()
    assert program_of(1) == program(Instruction(HALT))
    assert index_of(program(jeq(0, 0, 0))) == 5


def test_round_trip_small():
    for i in range(10000):
        assert index_of(program_of(i)) == i


def test_round_trip_random_programs():
    rng = random.Random(7)
    for _ in range(1000):
        L = rng.randint(0, 9)
        R = rng.randint(1, 6)
        ins = []
        for _ in range(L):
            op = rng.choice(OP_ORDER)
            if op == HALT:
                ins.append(Instruction(HALT))
            elif op == COPY:
                ins.append(Instruction(op, (rng.randrange(R), rng.randrange(R))))
            elif op == JEQ:
                ins.append(Instruction(op, (rng.randrange(R), rng.randrange(R), rng.randrange(L + 1))))
            else:
                ins.append(Instruction(op, (rng.randrange(R),)))
        p = Program(tuple(ins))
        assert program_of(index_of(p)) == p


def test_huge_indices_decode():
    for i in (10 ** 30, 10 ** 60 + 12345, 2 ** 200):
        assert index_of(program_of(i)) == i


def test_enumerate_bounded_examples():
    assert enumerate_bounded(1, 1) == [Program()]
    assert all(p.register_count <= 2 for p in enumerate_bounded(2, 200))
    for k in (1, 10, 57):
        assert enumerate_bounded(2, k) == enumerate_bounded(2, k + 1)[:k]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumerate_bounded_is_filtered_global_order(n):
    want = [p for p in itertools.islice(iter_programs(), 3000) if p.register_count <= n][:300]
    assert enumerate_bounded(n, len(want)) == want
    for k, p in enumerate(want):
        assert index_of(p, n) == k


def test_bounded_index_rejects_wide_programs():
    with pytest.raises(ValueError):
        index_of(program(jeq(0, 3, 0)), 2)
    with pytest.raises(ValueError):
        enumerate_bounded(0, 3)
    with pytest.raises(ValueError):
        program_of(-1)
