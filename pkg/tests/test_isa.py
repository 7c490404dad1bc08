import pytest

from itrm.engine import Budget, run, verdict_key
from itrm.isa import (AsmError, Instruction, Program, copy, halt, inc, jeq, oracle, pad_program,
                      parse_program, print_program, program, zero)
from itrm.numbering import index_of
from itrm.ordinals import subtract

from conftest import battery


def test_parse_examples():
    assert parse_program("HALT") == program(halt())
    assert parse_program("loop: INC r0\nJEQ r1 r1 loop") == program(inc(0), jeq(1, 1, 0))
    with pytest.raises(AsmError):
        parse_program("JEQ r0 r0 99\nHALT")
    # the explicit fall-off target equal to the length is fine
    assert parse_program("JEQ r0 r0 2\nHALT")[0].target == 2


def test_print_examples():
    assert print_program(program(halt())) == "HALT\n"
    assert print_program(Program()) == ""
    assert print_program(program(copy(1, 2), oracle(3), zero(0))) == "COPY r1 r2\nORACLE r3\nZERO r0\n"


def test_comments_labels_and_case():
    text = """
    ; header comment
    start:  inc R0        ; lower-case mnemonic
            JEQ r0, r1, start
    end:    HALT
    """
    p = parse_program(text)
    assert p == program(inc(0), jeq(0, 1, 0), halt())
    assert p.register_count == 2


def test_numeric_line_annotations():
    assert parse_program("0: INC r0\n1: HALT") == program(inc(0), halt())
    with pytest.raises(AsmError, match="annotation"):
        parse_program("0: INC r0\n5: HALT")


@pytest.mark.parametrize("text, what", [
    ("FOO r0", "mnemonic"),
    ("INC", "operand"),
    ("INC r0 r1", "operand"),
    ("INC x0", "register"),
    ("JEQ r0 r0 nowhere", "undefined label"),
    ("INC r256", "exceeds"),
    ("a: INC r0\na: HALT", "duplicate"),
    ("lonely:", "label without"),
])
def test_parse_errors(text, what):
    with pytest.raises(AsmError, match=what):
        parse_program(text)


def test_error_positions():
    with pytest.raises(AsmError) as exc:
        parse_program("HALT\n  BOGUS r1")
    assert exc.value.line == 2 and exc.value.column == 3


def test_round_trip_corpus(corpus):
    for e in corpus:
        p = e.program()
        assert parse_program(print_program(p)) == p


def test_register_count():
    assert Program().register_count == 0
    assert program(jeq(0, 4, 0)).register_count == 5


def test_pad_examples(corpus):
    assert pad_program(program(halt())) == program(copy(0, 0), halt())
    assert pad_program(program(jeq(0, 0, 0))) == program(copy(0, 0), jeq(0, 0, 1))
    for e in corpus:
        p = e.program()
        assert index_of(pad_program(p)) != index_of(p)


def test_pad_preserves_behaviour(corpus):
    b = Budget(max_successor_steps=20000)
    for e in corpus:
        p, q = e.program(), pad_program(e.program())
        for x in battery():
            v1, _ = run(p, x, b, input=e.input)
            v2, _ = run(q, x, b, input=e.input)
            assert v1.kind == v2.kind
            if v1.kind == "halt":
                assert v1.output == v2.output
                # one extra step at the front: only the finite part can move
                if v1.time.is_finite:
                    assert int(v2.time) == int(v1.time) + 1
                else:
                    assert v2.time == v1.time
            if v1.kind == "diverge":
                assert v1.level == v2.level


def test_instruction_validation():
    with pytest.raises(ValueError):
        Instruction("INC", (1, 2))
    with pytest.raises(ValueError):
        Instruction("NOP")
    with pytest.raises(ValueError):
        Instruction("ZERO", (-1,))
    with pytest.raises(AsmError):
        Program((jeq(0, 0, 3),))
