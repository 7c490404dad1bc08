import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from itrm.isa import parse_program
from itrm.oracles import (Finite, JumpOracle, OracleError, PartialOracle, ProgramOracle,
                          UnresolvedBit, bit, delete_bit, delete_bits, finite, flip, join, ones,
                          pair, parse_oracle, periodic, product_code, set_code, set_decode,
                          split, unpair, zeros)
from itrm.engine import Budget

bitstrings = st.lists(st.integers(0, 1), max_size=24)


def test_bit_examples():
    assert bit(periodic("10"), 4) == 1
    assert bit(finite("101"), 7) == 0
    assert bit(zeros(), 10 ** 12) == 0


def test_pair_examples():
    assert pair(0, 0) == 0
    # walk the diagonals by hand: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),(3,0),(2,1),(1,2)
    order = [(s - j, j) for s in range(5) for j in range(s + 1)]
    assert order.index((1, 2)) == 8 == pair(1, 2)
    for k, ij in enumerate(order):
        assert pair(*ij) == k


def test_pair_round_trip():
    for i in range(200):
        for j in range(200):
            assert unpair(pair(i, j)) == (i, j)


def test_set_code():
    assert set_code({0, 2, 5}) == 0b100101
    assert set_decode(set_code({3, 9})) == {3, 9}
    assert set_code([]) == 0


def test_join_examples():
    assert join(zeros(), ones()).prefix(6) == [0, 1, 0, 1, 0, 1]
    y = periodic("110")
    z = join(y, zeros())
    assert all(bit(z, 2 * n) == bit(y, n) for n in range(50))


def test_product_code_is_the_pairing_product():
    a, b = finite("011"), periodic("10")
    p = product_code(a, b)
    for n in range(200):
        i, j = unpair(n)
        assert bit(p, n) == (bit(a, i) and bit(b, j))
    # it loses information, which is why join is the canonical coding
    assert product_code(zeros(), ones()).prefix(50) == product_code(zeros(), zeros()).prefix(50)


@settings(max_examples=300)
@given(bitstrings, bitstrings)
def test_split_inverts_join(xs, ys):
    x, y = finite(xs), finite(ys)
    a, b = split(join(x, y))
    assert a.prefix(64) == x.prefix(64) and b.prefix(64) == y.prefix(64)
    c, d = split(finite(xs + ys))  # split of a non-join real
    assert join(c, d).prefix(64) == finite(xs + ys).prefix(64)


def test_flip_examples():
    assert bit(flip(zeros(), 3), 3) == 1
    assert bit(flip(zeros(), 3), 2) == 0
    x = periodic("0110")
    assert flip(flip(x, 3), 3).prefix(64) == x.prefix(64)


def test_delete_examples():
    assert delete_bit(finite("10110"), 2).prefix(8) == [1, 0, 1, 0, 0, 0, 0, 0]
    x = periodic("0111")
    assert [bit(delete_bit(x, 0), k) for k in range(30)] == [bit(x, k + 1) for k in range(30)]
    assert delete_bits(x, {0, 1}).prefix(40) == delete_bit(delete_bit(x, 0), 0).prefix(40)


@settings(max_examples=300)
@given(bitstrings, st.integers(0, 30), st.integers(0, 30))
def test_flip_delete_commute(xs, i, n):
    if i >= n:
        i, n = n, i + 1
    x = finite(xs)
    assert delete_bit(flip(x, i), n).prefix(40) == flip(delete_bit(x, n), i).prefix(40)


@settings(max_examples=300)
@given(bitstrings, st.sets(st.integers(0, 30), max_size=6))
def test_delete_bits_is_simultaneous(xs, S):
    x = finite(xs + [1, 0, 1])
    kept = [k for k in range(200) if k not in S]
    assert delete_bits(x, S).prefix(60) == [bit(x, k) for k in kept[:60]]
    # same as deleting one at a time, highest position first
    y = x
    for s in sorted(S, reverse=True):
        y = delete_bit(y, s)
    assert delete_bits(x, S).prefix(60) == y.prefix(60)


@pytest.mark.parametrize("spec, bits", [
    ("zeros", [0, 0, 0, 0]),
    ("ones", [1, 1, 1, 1]),
    ("finite:01", [0, 1, 0, 0]),
    ("periodic:10", [1, 0, 1, 0]),
    ("join:zeros,ones", [0, 1, 0, 1]),
    ("join:(flip:zeros@0),(periodic:10)", [1, 1, 0, 0]),
    ("flip:(join:zeros,ones)@2", [0, 1, 1, 1]),
    ("del:finite:1011@1", [1, 1, 1, 0]),
    ("dels:periodic:1100@0.3", [1, 0, 1, 1]),
    ("product:ones,ones", [1, 1, 1, 1]),
    ("(((zeros)))", [0, 0, 0, 0]),
])
def test_parse_oracle(spec, bits):
    x = parse_oracle(spec)
    assert x.prefix(4) == bits
    assert parse_oracle(x.spec).prefix(32) == x.prefix(32)


@pytest.mark.parametrize("spec", ["", "nothing", "finite:012", "periodic:", "join:zeros",
                                  "flip:zeros", "flip:zeros@x", "del:zeros@-1",
                                  "program:/no/such/file.itrm"])
def test_parse_oracle_errors(spec):
    with pytest.raises(OracleError):
        parse_oracle(spec)


def test_program_backed_memoizes(tmp_path):
    p = parse_program("COPY r0 r1\nZERO r0\nloop: JEQ r1 r2 done\nINC r2\nJEQ r1 r2 odd\n"
                      "INC r2\nJEQ r0 r0 loop\nodd: INC r0\ndone: HALT\n")
    x = ProgramOracle(p)
    assert x.prefix(10) == [0, 1] * 5
    runs = x.runs
    assert x.prefix(10) == [0, 1] * 5
    assert x.runs == runs == 10
    f = tmp_path / "parity.itrm"
    f.write_text(str(p))
    y = parse_oracle(f"program:{f.name}@steps=500", base_dir=str(tmp_path))
    assert y.prefix(6) == [0, 1, 0, 1, 0, 1]
    assert y.spec == "program:parity.itrm@steps=500"


def test_program_backed_failures_are_sticky():
    x = ProgramOracle(parse_program("INC r0\nINC r0\nHALT"))  # outputs n + 2: never a bit
    with pytest.raises(UnresolvedBit) as exc:
        x.bit(0)
    assert exc.value.status == "non-boolean"
    with pytest.raises(UnresolvedBit):
        x.bit(0)
    assert x.runs == 1
    loop = ProgramOracle(parse_program("JEQ r0 r0 0"))
    with pytest.raises(UnresolvedBit) as exc:
        loop.bit(3)
    assert exc.value.status == "diverge"
    slow = ProgramOracle(parse_program("a: INC r1\nJEQ r1 r1 a"), budget=Budget(max_successor_steps=10,
                                                                         max_nesting_level=1))
    with pytest.raises(UnresolvedBit) as exc:
        slow.bit(0)
    assert exc.value.status == "budget"


def test_memo_is_consistent_under_threads():
    x = ProgramOracle(parse_program("ZERO r0\nINC r0\nHALT"))
    results = []

    def reader():
        results.append(tuple(x.prefix(20)))

    threads = [threading.Thread(target=reader) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert set(results) == {tuple([1] * 20)}
    assert x.runs == 20


def test_jump_oracle_and_partial():
    j = JumpOracle(zeros(), Budget(max_successor_steps=2000))
    assert j.bit(0) == 1  # the empty program halts
    assert j.bit(5) == 0  # JEQ r0 r0 0 loops
    p = PartialOracle([1, None, 0])
    assert p.bit(0) == 1 and p.bit(2) == 0
    for n in (1, 3):
        with pytest.raises(UnresolvedBit):
            p.bit(n)


def test_negative_positions_rejected():
    with pytest.raises(OracleError):
        zeros().bit(-1)
    with pytest.raises(OracleError):
        flip(zeros(), -2)
    with pytest.raises(OracleError):
        Finite([0, 2])
