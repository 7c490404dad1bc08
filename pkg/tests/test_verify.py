import random
from dataclasses import replace

from itrm.engine import (Budget, LoopCertificate, run, verify_certificate, verify_run)
from itrm.isa import parse_program
from itrm.oracles import zeros
from itrm.ordinals import Ordinal, add

from conftest import random_programs

A = parse_program("INC r0\nJEQ r0 r2 5\nINC r0\nJEQ r1 r1 1\nHALT\nHALT")
SMALL = Budget(max_successor_steps=20_000)


def _bump(t, k=1):
    return add(t, Ordinal.finite(k))


def mutations(c: LoopCertificate):
    """Each mutation changes exactly one claim of the certificate."""
    yield "level", replace(c, level=c.level + 1)
    yield "start", replace(c, start=_bump(c.start))
    yield "period", replace(c, period=_bump(c.period))
    yield "digest", replace(c, digest="f" * 16 if c.digest != "f" * 16 else "0" * 16)
    for r in range(len(c.delta)):
        d = list(c.delta)
        d[r] += 1
        yield f"delta[{r}]", replace(c, delta=tuple(d))
        m = list(c.minima)
        m[r] += 1
        yield f"minima[{r}]", replace(c, minima=tuple(m))
        s = list(c.start_registers)
        s[r] += 1
        yield f"start_registers[{r}]", replace(c, start_registers=tuple(s))
    yield "min_line+", replace(c, min_line=c.min_line + 1)
    if c.min_line > 0:
        yield "min_line-", replace(c, min_line=c.min_line - 1)
    yield "start_line", replace(c, start_line=c.start_line + 1)
    for i in range(len(c.children)):
        yield f"drop child {i}", replace(c, children=c.children[:i] + c.children[i + 1:])


def vacuous(name, c):
    # a constant level-0 loop of period 1 repeats from any later start too
    return name == "start" and c.level == 0 and int(c.period) == 1 and not any(c.delta)


def test_corpus_certificates_verify(corpus):
    total = 0
    for e in corpus:
        p, x = e.program(), e.oracle_obj()
        v, tr = run(p, x, input=e.input)
        for c in tr.certificates:
            assert verify_certificate(p, x, c), e.name
            total += 1
        assert verify_run(p, x, tr.certificates, input=e.input, verdict=v), e.name
    assert total >= 10


def test_tampered_delta_and_min_line():
    v, tr = run(A, zeros())
    (c,) = tr.certificates
    assert verify_certificate(A, zeros(), c)
    assert not verify_certificate(A, zeros(), replace(c, delta=(2, 0, 0)))
    assert not verify_certificate(A, zeros(), replace(c, min_line=2))
    assert not verify_certificate(A, zeros(), replace(c, min_line=0))


def test_corpus_mutations_rejected(corpus):
    for e in corpus:
        p, x = e.program(), e.oracle_obj()
        v, tr = run(p, x, input=e.input)
        for k, c in enumerate(tr.certificates):
            for name, bad in mutations(c):
                if vacuous(name, c):
                    continue
                chain = list(tr.certificates)
                chain[k] = bad
                assert not verify_run(p, x, chain, input=e.input), (e.name, k, name)


def test_verify_run_checks_the_verdict():
    v, tr = run(A, zeros())
    assert verify_run(A, zeros(), tr.certificates, verdict=v)
    from itrm.engine import Halt
    assert not verify_run(A, zeros(), tr.certificates, verdict=Halt(1, v.time))
    assert not verify_run(A, zeros(), tr.certificates, verdict=Halt(0, Ordinal.finite(5)))
    assert not verify_run(A, zeros(), [], verdict=v, max_steps=1000)


def test_verify_run_rejects_reordered_chains():
    p = parse_program("top: INC r0\nJEQ r0 r0 top")
    v, tr = run(p, zeros())
    assert len(tr.certificates) == 3
    assert verify_run(p, zeros(), tr.certificates, verdict=v)
    c = tr.certificates
    assert not verify_run(p, zeros(), [c[1], c[0], c[2]])
    assert not verify_run(p, zeros(), [c[0], c[2]])


def test_random_runs_verify():
    n = 0
    for p in random_programs(21, 300, max_lines=8, max_regs=3):
        v, tr = run(p, zeros(), SMALL)
        if v.kind == "budget":
            continue
        assert verify_run(p, zeros(), tr.certificates, verdict=v), str(p)
        n += 1
    assert n > 150


def test_random_mutations_rejected():
    rng = random.Random(4)
    checked = 0
    for p in random_programs(22, 300, max_lines=8, max_regs=3):
        v, tr = run(p, zeros(), SMALL)
        if not tr.certificates:
            continue
        k = rng.randrange(len(tr.certificates))
        c = tr.certificates[k]
        for name, bad in mutations(c):
            if vacuous(name, c):
                continue
            chain = list(tr.certificates)
            chain[k] = bad
            assert not verify_run(p, zeros(), chain), (str(p), k, name)
            checked += 1
    assert checked > 300


def test_replay_bound():
    v, tr = run(A, zeros())
    assert not verify_certificate(A, zeros(), tr.certificates[0], max_steps=3)


def test_dict_round_trip(corpus):
    for e in corpus:
        _, tr = run(e.program(), e.oracle_obj(), input=e.input)
        for c in tr.certificates:
            assert LoopCertificate.from_dict(c.to_dict()) == c
