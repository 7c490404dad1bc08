"""Reals as oracles.

A real is a function from naturals to {0, 1}.  Oracles here are lazy bit
functions built from a handful of constructors and the coding operators used
for autoreducibility: interleaving join, single-bit flip and bit deletion.

Bits that depend on a program run (``ProgramOracle``, ``JumpOracle``) can
fail; a failure raises :class:`UnresolvedBit` and is remembered, so a partial
real never silently reads as zero.
"""

from __future__ import annotations

import re
import threading
from math import isqrt
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple


class OracleError(ValueError):
    pass


class UnresolvedBit(Exception):
    """A bit of a program-backed real could not be computed."""

    def __init__(self, position: int, status: str, spec: str = ""):
        self.position = position
        self.status = status
        super().__init__(f"bit {position} of {spec or 'oracle'} unresolved: {status}")


# pairing --------------------------------------------------------------------

def pair(i: int, j: int) -> int:
    """Cantor pairing, ``(i+j)(i+j+1)/2 + j``."""
    s = i + j
    return s * (s + 1) // 2 + j


def unpair(k: int) -> Tuple[int, int]:
    s = (isqrt(8 * k + 1) - 1) // 2
    j = k - s * (s + 1) // 2
    return s - j, j


def set_code(s: Iterable[int]) -> int:
    """Canonical code of a finite set: sum of 2**k."""
    return sum(1 << k for k in set(s))


def set_decode(c: int) -> FrozenSet[int]:
    return frozenset(k for k in range(c.bit_length()) if c >> k & 1)


# oracles --------------------------------------------------------------------

class Oracle:
    """Base class; subclasses implement ``_bit``."""

    spec: str = "?"

    def bit(self, n: int) -> int:
        if n < 0:
            raise OracleError("bit positions are natural numbers")
        return self._bit(n)

    __call__ = bit

    def _bit(self, n: int) -> int:
        raise NotImplementedError

    def prefix(self, n: int) -> List[int]:
        return [self.bit(k) for k in range(n)]

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"


class Zeros(Oracle):
    spec = "zeros"

    def _bit(self, n):
        return 0


class Ones(Oracle):
    spec = "ones"

    def _bit(self, n):
        return 1


def _bits(text: str) -> Tuple[int, ...]:
    if not re.fullmatch(r"[01]*", text):
        raise OracleError(f"not a bit string: {text!r}")
    return tuple(int(c) for c in text)


class Finite(Oracle):
    """Given bits followed by zeros."""

    def __init__(self, bits):
        self.bits = _bits(bits) if isinstance(bits, str) else tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in self.bits):
            raise OracleError("bits must be 0 or 1")
        self.spec = "finite:" + "".join(map(str, self.bits))

    def _bit(self, n):
        return self.bits[n] if n < len(self.bits) else 0


class Periodic(Oracle):
    def __init__(self, bits):
        self.bits = _bits(bits) if isinstance(bits, str) else tuple(int(b) for b in bits)
        if not self.bits:
            raise OracleError("periodic oracle needs a nonempty pattern")
        self.spec = "periodic:" + "".join(map(str, self.bits))

    def _bit(self, n):
        return self.bits[n % len(self.bits)]


def _wrap(spec: str) -> str:
    return f"({spec})" if any(c in spec for c in ",@") else spec


class Join(Oracle):
    """Even/odd interleaving: bit 2k is x(k), bit 2k+1 is y(k)."""

    def __init__(self, x: Oracle, y: Oracle):
        self.x, self.y = x, y
        self.spec = f"join:{_wrap(x.spec)},{_wrap(y.spec)}"

    def _bit(self, n):
        return self.y.bit(n >> 1) if n & 1 else self.x.bit(n >> 1)


class _Half(Oracle):
    def __init__(self, z: Oracle, odd: int):
        self.z, self.odd = z, odd
        self.spec = f"{'odd' if odd else 'even'}:{_wrap(z.spec)}"

    def _bit(self, n):
        return self.z.bit(2 * n + self.odd)


class ProductCode(Oracle):
    """{pair(i, j) : i in a, j in b} -- the pairing-based product of two reals."""

    def __init__(self, a: Oracle, b: Oracle):
        self.a, self.b = a, b
        self.spec = f"product:{_wrap(a.spec)},{_wrap(b.spec)}"

    def _bit(self, n):
        i, j = unpair(n)
        return self.a.bit(i) & self.b.bit(j)


class Flip(Oracle):
    def __init__(self, x: Oracle, i: int):
        if i < 0:
            raise OracleError("flip position must be natural")
        self.x, self.i = x, i
        self.spec = f"flip:{_wrap(x.spec)}@{i}"

    def _bit(self, n):
        b = self.x.bit(n)
        return 1 - b if n == self.i else b


class DeleteBit(Oracle):
    """x with bit n removed; later bits move one place left."""

    def __init__(self, x: Oracle, n: int):
        if n < 0:
            raise OracleError("deleted position must be natural")
        self.x, self.n = x, n
        self.spec = f"del:{_wrap(x.spec)}@{n}"

    def _bit(self, k):
        return self.x.bit(k if k < self.n else k + 1)


class DeleteBits(Oracle):
    """x with a finite set of positions removed at once."""

    def __init__(self, x: Oracle, positions: Iterable[int]):
        self.x = x
        self.positions = tuple(sorted(set(positions)))
        if any(p < 0 for p in self.positions):
            raise OracleError("deleted positions must be natural")
        self.spec = f"dels:{_wrap(x.spec)}@{'.'.join(map(str, self.positions)) or '-'}"

    def _bit(self, k):
        # k-th index of x not in positions
        m = k
        for p in self.positions:
            if p <= m:
                m += 1
            else:
                break
        return self.x.bit(m)


class _Memo(Oracle):
    """Thread-safe memo of computed bits, with sticky failures."""

    def __init__(self):
        self._memo: Dict[int, object] = {}
        self._lock = threading.RLock()
        self.runs = 0

    def _bit(self, n):
        with self._lock:
            if n not in self._memo:
                self.runs += 1
                try:
                    self._memo[n] = self._compute(n)
                except UnresolvedBit as e:
                    self._memo[n] = e
            v = self._memo[n]
        if isinstance(v, UnresolvedBit):
            raise v
        return v

    def _compute(self, n: int) -> int:
        raise NotImplementedError


class ProgramOracle(_Memo):
    """Bit n is the output of ``program`` on input n with oracle ``base``."""

    def __init__(self, program, base: Optional[Oracle] = None, budget=None, *, source: str = ""):
        super().__init__()
        from .engine import Budget
        self.program = program
        self.base = base if base is not None else Zeros()
        self.budget = budget if budget is not None else Budget()
        steps = f"@steps={self.budget.max_successor_steps}" if budget is not None else ""
        self.spec = f"program:{source or '<inline>'}{steps}"

    def _compute(self, n):
        from .engine import Halt, run
        verdict, _ = run(self.program, self.base, self.budget, input=n, record_trace=False)
        if isinstance(verdict, Halt):
            if verdict.output in (0, 1):
                return verdict.output
            raise UnresolvedBit(n, "non-boolean", self.spec)
        raise UnresolvedBit(n, verdict.kind, self.spec)


class JumpOracle(_Memo):
    """Budgeted jump: bit i is 1 if program i halts in ``base``, 0 if it provably diverges."""

    def __init__(self, base: Oracle, budget=None):
        super().__init__()
        from .engine import Budget
        self.base = base
        self.budget = budget if budget is not None else Budget()
        self.spec = f"jump:{_wrap(base.spec)}"

    def _compute(self, i):
        from .engine import Diverge, Halt, run
        from .numbering import program_of
        verdict, _ = run(program_of(i), self.base, self.budget, record_trace=False)
        if isinstance(verdict, Halt):
            return 1
        if isinstance(verdict, Diverge):
            return 0
        raise UnresolvedBit(i, "budget", self.spec)


class PartialOracle(Oracle):
    """A finite table of bits; missing or unknown entries are failures."""

    def __init__(self, bits: Sequence[Optional[int]], spec: str = "partial"):
        self.bits = tuple(bits)
        self.spec = spec

    def _bit(self, n):
        if n < len(self.bits) and self.bits[n] is not None:
            return self.bits[n]
        raise UnresolvedBit(n, "budget", self.spec)


# public constructors -------------------------------------------------------

def zeros() -> Oracle:
    return Zeros()


def ones() -> Oracle:
    return Ones()


def finite(bits) -> Oracle:
    return Finite(bits)


def periodic(bits) -> Oracle:
    return Periodic(bits)


def join(x: Oracle, y: Oracle) -> Oracle:
    return Join(x, y)


def split(z: Oracle) -> Tuple[Oracle, Oracle]:
    if isinstance(z, Join):
        return z.x, z.y
    return _Half(z, 0), _Half(z, 1)


def flip(x: Oracle, i: int) -> Oracle:
    return Flip(x, i)


def delete_bit(x: Oracle, n: int) -> Oracle:
    return DeleteBit(x, n)


def delete_bits(x: Oracle, positions: Iterable[int]) -> Oracle:
    return DeleteBits(x, positions)


def product_code(a: Oracle, b: Oracle) -> Oracle:
    return ProductCode(a, b)


def bit(x: Oracle, n: int) -> int:
    return x.bit(n)


# spec strings ----------------------------------------------------------------

def _split_top(text: str, sep: str, last: bool = False) -> Optional[int]:
    depth = 0
    found = None
    for i, c in enumerate(text):
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth < 0:
                raise OracleError(f"unbalanced parentheses in {text!r}")
        elif c == sep and depth == 0:
            found = i
            if not last:
                return i
    if depth:
        raise OracleError(f"unbalanced parentheses in {text!r}")
    return found


def _strip_parens(text: str) -> str:
    text = text.strip()
    while text.startswith("("):
        depth = 0
        for i, c in enumerate(text):
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
                if depth == 0:
                    break
        if depth or i != len(text) - 1:
            break
        text = text[1:-1].strip()
    return text


def _nat(text: str, what: str) -> int:
    if not re.fullmatch(r"\d+", text.strip()):
        raise OracleError(f"expected a natural number for {what}, got {text!r}")
    return int(text)


def parse_oracle(spec: str, *, base_dir: Optional[str] = None) -> Oracle:
    """Build an oracle from its spec string (see README for the grammar)."""
    text = _strip_parens(spec)
    if text == "zeros":
        return Zeros()
    if text == "ones":
        return Ones()
    head, colon, rest = text.partition(":")
    if not colon:
        raise OracleError(f"unknown oracle spec {spec!r}")
    if head == "finite":
        return Finite(rest)
    if head == "periodic":
        return Periodic(rest)
    if head in ("join", "product"):
        i = _split_top(rest, ",")
        if i is None:
            raise OracleError(f"{head} needs two comma-separated specs: {spec!r}")
        a = parse_oracle(rest[:i], base_dir=base_dir)
        b = parse_oracle(rest[i + 1:], base_dir=base_dir)
        return Join(a, b) if head == "join" else ProductCode(a, b)
    if head in ("flip", "del", "dels"):
        i = _split_top(rest, "@", last=True)
        if i is None:
            raise OracleError(f"{head} needs '@<position>': {spec!r}")
        inner = parse_oracle(rest[:i], base_dir=base_dir)
        pos = rest[i + 1:]
        if head == "flip":
            return Flip(inner, _nat(pos, "flip position"))
        if head == "del":
            return DeleteBit(inner, _nat(pos, "deleted position"))
        positions = [] if pos == "-" else [_nat(p, "deleted position") for p in pos.split(".")]
        return DeleteBits(inner, positions)
    if head == "jump":
        return JumpOracle(parse_oracle(rest, base_dir=base_dir))
    if head == "program":
        from .engine import Budget
        from .isa import parse_program
        import os
        path, steps = rest, None
        m = re.fullmatch(r"(.*)@steps=(\d+)", rest)
        if m:
            path, steps = m.group(1), int(m.group(2))
        full = os.path.join(base_dir, path) if base_dir and not os.path.isabs(path) else path
        try:
            with open(full) as fh:
                prog = parse_program(fh.read())
        except OSError as e:
            raise OracleError(f"cannot read program {path!r}: {e}") from e
        budget = Budget(max_successor_steps=steps) if steps is not None else None
        return ProgramOracle(prog, Zeros(), budget, source=path)
    raise OracleError(f"unknown oracle spec {spec!r}")
