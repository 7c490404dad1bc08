"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents, where every exponent is itself an :class:`Ordinal`.
Values are immutable and hashable; equal ordinals share one canonical term
list, so structural equality is ordinal equality.

Text form uses ``w`` for omega: ``w^2*3+w*1+4``.
"""

from __future__ import annotations

import re
from typing import Iterable, Tuple, Union

MAX_DEPTH = 8


class OrdinalError(ValueError):
    pass


class OrdinalOverflowError(OrdinalError):
    """Exponent nesting went past the configured depth cap."""


class OrdinalParseError(OrdinalError):
    pass


class Ordinal:
    __slots__ = ("terms", "_hash", "_depth")

    def __init__(self, terms: Iterable[Tuple["Ordinal", int]] = (), *,
                 max_depth: int = MAX_DEPTH, _trusted: bool = False):
        terms = tuple(terms)
        if not _trusted:
            prev = None
            for exp, coeff in terms:
                if not isinstance(exp, Ordinal):
                    raise TypeError("exponent must be an Ordinal")
                if not isinstance(coeff, int) or coeff < 1:
                    raise OrdinalError("coefficients must be positive integers")
                if prev is not None and compare(exp, prev) >= 0:
                    raise OrdinalError("exponents must be strictly decreasing")
                prev = exp
        self.terms = terms
        self._hash = hash(terms)
        self._depth = 1 + max((e._depth for e, _ in terms), default=-1) if terms else 0
        if self._depth > max_depth:
            raise OrdinalOverflowError(
                f"exponent nesting depth {self._depth} exceeds cap {max_depth}")

    # construction helpers -------------------------------------------------

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("ordinals are non-negative")
        if n == 0:
            return ZERO
        return cls(((ZERO, n),), _trusted=True)

    @classmethod
    def omega_power(cls, exp: "Ordinal", coeff: int = 1) -> "Ordinal":
        return cls(((exp, coeff),))

    # properties -----------------------------------------------------------

    @property
    def depth(self) -> int:
        return self._depth

    @property
    def finite_part(self) -> int:
        if self.terms and not self.terms[-1][0].terms:
            return self.terms[-1][1]
        return 0

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0].terms)

    @property
    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise OrdinalError("0 has no leading exponent")
        return self.terms[0][0]

    def __int__(self) -> int:
        if not self.is_finite:
            raise OrdinalError(f"{self} is infinite")
        return self.finite_part

    # dunder plumbing ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = Ordinal.finite(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._hash == other._hash and self.terms == other.terms

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return compare(self, _coerce(other)) < 0

    def __le__(self, other):
        return compare(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return compare(self, _coerce(other)) > 0

    def __ge__(self, other):
        return compare(self, _coerce(other)) >= 0

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __str__(self):
        return print_cnf(self)

    def __repr__(self):
        return f"Ordinal({print_cnf(self)!r})"

    def __bool__(self):
        return bool(self.terms)


ZERO = Ordinal((), _trusted=True)
ONE = Ordinal(((ZERO, 1),), _trusted=True)
OMEGA = Ordinal(((ONE, 1),), _trusted=True)

OrdinalLike = Union[Ordinal, int]


def _coerce(x: OrdinalLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        return Ordinal.finite(x)
    raise TypeError(f"cannot use {type(x).__name__} as an ordinal")


def compare(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def add(a: OrdinalLike, b: OrdinalLike, *, max_depth: int = MAX_DEPTH) -> Ordinal:
    a, b = _coerce(a), _coerce(b)
    if not b.terms:
        return a
    if not a.terms:
        return b
    lead = b.terms[0][0]
    kept = []
    for exp, coeff in a.terms:
        c = compare(exp, lead)
        if c > 0:
            kept.append((exp, coeff))
        elif c == 0:
            kept.append((exp, coeff + b.terms[0][1]))
            kept.extend(b.terms[1:])
            return Ordinal(kept, max_depth=max_depth, _trusted=True)
        else:
            break
    kept.extend(b.terms)
    return Ordinal(kept, max_depth=max_depth, _trusted=True)


def subtract(b: OrdinalLike, a: OrdinalLike) -> Ordinal:
    """Left subtraction: the unique g with ``a + g == b``; requires a <= b."""
    a, b = _coerce(a), _coerce(b)
    if compare(a, b) > 0:
        raise OrdinalError(f"{a} > {b}")
    i = 0
    while i < len(a.terms) and a.terms[i] == b.terms[i]:
        i += 1
    if i == len(a.terms):
        return Ordinal(b.terms[i:], _trusted=True)
    # first difference: same exponent with a smaller coefficient, or a smaller exponent
    ea, ca = a.terms[i]
    eb, cb = b.terms[i]
    if ea == eb:
        return Ordinal(((eb, cb - ca),) + b.terms[i + 1:], _trusted=True)
    return Ordinal(b.terms[i:], _trusted=True)


def successor(a: OrdinalLike) -> Ordinal:
    return add(a, ONE)


def is_limit(a: OrdinalLike) -> bool:
    a = _coerce(a)
    return bool(a.terms) and a.finite_part == 0


def times_omega(p: OrdinalLike, *, max_depth: int = MAX_DEPTH) -> Ordinal:
    """``p * w``, the supremum of ``p * n`` over finite n."""
    p = _coerce(p)
    if not p.terms:
        raise OrdinalError("times_omega(0) is undefined here: period must be positive")
    exp = add(p.leading_exponent, ONE, max_depth=max_depth)
    return Ordinal(((exp, 1),), max_depth=max_depth, _trusted=True)


def multiply_finite(p: OrdinalLike, n: int) -> Ordinal:
    """``p * n`` by repeated addition."""
    out = ZERO
    for _ in range(n):
        out = add(out, p)
    return out


# text form ----------------------------------------------------------------

def print_cnf(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if not exp.terms:
            parts.append(str(coeff))
        elif exp == ONE:
            parts.append(f"w*{coeff}")
        else:
            e = print_cnf(exp)
            if not exp.is_finite:
                e = f"({e})"
            parts.append(f"w^{e}*{coeff}")
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


class _Parser:
    def __init__(self, text: str):
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.toks.append(("nat", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None and not m.group(2).isspace():
                self.toks.append(("sym", m.group(2), m.start(2)))
        self.pos = 0
        self.text = text

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, len(self.text))

    def eat(self, sym):
        kind, val, _ = self.peek()
        if kind == "sym" and val == sym:
            self.pos += 1
            return True
        return False

    def fail(self, msg):
        col = self.peek()[2]
        raise OrdinalParseError(f"{msg} at column {col + 1} in {self.text!r}")

    def ordinal(self) -> Ordinal:
        total = self.term()
        while self.eat("+"):
            total = _append_term(total, self.term(), self)
        return total

    def term(self) -> Ordinal:
        kind, val, _ = self.peek()
        if kind == "nat":
            self.pos += 1
            return Ordinal.finite(val)
        if kind == "sym" and val == "w":
            self.pos += 1
            exp = ONE
            if self.eat("^"):
                exp = self.atom()
            coeff = 1
            if self.eat("*"):
                kind, val, _ = self.peek()
                if kind != "nat":
                    self.fail("expected coefficient")
                self.pos += 1
                coeff = val
                if coeff < 1:
                    self.fail("coefficient must be positive")
            if not exp.terms:
                return Ordinal.finite(coeff)
            return Ordinal(((exp, coeff),))
        if kind == "sym" and val == "(":
            self.pos += 1
            inner = self.ordinal()
            if not self.eat(")"):
                self.fail("expected ')'")
            return inner
        self.fail("expected term")

    def atom(self) -> Ordinal:
        kind, val, _ = self.peek()
        if kind == "nat":
            self.pos += 1
            return Ordinal.finite(val)
        if kind == "sym" and val == "(":
            self.pos += 1
            inner = self.ordinal()
            if not self.eat(")"):
                self.fail("expected ')'")
            return inner
        if kind == "sym" and val == "w":
            self.pos += 1
            return OMEGA
        self.fail("expected exponent")


def _append_term(acc: Ordinal, t: Ordinal, parser: _Parser) -> Ordinal:
    # strict CNF text: each later term must have a smaller exponent
    if acc.terms and t.terms and compare(t.terms[0][0], acc.terms[-1][0]) >= 0:
        parser.fail("terms must have strictly decreasing exponents")
    return add(acc, t)


def parse_cnf(text: str) -> Ordinal:
    p = _Parser(text)
    if not p.toks:
        raise OrdinalParseError("empty ordinal")
    out = p.ordinal()
    if p.pos != len(p.toks):
        p.fail("trailing input")
    return out


def omega_poly(*coeffs: int) -> Ordinal:
    """``omega_poly(a, b, c)`` is ``w^2*a + w*b + c`` (most significant first)."""
    out = ZERO
    n = len(coeffs)
    for i, c in enumerate(coeffs):
        if c < 0:
            raise OrdinalError("coefficients must be non-negative")
        if c:
            out = add(out, Ordinal(((Ordinal.finite(n - 1 - i), c),)))
    return out
