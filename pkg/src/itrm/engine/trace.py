"""Run traces as line-delimited JSON.

Records are stored as compact tuples and only rendered on demand; a run of a
million steps would otherwise spend most of its time building dicts.
"""

from __future__ import annotations

import json
from typing import Iterator, List

from ..ordinals import Ordinal, add

_STEP, _LIMIT, _HALT, _DIVERGE, _BUDGET = range(5)


def _regs(regs) -> str:
    return "[" + ",".join(map(str, regs)) + "]"


class Trace:
    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self._recs: List[tuple] = []
        # every loop certificate whose limit was taken, in order
        self.certificates: list = []

    # recording -----------------------------------------------------------
    def step(self, base: Ordinal, offset: int, line: int, regs) -> None:
        if self.enabled:
            self._recs.append((_STEP, base, offset, line, regs))

    def limit(self, t: Ordinal, level: int, sigma: Ordinal, period: Ordinal, line: int, regs,
              cert=None) -> None:
        if self.enabled:
            self._recs.append((_LIMIT, t, level, sigma, period, line, regs))
            if cert is not None:
                self.certificates.append(cert)

    def end(self, verdict) -> None:
        if not self.enabled:
            return
        if verdict.kind == "halt":
            self._recs.append((_HALT, verdict.output, verdict.time))
        elif verdict.kind == "diverge":
            self._recs.append((_DIVERGE, verdict.level))
        else:
            self._recs.append((_BUDGET, verdict.reason))

    # reading ---------------------------------------------------------------
    def __len__(self):
        return len(self._recs)

    def lines(self) -> Iterator[str]:
        for rec in self._recs:
            kind = rec[0]
            if kind == _STEP:
                _, base, off, line, regs = rec
                t = str(add(base, off)) if base else str(off)
                yield f'{{"t":"{t}","ev":"step","line":{line},"regs":{_regs(regs)}}}'
            elif kind == _LIMIT:
                _, t, level, sigma, period, line, regs = rec
                yield (f'{{"t":"{t}","ev":"limit","level":{level},"sigma":"{sigma}",'
                       f'"period":"{period}","line":{line},"regs":{_regs(regs)}}}')
            elif kind == _HALT:
                yield f'{{"ev":"halt","out":{rec[1]},"t":"{rec[2]}"}}'
            elif kind == _DIVERGE:
                yield f'{{"ev":"diverge","level":{rec[1]}}}'
            else:
                yield f'{{"ev":"budget","reason":"{rec[1]}"}}'

    def records(self) -> Iterator[dict]:
        for line in self.lines():
            yield json.loads(line)

    def to_jsonl(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    def write(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            for line in self.lines():
                fh.write(line)
                fh.write("\n")
