"""Shipped example programs with their expected verdicts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from ..engine import DEFAULT_BUDGET, Budget, run
from ..isa import Program, parse_program
from ..oracles import Oracle, parse_oracle
from ..ordinals import parse_cnf

CORPUS_DIR = Path(__file__).resolve().parent
MANIFEST = CORPUS_DIR / "corpus.json"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    oracle: str
    kind: str
    output: Optional[int] = None
    time: Optional[str] = None
    level: Optional[int] = None
    provenance: str = ""
    input: int = 0

    def program(self) -> Program:
        return parse_program(self.path.read_text())

    def oracle_obj(self) -> Oracle:
        return parse_oracle(self.oracle, base_dir=str(self.path.parent))

    def matches(self, verdict) -> bool:
        if verdict.kind != self.kind:
            return False
        if self.kind == "halt":
            return (self.output is None or verdict.output == self.output) and (
                self.time is None or verdict.time == parse_cnf(self.time))
        if self.kind == "diverge":
            return self.level is None or verdict.level == self.level
        return True

    def expected_text(self) -> str:
        if self.kind == "halt":
            return f"HALT out={self.output} t={self.time}"
        if self.kind == "diverge":
            return f"DIVERGE level={self.level}"
        return "BUDGET"


def load_corpus(manifest: Union[str, Path, None] = None) -> List[CorpusEntry]:
    manifest = Path(manifest) if manifest is not None else MANIFEST
    root = manifest.parent
    out = []
    for d in json.loads(manifest.read_text()):
        exp = d["expected"]
        out.append(CorpusEntry(
            name=d["name"], path=root / d["path"], oracle=d.get("oracle", "zeros"),
            kind=exp["kind"], output=exp.get("output"), time=exp.get("time"),
            level=exp.get("level"), provenance=d.get("provenance", ""),
            input=d.get("input", 0)))
    return out


def check_entry(entry: CorpusEntry, budget: Budget = DEFAULT_BUDGET):
    """Run an entry; returns ``(ok, verdict)``."""
    verdict, _ = run(entry.program(), entry.oracle_obj(), budget, input=entry.input,
                     record_trace=False)
    return entry.matches(verdict), verdict
