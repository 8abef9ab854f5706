"""Generated instances: payload bundle, expected answer and provenance, with
directory-based io so every instance can be rerun from files alone."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..automata import Dfa, Nfa, emit_automaton, parse_automaton
from ..errors import ParseError
from ..matching import CostFn, emit_costs, parse_costs
from ..parsing_folding import Cfg, PairedAlphabet, emit_cfg, emit_pairing, parse_cfg, parse_pairing
from ..slp import Slp, emit_slp, parse_slp


@dataclass(frozen=True)
class Expected:
    """The expected decision, optionally reached by comparing a numeric solver
    output against a threshold."""

    accept: bool
    threshold: int | None = None
    direction: str | None = None  # "le" or "ge"

    def __post_init__(self):
        if (self.threshold is None) != (self.direction is None):
            raise ValueError("threshold and direction come together")
        if self.direction is not None and self.direction not in ("le", "ge"):
            raise ValueError("direction must be 'le' or 'ge'")

    def decide(self, value) -> bool:
        """Map a solver output (bool or number) to a decision."""
        if self.threshold is None:
            return bool(value)
        if self.direction == "le":
            return value <= self.threshold
        return value >= self.threshold

    def holds_for(self, value) -> bool:
        """Whether a solver's output matches the expected decision."""
        return self.decide(value) == self.accept


@dataclass
class GeneratedInstance:
    payload: dict
    expected: Expected
    provenance: dict = field(default_factory=dict)
    certified: bool = True


_EXTENSIONS = [
    (Slp, "slp", emit_slp, parse_slp),
    (Dfa, "aut", emit_automaton, parse_automaton),
    (Nfa, "aut", emit_automaton, parse_automaton),
    (Cfg, "cfg", emit_cfg, parse_cfg),
    (PairedAlphabet, "pairing", emit_pairing, parse_pairing),
    (CostFn, "costs", emit_costs, parse_costs),
]


def emit_expected(expected: Expected, certified: bool) -> str:
    answer = "accept" if expected.accept else "reject"
    if expected.threshold is None:
        lines = [answer]
    else:
        lines = [f"threshold {expected.threshold} {expected.direction}", answer]
    if not certified:
        lines.append("uncertified")
    return "\n".join(lines) + "\n"


def parse_expected(text: str):
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines:
        raise ParseError("empty expected file", None)
    certified = "uncertified" not in lines
    lines = [l for l in lines if l != "uncertified"]
    head = lines[0].split()
    if head[0] in ("accept", "reject"):
        return Expected(accept=head[0] == "accept"), certified
    if head[0] == "threshold" and len(head) == 3:
        answer = True
        if len(lines) > 1:
            answer = lines[1] == "accept"
        return Expected(accept=answer, threshold=int(head[1]), direction=head[2]), certified
    raise ParseError(f"bad expected line {lines[0]!r}", 1)


def write_bundle(instance: GeneratedInstance, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for key, value in instance.payload.items():
        for cls, ext, emit, _ in _EXTENSIONS:
            if isinstance(value, cls):
                (directory / f"payload.{key}.{ext}").write_text(emit(value))
                break
        else:
            raise TypeError(f"cannot serialize payload item {key!r}: {value!r}")
    (directory / "expected.txt").write_text(
        emit_expected(instance.expected, instance.certified)
    )
    prov = "".join(
        f"{k}={instance.provenance[k]}\n" for k in sorted(instance.provenance)
    )
    (directory / "provenance.txt").write_text(prov)


def read_bundle(directory) -> GeneratedInstance:
    directory = Path(directory)
    payload = {}
    for path in sorted(directory.glob("payload.*")):
        parts = path.name.split(".")
        if len(parts) != 3:
            raise ParseError(f"bad payload filename {path.name!r}", None)
        _, key, ext = parts
        for _, e, _, parse in _EXTENSIONS:
            if e == ext:
                payload[key] = parse(path.read_text())
                break
        else:
            raise ParseError(f"unknown payload extension {ext!r}", None)
    expected, certified = parse_expected((directory / "expected.txt").read_text())
    provenance = {}
    prov_path = directory / "provenance.txt"
    if prov_path.exists():
        for line in prov_path.read_text().splitlines():
            if line.strip():
                k, _, v = line.partition("=")
                provenance[k] = v
    return GeneratedInstance(payload, expected, provenance, certified)
