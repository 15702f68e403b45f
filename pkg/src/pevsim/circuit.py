"""Minimal circuit-description files: parse, render, execute.

Grammar (one step per line, ``#`` starts a comment, blank lines ignored):

    step ::= LABEL ':' op
    op   ::= 'H' '(' QUBIT ')' | 'UF' '(' FNAME ')' | 'MEASURE' '(' QUBIT ')'

with QUBIT in {0, 1} and FNAME in {f1, f2, f3, f4}.  Labels are unique; at
most one MEASURE is allowed and it must be the last step.  The language is
deliberately tiny -- it exists to drive the two-register pipeline from a
file, not to be a general circuit format.

Execution starts from the standard input state |0>|1> and applies the
steps in order; a MEASURE samples its outcome from a seeded stream (the
canonical file is deterministic, so the seed is inert there).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .deutsch import initial_state
from .gates import HADAMARD, OracleFunction, measure_qubit, oracle_pev
from .linalg import identity, kron
from .pev import DensityMatrix, PevOperator, apply_family, evolve, outcome_distribution
from .rng import make_stream

_ORACLE_NAMES = ("f1", "f2", "f3", "f4")
_STEP_RE = re.compile(
    r"^(?P<label>[A-Za-z_][A-Za-z0-9_]*)\s*:\s*(?P<op>[A-Za-z]+)\s*\(\s*(?P<arg>[^()\s]+)\s*\)$"
)


class CircuitError(ValueError):
    """Malformed circuit text; the message carries the offending line number."""


@dataclass(frozen=True)
class CircuitStep:
    label: str
    kind: str  # "H" | "UF" | "MEASURE"
    qubit: Optional[int] = None
    oracle: Optional[str] = None

    def render(self) -> str:
        arg = self.oracle if self.kind == "UF" else str(self.qubit)
        return f"{self.label}: {self.kind}({arg})"


@dataclass(frozen=True)
class CircuitFile:
    steps: tuple[CircuitStep, ...]

    def __post_init__(self) -> None:
        labels = [s.label for s in self.steps]
        if len(set(labels)) != len(labels):
            raise CircuitError("step labels must be unique")
        measures = [i for i, s in enumerate(self.steps) if s.kind == "MEASURE"]
        if len(measures) > 1:
            raise CircuitError("at most one MEASURE step is allowed")
        if measures and measures[0] != len(self.steps) - 1:
            raise CircuitError("MEASURE must be the last step")


def parse_circuit(text: str) -> CircuitFile:
    steps: list[CircuitStep] = []
    seen_labels: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _STEP_RE.match(line)
        if match is None:
            raise CircuitError(f"syntax error, line {lineno}")
        label, op, arg = match.group("label", "op", "arg")
        if label in seen_labels:
            raise CircuitError(f"duplicate label {label!r}, line {lineno}")
        seen_labels.add(label)
        if op in ("H", "MEASURE"):
            if not arg.isdigit():
                raise CircuitError(f"expected a qubit index, line {lineno}")
            qubit = int(arg)
            if qubit not in (0, 1):
                raise CircuitError(f"qubit index out of range, line {lineno}")
            steps.append(CircuitStep(label=label, kind=op, qubit=qubit))
        elif op == "UF":
            if arg not in _ORACLE_NAMES:
                raise CircuitError(f"unknown oracle {arg}, line {lineno}")
            steps.append(CircuitStep(label=label, kind=op, oracle=arg))
        else:
            raise CircuitError(f"unknown operation {op!r}, line {lineno}")
        if len(steps) >= 2 and steps[-2].kind == "MEASURE":
            raise CircuitError(f"MEASURE must be the last step, line {lineno}")
    return CircuitFile(steps=tuple(steps))


def render(circuit: CircuitFile) -> str:
    return "\n".join(step.render() for step in circuit.steps) + "\n"


def canonical_deutsch(oracle: str) -> str:
    """The circuit text matching the tau0..tau4 pipeline for one oracle."""
    return f"t1: H(0)\nt1b: H(1)\nt2: UF({oracle})\nt3: H(0)\nt4: MEASURE(0)\n"


@dataclass(frozen=True)
class ExecutionResult:
    states: tuple[DensityMatrix, ...]
    outcome: Optional[int]
    distribution: Optional[tuple[tuple[int, float], ...]]


def execute(circuit: CircuitFile, seed: int = 0) -> ExecutionResult:
    rho = initial_state()
    states = [rho]
    outcome: Optional[int] = None
    distribution = None
    gen = make_stream(seed)
    for step in circuit.steps:
        if step.kind == "H":
            h = kron(HADAMARD, identity(2)) if step.qubit == 0 else kron(identity(2), HADAMARD)
            rho = evolve(rho, PevOperator(h, kind="unitary-derived"))
        elif step.kind == "UF":
            rho = evolve(rho, oracle_pev(OracleFunction.from_name(step.oracle)))
        else:
            family = measure_qubit(step.qubit, 2)
            distribution = tuple(outcome_distribution(rho, family))
            outcome, rho = apply_family(rho, family, gen)
        states.append(rho)
    return ExecutionResult(states=tuple(states), outcome=outcome, distribution=distribution)
