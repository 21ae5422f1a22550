"""Compile a two-counter Minsky machine into an APA framework.

Arguments are the tagged constructors of :class:`~apa_minsky.core.Argument`:
``counter1(n)``, ``counter2(n)``, ``mstate(q)``, ``instr(k)`` and
``instr_conv(k)`` where ``k`` is an instruction's declaration index.  The
attack relation is empty and every persuasion is a conversion drawn from six
rule families, generated lazily from the visible arguments of a state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .core import Argument, Framework, Kind, Triple
from .minsky import Configuration, Instruction, MinskyMachine, validate

__all__ = [
    "EncodedFramework",
    "ConfigState",
    "MidInstruction",
    "Foreign",
    "InvalidMachine",
    "encode",
    "classify",
    "config_state",
    "family_of",
    "rule_instances",
    "decode",
]


class InvalidMachine(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid machine: " + "; ".join(problems))


@dataclass(frozen=True)
class EncodedFramework:
    framework: Framework
    machine: MinskyMachine
    n1: int
    n2: int

    @property
    def instruction_args(self) -> frozenset:
        return frozenset(Argument.instr(x.index) for x in self.machine.instructions)

    def instruction(self, arg: Argument) -> Instruction:
        return self.machine.instructions[arg.value]


def _family_triples(m: MinskyMachine, x: Instruction, n: int) -> Iterator[tuple[int, Triple]]:
    """Families 2-6 instances of instruction ``x`` for counter value ``n``."""
    conv = Argument.instr_conv(x.index)
    here = Argument.counter(x.counter, n)
    if x.is_increment:
        yield 2, Triple(conv, here, Argument.counter(x.counter, n + 1))
        yield 4, Triple(here, conv, Argument.mstate(x.then))
    elif n > 0:
        yield 3, Triple(conv, here, Argument.counter(x.counter, n - 1))
        yield 5, Triple(here, conv, Argument.mstate(x.alt))
    else:
        yield 6, Triple(here, conv, Argument.mstate(x.then))


def _family1(x: Instruction) -> Triple:
    return Triple(Argument.instr(x.index), Argument.mstate(x.source), Argument.instr_conv(x.index))


def encode(m: MinskyMachine, n1: int, n2: int) -> EncodedFramework:
    problems = validate(m)
    if problems:
        raise InvalidMachine(problems)
    if n1 < 0 or n2 < 0:
        raise ValueError("counters must be >= 0")
    states = frozenset(m.states)
    n_instr = len(m.instructions)

    def universe(a: Argument) -> bool:
        if a.kind in (Kind.COUNTER1, Kind.COUNTER2):
            return isinstance(a.value, int) and a.value >= 0
        if a.kind == Kind.MSTATE:
            return a.value in states
        if a.kind in (Kind.INSTR, Kind.INSTR_CONV):
            return isinstance(a.value, int) and 0 <= a.value < n_instr
        return False

    def provider(state: frozenset) -> frozenset:
        out = set()
        for a in state:
            if a.kind == Kind.INSTR:
                x = m.instructions[a.value]
                if Argument.mstate(x.source) in state:
                    out.add(_family1(x))
            elif a.kind == Kind.INSTR_CONV:
                x = m.instructions[a.value]
                wanted = Kind.COUNTER1 if x.counter == 1 else Kind.COUNTER2
                for c in state:
                    if c.kind == wanted:
                        out.update(t for _, t in _family_triples(m, x, c.value))
        return frozenset(out)

    initial = frozenset(
        [Argument.counter1(n1), Argument.counter2(n2), Argument.mstate(m.q0)]
        + [Argument.instr(x.index) for x in m.instructions]
    )
    fw = Framework(universe=universe, attacks=frozenset(), provider=provider, initial=initial)
    return EncodedFramework(fw, m, n1, n2)


def family_of(ef: EncodedFramework, t: Triple) -> int:
    """Which of the six rule families produced ``t``."""
    if t.source.kind == Kind.INSTR:
        return 1
    if t.source.kind == Kind.INSTR_CONV:
        x = ef.instruction(t.source)
        return 2 if x.is_increment else 3
    x = ef.instruction(t.target)
    if x.is_increment:
        return 4
    return 5 if t.source.value > 0 else 6


def rule_instances(ef: EncodedFramework, bound: int) -> dict[int, list[Triple]]:
    """Every rule instance whose counter arguments are at most ``bound``, by family.

    Families 2 and 3 relate ``n`` to ``n +- 1``; an instance is included when
    its source-side counter value ``n`` is at most ``bound``.
    """
    out: dict[int, list[Triple]] = {k: [] for k in range(1, 7)}
    for x in ef.machine.instructions:
        out[1].append(_family1(x))
    for x in ef.machine.instructions:
        for n in range(bound + 1):
            for fam, t in _family_triples(ef.machine, x, n):
                out[fam].append(t)
    return out


@dataclass(frozen=True)
class ConfigState:
    config: Configuration


@dataclass(frozen=True)
class MidInstruction:
    instruction: Instruction
    counter1: tuple
    counter2: tuple


@dataclass(frozen=True)
class Foreign:
    description: str


StateClass = Union[ConfigState, MidInstruction, Foreign]


def classify(ef: EncodedFramework, s: frozenset) -> StateClass:
    by_kind: dict[Kind, list] = {k: [] for k in Kind}
    for a in sorted(s):
        by_kind[a.kind].append(a.value)
    instrs = ef.instruction_args
    if by_kind[Kind.OPAQUE]:
        return Foreign(f"{len(by_kind[Kind.OPAQUE])} arguments outside the encoding")
    c1, c2 = tuple(by_kind[Kind.COUNTER1]), tuple(by_kind[Kind.COUNTER2])
    mstates, convs = by_kind[Kind.MSTATE], by_kind[Kind.INSTR_CONV]
    if (instrs <= s and len(mstates) == 1 and len(c1) == 1 and len(c2) == 1 and not convs):
        return ConfigState(Configuration(mstates[0], c1[0], c2[0]))
    if len(convs) == 1 and not mstates:
        return MidInstruction(ef.machine.instructions[convs[0]], c1, c2)
    missing = len(instrs - s)
    return Foreign(
        f"{len(mstates)} state, {len(convs)} conversion, {len(c1)}+{len(c2)} counter "
        f"arguments, {missing} instruction arguments missing"
    )


def config_state(ef: EncodedFramework, c: Configuration) -> frozenset:
    c = Configuration(*c)
    if c.q not in ef.machine.states:
        raise ValueError(f"unknown machine state {c.q!r}")
    return ef.instruction_args | {
        Argument.mstate(c.q), Argument.counter1(c.n1), Argument.counter2(c.n2)
    }


def decode(ef: EncodedFramework, s: frozenset) -> Optional[Configuration]:
    cls = classify(ef, s)
    return cls.config if isinstance(cls, ConfigState) else None
