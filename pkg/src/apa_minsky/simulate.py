"""Replay Minsky runs as APA transitions and audit the APA state space.

Each machine step becomes two transitions: the instruction argument first
converts the current machine-state argument into the instruction's
auxiliary argument, then the counter conversion and the state conversion
fire together.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional

from .core import (
    DEFAULT_SUBSET_BUDGET,
    Argument,
    Triple,
    apply,
    enabled_persuasions,
    reachable,
    successors,
)
from .encoder import ConfigState, EncodedFramework, Foreign, MidInstruction, classify, config_state
from .minsky import Configuration, Instruction, Trace, explore, fire, halts, run

__all__ = [
    "NotApplicable",
    "MissingTriple",
    "SimulationFailure",
    "GuidedStep",
    "GuidedTrace",
    "guided_step",
    "replay",
    "simulate",
    "AuditReport",
    "audit",
    "Verdict",
    "halting_equivalence",
]


class NotApplicable(ValueError):
    pass


class MissingTriple(RuntimeError):
    """An expected rule instance is not enabled; points at an encoder bug."""


class SimulationFailure(AssertionError):
    """The APA run does not track the machine run."""


@dataclass(frozen=True)
class GuidedStep:
    instruction: Instruction
    first: frozenset   # Γ of the first transition
    second: frozenset  # Γ of the second transition
    mid: frozenset
    next: frozenset


def _require_enabled(ef: EncodedFramework, s: frozenset, wanted: list[Triple]) -> None:
    enabled = enabled_persuasions(ef.framework, s)
    for t in wanted:
        if t not in enabled:
            raise MissingTriple(f"{t} is not enabled")


def guided_step(ef: EncodedFramework, s: frozenset, instr: Instruction) -> GuidedStep:
    cls = classify(ef, s)
    if not isinstance(cls, ConfigState):
        raise NotApplicable(f"state does not encode a configuration: {cls}")
    c = cls.config
    if c.q != instr.source:
        raise NotApplicable(f"instruction {instr} does not start in {c.q}")

    x = instr.index
    conv = Argument.instr_conv(x)
    gamma1 = [Triple(Argument.instr(x), Argument.mstate(c.q), conv)]
    _require_enabled(ef, s, gamma1)
    mid = apply(s, gamma1)

    i, n = instr.counter, c.counter(instr.counter)
    here = Argument.counter(i, n)
    if instr.is_increment:
        gamma2 = [Triple(conv, here, Argument.counter(i, n + 1)),
                  Triple(here, conv, Argument.mstate(instr.then))]
    elif n > 0:
        gamma2 = [Triple(conv, here, Argument.counter(i, n - 1)),
                  Triple(here, conv, Argument.mstate(instr.alt))]
    else:
        gamma2 = [Triple(here, conv, Argument.mstate(instr.then))]
    _require_enabled(ef, mid, gamma2)
    nxt = apply(mid, gamma2)

    expected = fire(instr, c)
    if classify(ef, nxt) != ConfigState(expected):
        raise SimulationFailure(f"{instr} from {c}: APA state decodes to {classify(ef, nxt)}, expected {expected}")
    return GuidedStep(instr, frozenset(gamma1), frozenset(gamma2), mid, nxt)


@dataclass
class GuidedTrace:
    minsky_trace: list
    apa_trace: list
    pairing: list  # GuidedStep per machine step
    status: str

    @property
    def transitions(self) -> int:
        return len(self.apa_trace) - 1

    def check(self, ef: EncodedFramework) -> None:
        """Raise :class:`SimulationFailure` unless the pairing invariants hold."""
        k = len(self.minsky_trace)
        if len(self.apa_trace) != 2 * (k - 1) + 1:
            raise SimulationFailure(f"{len(self.apa_trace)} APA states for {k} configurations")
        if len(self.pairing) != k - 1:
            raise SimulationFailure("pairing length mismatch")
        for j, s in enumerate(self.apa_trace):
            cls = classify(ef, s)
            if j % 2 == 0:
                if cls != ConfigState(self.minsky_trace[j // 2]):
                    raise SimulationFailure(f"APA state {j} decodes to {cls}, expected {self.minsky_trace[j // 2]}")
            elif not isinstance(cls, MidInstruction):
                raise SimulationFailure(f"APA state {j} should be mid-instruction, got {cls}")


def replay(ef: EncodedFramework, trace: Trace, check_successors: bool = False) -> GuidedTrace:
    """Build the APA run for a machine trace.

    With ``check_successors`` each guided state is also checked to be a
    member of the full successor set of its predecessor.
    """
    s = config_state(ef, trace.configs[0])
    apa, pairing = [s], []
    for instr in trace.instructions:
        g = guided_step(ef, s, instr)
        if check_successors:
            if g.mid not in successors(ef.framework, s).states:
                raise SimulationFailure("guided mid state is not a successor")
            if g.next not in successors(ef.framework, g.mid).states:
                raise SimulationFailure("guided next state is not a successor")
        apa += [g.mid, g.next]
        pairing.append(g)
        s = g.next
    gt = GuidedTrace(list(trace.configs), apa, pairing, trace.status)
    gt.check(ef)
    return gt


def simulate(
    ef: EncodedFramework,
    c0: Optional[Configuration] = None,
    max_steps: int = 10_000,
    strategy: str = "first",
    check_successors: bool = False,
) -> GuidedTrace:
    if c0 is None:
        c0 = Configuration(ef.machine.q0, ef.n1, ef.n2)
    trace = run(ef.machine, c0, max_steps, strategy)
    return replay(ef, trace, check_successors)


@dataclass
class AuditReport:
    states: int
    edges: int
    complete: bool
    counts: Counter
    unmatched: list = field(default_factory=list)      # ConfigStates not reached by the machine
    out_of_range: list = field(default_factory=list)   # ConfigStates beyond the machine exploration bound
    foreign: list = field(default_factory=list)        # (state, description)
    halting_violations: list = field(default_factory=list)
    overflows: dict = field(default_factory=dict)
    by_depth: dict = field(default_factory=dict)       # depth -> Counter of class names
    graph: object = None
    classes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.halting_violations


def class_name(cls) -> str:
    if isinstance(cls, ConfigState):
        return "config"
    if isinstance(cls, MidInstruction):
        return "mid"
    return "foreign"


def audit(
    ef: EncodedFramework,
    c0: Optional[Configuration] = None,
    depth: int = 64,
    state_cap: int = 100_000,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> AuditReport:
    """Explore every APA run from ``c0`` and classify the states found.

    Configurations decoded from APA states are compared against the
    configurations the machine reaches within ``depth`` steps.  A decoded
    configuration whose counters exceed what ``depth`` machine steps could
    produce is reported as out of range rather than unmatched.
    """
    if c0 is None:
        c0 = Configuration(ef.machine.q0, ef.n1, ef.n2)
    c0 = Configuration(*c0)
    fw = ef.framework
    if c0 != Configuration(ef.machine.q0, ef.n1, ef.n2):
        fw = replace(fw, initial=config_state(ef, c0))
    g = reachable(fw, (), max_states=state_cap, max_depth=depth, budget=budget)
    counter_bound = max(c0.n1, c0.n2) + depth
    known = explore(ef.machine, c0, depth, counter_bound)

    report = AuditReport(len(g.depth), len(g.edges), g.complete, Counter(), overflows=dict(g.errors), graph=g)
    out_deg = Counter(a for (a, _, _) in g.edges)
    for s, d in g.depth.items():
        cls = classify(ef, s)
        name = class_name(cls)
        report.classes[s] = cls
        report.counts[name] += 1
        report.by_depth.setdefault(d, Counter())[name] += 1
        if isinstance(cls, ConfigState):
            c = cls.config
            if c.q == ef.machine.qf and (out_deg[s] or s in g.errors):
                report.halting_violations.append(s)
            if c not in known:
                if max(c.n1, c.n2) > counter_bound:
                    report.out_of_range.append(c)
                else:
                    report.unmatched.append(c)
        elif isinstance(cls, Foreign):
            report.foreign.append((s, cls.description))
    report.unmatched.sort()
    report.out_of_range.sort()
    return report


@dataclass(frozen=True)
class Verdict:
    status: str  # "confirmed" | "unknown"
    steps: Optional[int] = None
    apa_transitions: Optional[int] = None
    final: Optional[Configuration] = None


def halting_equivalence(
    ef: EncodedFramework,
    c0: Optional[Configuration] = None,
    budget: int = 10_000,
    check_successors: bool = False,
) -> Verdict:
    """Check that a halting run is matched by a halting APA run of twice the length.

    Raises :class:`SimulationFailure` on any divergence.
    """
    m = ef.machine
    if c0 is None:
        c0 = Configuration(m.q0, ef.n1, ef.n2)
    result = halts(m, c0, budget)
    if result is None:
        return Verdict("unknown")
    gt = simulate(ef, c0, max_steps=result.steps, strategy="all", check_successors=check_successors)
    if gt.status != "halted" or len(gt.minsky_trace) - 1 != result.steps:
        raise SimulationFailure("shortest halting run could not be replayed")
    last = gt.apa_trace[-1]
    if gt.transitions != 2 * result.steps:
        raise SimulationFailure(f"{gt.transitions} APA transitions for {result.steps} machine steps")
    cls = classify(ef, last)
    if cls != ConfigState(result.final) or result.final.q != m.qf:
        raise SimulationFailure(f"final APA state decodes to {cls}, expected {result.final}")
    if len(successors(ef.framework, last)):
        raise SimulationFailure("halting APA state has successors")
    return Verdict("confirmed", result.steps, gt.transitions, result.final)
