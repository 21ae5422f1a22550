"""Two-counter Minsky machines.

Program text, one directive per line (``#`` starts a comment)::

    states q0 q1 qf
    init q0
    halt qf
    q1 inc 1 -> q0
    q0 test 2 zero -> qf dec -> q1
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

__all__ = [
    "Instruction",
    "MinskyMachine",
    "Configuration",
    "Trace",
    "Halted",
    "ProgramError",
    "parse_program",
    "dump_program",
    "validate",
    "fire",
    "step",
    "step_labelled",
    "run",
    "halts",
    "explore",
]


@dataclass(frozen=True)
class Instruction:
    """``(source, counter, then, alt)``; ``alt is None`` means increment.

    For a test instruction ``then`` is the zero branch and ``alt`` the
    state reached after decrementing.
    """

    index: int
    source: str
    counter: int
    then: str
    alt: Optional[str] = None

    @property
    def is_increment(self) -> bool:
        return self.alt is None

    def __str__(self) -> str:
        if self.alt is None:
            return f"{self.source} inc {self.counter} -> {self.then}"
        return f"{self.source} test {self.counter} zero -> {self.then} dec -> {self.alt}"


class Configuration(NamedTuple):
    q: str
    n1: int
    n2: int

    def counter(self, i: int) -> int:
        return self.n1 if i == 1 else self.n2

    def __str__(self) -> str:
        return f"({self.q},{self.n1},{self.n2})"


@dataclass(frozen=True)
class MinskyMachine:
    states: tuple
    instructions: tuple
    q0: str
    qf: str

    @classmethod
    def build(cls, states: Iterable[str], instructions: Iterable[tuple], q0: str, qf: str) -> "MinskyMachine":
        """Convenience constructor from ``(source, counter, then, alt)`` tuples."""
        instrs = tuple(Instruction(k, *spec) for k, spec in enumerate(instructions))
        return cls(tuple(states), instrs, q0, qf)

    def instructions_from(self, q: str) -> list:
        return [x for x in self.instructions if x.source == q]

    @property
    def deterministic(self) -> bool:
        sources = [x.source for x in self.instructions]
        return len(sources) == len(set(sources))


class ProgramError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def _counter_index(word: str, lineno: int) -> int:
    if word not in ("1", "2"):
        raise ProgramError(lineno, f"counter must be 1 or 2, got {word!r}")
    return int(word)


def parse_program(text: str) -> MinskyMachine:
    states: list[str] = []
    instrs: list[tuple] = []
    q0 = qf = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        w = line.split()
        if w[0] == "states":
            if len(w) < 2:
                raise ProgramError(lineno, "'states' needs at least one name")
            states.extend(s for s in w[1:] if s not in states)
        elif w[0] == "init":
            if len(w) != 2:
                raise ProgramError(lineno, "expected 'init <state>'")
            q0 = w[1]
        elif w[0] == "halt":
            if len(w) != 2:
                raise ProgramError(lineno, "expected 'halt <state>'")
            qf = w[1]
        elif len(w) == 5 and w[1] == "inc" and w[3] == "->":
            instrs.append((w[0], _counter_index(w[2], lineno), w[4], None))
        elif (len(w) == 9 and w[1] == "test" and w[3] == "zero" and w[4] == "->"
              and w[6] == "dec" and w[7] == "->"):
            instrs.append((w[0], _counter_index(w[2], lineno), w[5], w[8]))
        else:
            raise ProgramError(lineno, f"cannot parse {line!r}")
    if q0 is None:
        raise ProgramError(0, "missing 'init' line")
    if qf is None:
        raise ProgramError(0, "missing 'halt' line")
    return MinskyMachine.build(states, instrs, q0, qf)


def dump_program(m: MinskyMachine) -> str:
    lines = ["states " + " ".join(m.states), f"init {m.q0}", f"halt {m.qf}"]
    lines += [str(x) for x in m.instructions]
    return "\n".join(lines) + "\n"


def validate(m: MinskyMachine) -> list[str]:
    """Return every violated well-formedness condition (empty when valid)."""
    problems = []
    known = set(m.states)
    for name, q in (("initial", m.q0), ("halting", m.qf)):
        if q not in known:
            problems.append(f"{name} state {q!r} is not declared")
    for x in m.instructions:
        if x.source == m.qf:
            problems.append(f"instruction {x.index} ({x}) starts from the halting state")
        if x.counter not in (1, 2):
            problems.append(f"instruction {x.index} ({x}) uses counter {x.counter}")
        for q in (x.source, x.then, x.alt):
            if q is not None and q not in known:
                problems.append(f"instruction {x.index} ({x}) mentions undeclared state {q!r}")
    for q in m.states:
        if q != m.qf and not m.instructions_from(q):
            problems.append(f"state {q!r} has no instruction")
    return problems


def fire(x: Instruction, c: Configuration) -> Configuration:
    """The configuration reached by applying instruction ``x`` to ``c``."""
    if x.source != c.q:
        raise ValueError(f"instruction {x} does not apply in state {c.q}")
    n = [c.n1, c.n2]
    if x.is_increment:
        n[x.counter - 1] += 1
        return Configuration(x.then, *n)
    if n[x.counter - 1] > 0:
        n[x.counter - 1] -= 1
        return Configuration(x.alt, *n)
    return Configuration(x.then, *n)


def step_labelled(m: MinskyMachine, c: Configuration) -> list[tuple[Instruction, Configuration]]:
    if c.q == m.qf:
        return []
    return [(x, fire(x, c)) for x in m.instructions_from(c.q)]


def step(m: MinskyMachine, c: Configuration) -> frozenset:
    return frozenset(nxt for _, nxt in step_labelled(m, c))


@dataclass
class Trace:
    configs: list
    instructions: list  # instructions[k] takes configs[k] to configs[k+1]
    status: str  # "halted" | "budget-exhausted"

    @property
    def steps(self) -> int:
        return len(self.instructions)

    @property
    def halted(self) -> bool:
        return self.status == "halted"


class Halted(NamedTuple):
    steps: int
    final: Configuration


def _bfs(m: MinskyMachine, c0: Configuration, max_steps: int):
    """Breadth-first search; returns (parents, halting config or None, frontier)."""
    parent = {c0: None}
    frontier = [c0]
    if c0.q == m.qf:
        return parent, c0, frontier
    for _ in range(max_steps):
        nxt_frontier = []
        for c in frontier:
            for x, nxt in step_labelled(m, c):
                if nxt in parent:
                    continue
                parent[nxt] = (c, x)
                if nxt.q == m.qf:
                    return parent, nxt, [nxt]
                nxt_frontier.append(nxt)
        if not nxt_frontier:
            break
        frontier = nxt_frontier
    return parent, None, frontier


def _path(parent: dict, end: Configuration) -> tuple[list, list]:
    configs, instrs = [end], []
    while parent[configs[-1]] is not None:
        prev, x = parent[configs[-1]]
        configs.append(prev)
        instrs.append(x)
    return configs[::-1], instrs[::-1]


def run(m: MinskyMachine, c0: Configuration, max_steps: int = 10_000, strategy: str = "first") -> Trace:
    """Run the machine from ``c0``.

    ``strategy="first"`` always fires the first applicable instruction in
    declaration order.  ``strategy="all"`` explores the step relation
    breadth-first and returns a shortest path to a halting configuration,
    or a path to the least deepest configuration when the budget runs out.
    """
    c0 = Configuration(*c0)
    if c0.n1 < 0 or c0.n2 < 0:
        raise ValueError("counters must be >= 0")
    if strategy == "first":
        configs, instrs = [c0], []
        c = c0
        while c.q != m.qf and len(instrs) < max_steps:
            x = m.instructions_from(c.q)[0]
            c = fire(x, c)
            configs.append(c)
            instrs.append(x)
        return Trace(configs, instrs, "halted" if c.q == m.qf else "budget-exhausted")
    if strategy == "all":
        parent, final, frontier = _bfs(m, c0, max_steps)
        if final is not None:
            return Trace(*_path(parent, final), "halted")
        return Trace(*_path(parent, min(frontier)), "budget-exhausted")
    raise ValueError(f"unknown strategy {strategy!r}")


def halts(m: MinskyMachine, c0: Configuration, budget: int = 10_000) -> Optional[Halted]:
    """Minimal number of steps to a halting configuration, or None if unknown within budget."""
    parent, final, _ = _bfs(m, Configuration(*c0), budget)
    if final is None:
        return None
    configs, _ = _path(parent, final)
    return Halted(len(configs) - 1, final)


def explore(m: MinskyMachine, c0: Configuration, max_steps: int, counter_bound: Optional[int] = None) -> dict:
    """Every configuration reachable in at most ``max_steps`` steps, mapped to its distance.

    Configurations with a counter above ``counter_bound`` are recorded but
    not expanded.
    """
    c0 = Configuration(*c0)
    dist = {c0: 0}
    queue = deque([c0])
    while queue:
        c = queue.popleft()
        if dist[c] >= max_steps:
            continue
        if counter_bound is not None and max(c.n1, c.n2) > counter_bound:
            continue
        for nxt in sorted(step(m, c)):
            if nxt not in dist:
                dist[nxt] = dist[c] + 1
                queue.append(nxt)
    return dist
