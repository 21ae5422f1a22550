"""APA frameworks and the persuasion transition relation.

A state is a ``frozenset`` of visible arguments.  Persuasions are triples
``(source, target, result)`` where ``target`` is :data:`EPSILON` for an
inducement and an argument for a conversion.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Union

__all__ = [
    "Kind",
    "Argument",
    "EPSILON",
    "Triple",
    "Framework",
    "EnumerationOverflow",
    "Successors",
    "StateGraph",
    "DEFAULT_SUBSET_BUDGET",
    "attacks_in",
    "enabled_persuasions",
    "neg_set",
    "pos_set",
    "apply",
    "successors",
    "reachable",
    "explicit_framework",
    "parse_framework",
    "dump_framework",
    "state_label",
    "gamma_label",
    "sorted_triples",
]

DEFAULT_SUBSET_BUDGET = 2**16


class Kind(enum.IntEnum):
    COUNTER1 = 1
    COUNTER2 = 2
    MSTATE = 3
    INSTR = 4
    INSTR_CONV = 5
    OPAQUE = 6


_PREFIX = {
    Kind.COUNTER1: "c1.",
    Kind.COUNTER2: "c2.",
    Kind.MSTATE: "q.",
    Kind.INSTR: "I.",
    Kind.INSTR_CONV: "Ic.",
    Kind.OPAQUE: "",
}


@dataclass(frozen=True, order=True)
class Argument:
    """A tagged argument identity.

    The tag keeps the ranges of the different constructors disjoint, so
    ``Argument.counter1(3) != Argument.counter2(3)``.  Within one tag the
    payload type is fixed, which makes the derived ordering total.
    Instruction arguments carry the instruction's declaration index.
    """

    kind: Kind
    value: Union[int, str]

    @classmethod
    def counter1(cls, n: int) -> "Argument":
        if n < 0:
            raise ValueError(f"counter value must be >= 0, got {n}")
        return cls(Kind.COUNTER1, n)

    @classmethod
    def counter2(cls, n: int) -> "Argument":
        if n < 0:
            raise ValueError(f"counter value must be >= 0, got {n}")
        return cls(Kind.COUNTER2, n)

    @classmethod
    def counter(cls, i: int, n: int) -> "Argument":
        if i == 1:
            return cls.counter1(n)
        if i == 2:
            return cls.counter2(n)
        raise ValueError(f"counter index must be 1 or 2, got {i}")

    @classmethod
    def mstate(cls, q: str) -> "Argument":
        return cls(Kind.MSTATE, q)

    @classmethod
    def instr(cls, index: int) -> "Argument":
        return cls(Kind.INSTR, index)

    @classmethod
    def instr_conv(cls, index: int) -> "Argument":
        return cls(Kind.INSTR_CONV, index)

    @classmethod
    def opaque(cls, name: str) -> "Argument":
        return cls(Kind.OPAQUE, name)

    def __str__(self) -> str:
        return f"{_PREFIX[self.kind]}{self.value}"

    def __repr__(self) -> str:
        return f"Argument({self})"


class _Epsilon:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EPSILON"

    def __str__(self) -> str:
        return "ε"

    def __reduce__(self):
        return (_Epsilon, ())


EPSILON = _Epsilon()


class Triple(NamedTuple):
    source: Argument
    target: Union[Argument, _Epsilon]
    result: Argument

    @property
    def is_conversion(self) -> bool:
        return self.target is not EPSILON

    def sort_key(self):
        target = (0, self.source) if self.target is EPSILON else (1, self.target)
        return (self.source, target, self.result)

    def __str__(self) -> str:
        if self.target is EPSILON:
            return f"{self.source} -> {self.result}"
        return f"{self.source} : {self.target} -> {self.result}"


State = frozenset  # frozenset[Argument]
Gamma = frozenset  # frozenset[Triple]


def sorted_triples(triples: Iterable[Triple]) -> list[Triple]:
    return sorted(triples, key=Triple.sort_key)


class EnumerationOverflow(RuntimeError):
    """Raised when the nonempty subsets of the enabled set exceed the budget."""

    def __init__(self, enabled: int, budget: int):
        self.enabled = enabled
        self.budget = budget
        super().__init__(
            f"{enabled} enabled persuasions give {2**enabled - 1} subsets, "
            f"over the budget of {budget}"
        )


@dataclass(frozen=True)
class Framework:
    """An APA framework ``(A, R, R_p, A_init)``.

    ``universe`` is a membership test so infinite argument sets can be
    represented; ``finite_universe`` is set when the universe is an explicit
    finite set.  ``provider`` maps a finite state to the persuasion triples
    whose source and (non-epsilon) target are visible in it.
    """

    universe: Callable[[Argument], bool]
    attacks: frozenset
    provider: Callable[[frozenset], frozenset]
    initial: frozenset
    finite_universe: frozenset | None = None
    triples: frozenset | None = None  # explicit R_p when finite

    def attackers_of(self, a: Argument) -> frozenset:
        return frozenset(x for (x, y) in self.attacks if y == a)


def explicit_framework(
    arguments: Iterable[Argument],
    attacks: Iterable[tuple[Argument, Argument]] = (),
    triples: Iterable[Triple] = (),
    initial: Iterable[Argument] = (),
) -> Framework:
    """Build a finite framework from explicit sets, validating membership."""
    args = frozenset(arguments)
    atts = frozenset((a, b) for a, b in attacks)
    trs = frozenset(Triple(*t) for t in triples)
    init = frozenset(initial)
    for a, b in atts:
        if a not in args or b not in args:
            raise ValueError(f"attack ({a}, {b}) mentions an unknown argument")
    for t in trs:
        parts = [t.source, t.result] + ([t.target] if t.is_conversion else [])
        for p in parts:
            if p not in args:
                raise ValueError(f"persuasion {t} mentions unknown argument {p}")
    if not init <= args:
        raise ValueError(f"initial state has unknown arguments: {sorted(init - args)}")

    def provider(state: frozenset) -> frozenset:
        return frozenset(
            t for t in trs
            if t.source in state and (t.target is EPSILON or t.target in state)
        )

    return Framework(
        universe=args.__contains__,
        attacks=atts,
        provider=provider,
        initial=init,
        finite_universe=args,
        triples=trs,
    )


def attacks_in(fw: Framework, s: frozenset, a1: Argument, a2: Argument) -> bool:
    return a1 in s and a2 in s and (a1, a2) in fw.attacks


def enabled_persuasions(fw: Framework, state: frozenset, reference_set: Iterable[Argument] = ()) -> frozenset:
    """The persuasions that may fire in ``state`` with respect to ``reference_set``.

    A triple is enabled when its source is visible, its conversion target
    (if any) is visible, and no reference-set member attacks the source in
    ``state``.  Reference-set members that are not visible attack nothing.
    """
    ref = frozenset(reference_set)
    blocked = {b for (a, b) in fw.attacks if a in ref and a in state and b in state}
    return frozenset(
        t for t in fw.provider(state)
        if t.source in state
        and (t.target is EPSILON or t.target in state)
        and t.source not in blocked
    )


def neg_set(s: frozenset, gamma: Iterable[Triple]) -> frozenset:
    return frozenset(
        t.target for t in gamma
        if t.target is not EPSILON and t.target in s and t.source in s
    )


def pos_set(s: frozenset, gamma: Iterable[Triple]) -> frozenset:
    return frozenset(
        t.result for t in gamma
        if t.source in s and (t.target is EPSILON or t.target in s)
    )


def apply(s: frozenset, gamma: Iterable[Triple]) -> frozenset:
    """Fire ``gamma`` simultaneously; produced arguments win over removed ones."""
    gamma = tuple(gamma)
    if not gamma:
        raise ValueError("a transition needs a nonempty set of persuasions")
    return (s - neg_set(s, gamma)) | pos_set(s, gamma)


def _nonempty_subsets(items: list) -> Iterator[tuple]:
    for k in range(1, len(items) + 1):
        yield from itertools.combinations(items, k)


@dataclass
class Successors:
    """Distinct successor states, each labelled by the first subset producing it."""

    labels: dict  # successor state -> Gamma
    truncated: bool = False

    @property
    def states(self) -> frozenset:
        return frozenset(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


def successors(
    fw: Framework,
    state: frozenset,
    reference_set: Iterable[Argument] = (),
    cap: int | None = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> Successors:
    """All states reachable from ``state`` by firing one nonempty enabled subset.

    Raises :class:`EnumerationOverflow` before enumerating anything if there
    are more than ``budget`` subsets.  If ``cap`` distinct successors have
    been found and more subsets remain, the result is marked truncated.
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    enabled = sorted_triples(enabled_persuasions(fw, state, reference_set))
    if 2 ** len(enabled) - 1 > budget:
        raise EnumerationOverflow(len(enabled), budget)
    out = Successors(labels={})
    for gamma in _nonempty_subsets(enabled):
        nxt = apply(state, gamma)
        if nxt in out.labels:
            continue
        if cap is not None and len(out.labels) >= cap:
            out.truncated = True
            break
        out.labels[nxt] = frozenset(gamma)
    return out


@dataclass
class StateGraph:
    """Breadth-first exploration result.

    ``depth`` maps each visited state to its BFS depth; ``edges`` holds
    ``(source, gamma, target)`` triples; ``errors`` records states whose
    expansion overflowed.  ``complete`` is false when any bound was hit.
    """

    initial: frozenset
    depth: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)
    complete: bool = True

    @property
    def states(self) -> list:
        return list(self.depth)

    def out_degree(self, s: frozenset) -> int:
        return sum(1 for (a, _, _) in self.edges if a == s)


def reachable(
    fw: Framework,
    reference_set: Iterable[Argument] = (),
    max_states: int = 100_000,
    max_depth: int = 64,
    cap: int | None = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> StateGraph:
    if max_states < 1 or max_depth < 1:
        raise ValueError("max_states and max_depth must be >= 1")
    ref = frozenset(reference_set)
    g = StateGraph(initial=fw.initial)
    g.depth[fw.initial] = 0
    queue = deque([fw.initial])
    while queue:
        s = queue.popleft()
        d = g.depth[s]
        try:
            succ = successors(fw, s, ref, cap=cap, budget=budget)
        except EnumerationOverflow as exc:
            g.errors[s] = str(exc)
            g.complete = False
            continue
        if succ.truncated:
            g.complete = False
        for nxt, gamma in succ.labels.items():
            if nxt not in g.depth:
                if d >= max_depth or len(g.depth) >= max_states:
                    g.complete = False
                    continue
                g.depth[nxt] = d + 1
                queue.append(nxt)
            g.edges.append((s, gamma, nxt))
    return g


def state_label(s: Iterable[Argument]) -> str:
    return "{" + ", ".join(str(a) for a in sorted(s)) + "}"


def gamma_label(gamma: Iterable[Triple]) -> str:
    return "; ".join(str(t) for t in sorted_triples(gamma))


# -- text format ---------------------------------------------------------------


class FrameworkSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def parse_framework(text: str) -> Framework:
    """Parse the line format::

        arg a
        attack a b
        induce a -> c
        convert a : b -> c
        init a b

    Names mentioned in any line are added to the universe implicitly.
    """
    args: dict[str, Argument] = {}
    attacks = []
    triples = []
    initial = []

    def arg(name: str) -> Argument:
        return args.setdefault(name, Argument.opaque(name))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, rest = words[0], words[1:]
        if head == "arg":
            if not rest:
                raise FrameworkSyntaxError(lineno, "'arg' needs at least one name")
            for name in rest:
                arg(name)
        elif head == "attack":
            if len(rest) != 2:
                raise FrameworkSyntaxError(lineno, "expected 'attack <a> <b>'")
            attacks.append((arg(rest[0]), arg(rest[1])))
        elif head == "induce":
            if len(rest) != 3 or rest[1] != "->":
                raise FrameworkSyntaxError(lineno, "expected 'induce <a> -> <c>'")
            triples.append(Triple(arg(rest[0]), EPSILON, arg(rest[2])))
        elif head == "convert":
            if len(rest) != 5 or rest[1] != ":" or rest[3] != "->":
                raise FrameworkSyntaxError(lineno, "expected 'convert <a> : <b> -> <c>'")
            triples.append(Triple(arg(rest[0]), arg(rest[2]), arg(rest[4])))
        elif head == "init":
            initial.extend(arg(name) for name in rest)
        else:
            raise FrameworkSyntaxError(lineno, f"unknown directive {head!r}")
    return explicit_framework(args.values(), attacks, triples, initial)


def dump_framework(fw: Framework) -> str:
    if fw.finite_universe is None or fw.triples is None:
        raise ValueError("only finite explicit frameworks can be serialized")
    lines = [f"arg {a}" for a in sorted(fw.finite_universe)]
    lines += [f"attack {a} {b}" for a, b in sorted(fw.attacks)]
    for t in sorted_triples(fw.triples):
        lines.append(("induce " if t.target is EPSILON else "convert ") + str(t))
    lines.append(" ".join(["init"] + [str(a) for a in sorted(fw.initial)]))
    return "\n".join(lines) + "\n"
