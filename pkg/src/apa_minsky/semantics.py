"""State-wise acceptability: conflict-freeness, defence, admissible and complete sets."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .core import DEFAULT_SUBSET_BUDGET, Argument, Framework, attacks_in, enabled_persuasions, successors

__all__ = [
    "SizeExceeded",
    "DEFAULT_SIZE_BOUND",
    "conflict_free",
    "proper",
    "eliminable",
    "eliminable_brute_force",
    "defends",
    "admissible",
    "complete",
    "enumerate_admissible",
    "enumerate_complete",
]

DEFAULT_SIZE_BOUND = 16


class SizeExceeded(ValueError):
    pass


def conflict_free(fw: Framework, s: frozenset, S: Iterable[Argument]) -> bool:
    S = frozenset(S)
    return not any(attacks_in(fw, s, a, b) for a in S for b in S)


def proper(s: frozenset, S: Iterable[Argument]) -> bool:
    return frozenset(S) <= s


def eliminable(fw: Framework, s: frozenset, S: Iterable[Argument], a: Argument) -> bool:
    """True iff one transition with reference set ``S`` can remove visible ``a``.

    Some subset removes ``a`` exactly when it contains a conversion of ``a``
    and nothing in it produces ``a``; the singleton of that conversion is
    then a witness, so it suffices to look for an enabled conversion of
    ``a`` into something else.
    """
    if a not in s:
        return False
    return any(
        t.target == a and t.result != a
        for t in enabled_persuasions(fw, s, S)
    )


def eliminable_brute_force(
    fw: Framework, s: frozenset, S: Iterable[Argument], a: Argument, budget: int = DEFAULT_SUBSET_BUDGET
) -> bool:
    if a not in s:
        return False
    return any(a not in nxt for nxt in successors(fw, s, S, budget=budget).states)


def defends(fw: Framework, s: frozenset, S: Iterable[Argument], a: Argument, brute_force: bool = False) -> bool:
    S = frozenset(S)
    if a not in s:
        return True
    for b in fw.attackers_of(a):
        if b in s and not any(attacks_in(fw, s, c, b) for c in S):
            return False
    check = eliminable_brute_force if brute_force else eliminable
    return not check(fw, s, S, a)


def admissible(fw: Framework, s: frozenset, S: Iterable[Argument]) -> bool:
    S = frozenset(S)
    return (
        proper(s, S)
        and conflict_free(fw, s, S)
        and all(defends(fw, s, S, a) for a in S)
    )


def complete(fw: Framework, s: frozenset, S: Iterable[Argument]) -> bool:
    """Admissible and containing every visible argument it defends.

    Invisible arguments are vacuously defended by every set, so they are
    left out here; otherwise no proper set could ever be complete.
    """
    S = frozenset(S)
    if not admissible(fw, s, S):
        return False
    return all(a in S for a in s if defends(fw, s, S, a))


def _subsets(s: frozenset, bound: int):
    if len(s) > bound:
        raise SizeExceeded(f"state has {len(s)} visible arguments, bound is {bound}")
    items = sorted(s)
    for k in range(len(items) + 1):
        for combo in combinations(items, k):
            yield frozenset(combo)


def _canonical(sets: list) -> list:
    return sorted(sets, key=lambda S: (len(S), sorted(S)))


def enumerate_admissible(fw: Framework, s: frozenset, bound: int = DEFAULT_SIZE_BOUND) -> list:
    return _canonical([S for S in _subsets(s, bound) if admissible(fw, s, S)])


def enumerate_complete(fw: Framework, s: frozenset, bound: int = DEFAULT_SIZE_BOUND) -> list:
    return _canonical([S for S in _subsets(s, bound) if complete(fw, s, S)])
