"""Deliberately simple reference implementations used to cross-check the
main modules.  Nothing here shares logic with `dynamics` or `explorer`
beyond the instance/matching data types, so agreement is meaningful."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator

from .model import (
    AgentId,
    GuardExceeded,
    Instance,
    Matching,
    is_matching,
)
from .explorer import SearchVerdict, VerdictKind
from .dynamics import BlockingPair
from .reduction import SourceGraph


def brute_force_independent_set(g: SourceGraph) -> tuple[str, ...] | None:
    """Lexicographically least independent set of size k, or None."""
    if g.n > 25:
        raise GuardExceeded(f"brute force limited to 25 vertices, got {g.n}")
    adjacent = set(g.edges)
    for combo in combinations(range(1, g.n + 1), g.k):
        if not any((u, v) in adjacent for u, v in combinations(combo, 2)):
            return tuple(f"v_{i}" for i in combo)
    return None


def enumerate_matchings(instance: Instance, max_count: int = 1_000_000) -> Iterator[Matching]:
    """Every set of disjoint mutually acceptable pairs, the empty matching
    included, each exactly once, in a deterministic order."""
    count = 0

    def rec(i: int, taken: list[tuple[AgentId, AgentId]], used: set[AgentId]):
        nonlocal count
        if i == len(instance.left):
            count += 1
            if count > max_count:
                raise GuardExceeded(
                    f"matching enumeration exceeded guard of {max_count}"
                )
            yield Matching(instance, taken)
            return
        u = instance.left[i]
        yield from rec(i + 1, taken, used)
        for w in instance.acceptable(u):
            if w in used:
                continue
            taken.append((u, w))
            used.add(w)
            yield from rec(i + 1, taken, used)
            used.discard(w)
            taken.pop()

    yield from rec(0, [], set())


def _blocks(instance: Instance, m: Matching, u: AgentId, w: AgentId) -> bool:
    if m.partner(u) is w:
        return False
    ruw = instance.rank(u, w)
    rwu = instance.rank(w, u)
    if ruw is None or rwu is None:
        return False
    pu = m.partner(u)
    if pu is not None and instance.rank(u, pu) <= ruw:
        return False
    pw = m.partner(w)
    if pw is not None and instance.rank(w, pw) <= rwu:
        return False
    return True


def _all_blocking(instance: Instance, m: Matching) -> list[tuple[AgentId, AgentId]]:
    return [
        (u, w)
        for u in instance.left
        for w in instance.right
        if _blocks(instance, m, u, w)
    ]


def all_stable_matchings(
    instance: Instance, max_count: int = 1_000_000
) -> list[Matching]:
    return [
        m
        for m in enumerate_matchings(instance, max_count)
        if not _all_blocking(instance, m)
    ]


def gale_shapley_tiebreak(instance: Instance, tiebreak_seed: int = 0) -> Matching:
    """Break every tie with a seeded shuffle and run left-proposing deferred
    acceptance on the strict lists; the result is weakly stable for the
    original tied instance."""
    rng = random.Random(tiebreak_seed)
    strict: dict[AgentId, list[AgentId]] = {}
    for agent in instance.agents():
        order: list[AgentId] = []
        for tier in instance.prefs[agent].tiers:
            members = sorted(tier, key=lambda a: a.index)
            rng.shuffle(members)
            order.extend(members)
        strict[agent] = order
    srank = {a: {o: i for i, o in enumerate(lst)} for a, lst in strict.items()}

    next_choice = {u: 0 for u in instance.left}
    engaged: dict[AgentId, AgentId] = {}  # right -> left
    free = list(instance.left)
    while free:
        u = free.pop(0)
        lst = strict[u]
        while next_choice[u] < len(lst):
            w = lst[next_choice[u]]
            next_choice[u] += 1
            cur = engaged.get(w)
            if cur is None:
                engaged[w] = u
                break
            if srank[w][u] < srank[w][cur]:
                engaged[w] = u
                free.append(cur)
                break
    return Matching(instance, [(u, w) for w, u in engaged.items()])


def _naive_binter(
    instance: Instance, m: Matching, u: AgentId, w: AgentId
) -> Matching | None:
    """Marry the blocking pair, remarry the ex-partners; None if the result
    is not a matching."""
    pairs = {tuple(p) for p in m.pairs}
    pu = m.partner(u)
    pw = m.partner(w)
    pairs.discard((u, pu))
    pairs.discard((pw, w))
    pairs.add((u, w))
    if pu is not None and pw is not None:
        pairs.add((pw, pu))
    if not is_matching(instance, pairs):
        return None
    return Matching(instance, pairs)


def exhaustive_reachability(
    instance: Instance, m0: Matching, max_nodes: int = 1_000_000
) -> SearchVerdict:
    """Plain depth-first exploration of everything reachable from m0.

    Agrees with `explorer.reachable_search` on the verdict kind; the witness,
    when any, verifies but is not necessarily shortest."""
    parents: dict[Matching, tuple[Matching, tuple[AgentId, AgentId]] | None] = {
        m0: None
    }
    stack = [m0]
    explored = 0
    peak = 1
    while stack:
        peak = max(peak, len(stack))
        if explored >= max_nodes:
            return SearchVerdict(VerdictKind.INCONCLUSIVE, None, explored, peak)
        m = stack.pop()
        explored += 1
        blocking = _all_blocking(instance, m)
        if not blocking:
            path = []
            node = m
            while parents[node] is not None:
                prev, (u, w) = parents[node]  # type: ignore[misc]
                path.append(BlockingPair(u, w))
                node = prev
            path.reverse()
            return SearchVerdict(VerdictKind.REACHABLE_STABLE, path, explored, peak)
        for u, w in blocking:
            child = _naive_binter(instance, m, u, w)
            if child is None or child in parents:
                continue
            parents[child] = (m, (u, w))
            stack.append(child)
    return SearchVerdict(VerdictKind.NOT_REACHABLE, None, explored, peak)
