"""Reachability search over the divorce graph, plus whole-graph analytics.

The divorce graph has one vertex per matching (including partial matchings)
and one arc per feasible b-interchange, labeled by its blocking pair.  Every
stable matching is a sink; under incomplete preferences a sink need not be
stable, because a blocked matching may admit only infeasible interchanges.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .model import (
    CanonicalKey,
    GuardExceeded,
    Instance,
    Matching,
    UNMATCHED,
    canonical_key,
    matching_from_key,
)
from .dynamics import (
    BlockingPair,
    _apply_key,
    _blocking_pairs_key,
    _right_partners,
)


class VerdictKind(enum.Enum):
    REACHABLE_STABLE = "REACHABLE_STABLE"
    NOT_REACHABLE = "NOT_REACHABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class SearchVerdict:
    kind: VerdictKind
    witness: list[BlockingPair] | None
    explored: int
    frontier_peak: int


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 1_000_000
    max_millis: float | None = None


def verdict_to_json(v: SearchVerdict) -> dict:
    return {
        "kind": v.kind.value,
        "witness": [list(p.names()) for p in v.witness] if v.witness is not None else None,
        "explored": v.explored,
        "frontier_peak": v.frontier_peak,
    }


def _pair_obj(instance: Instance, uw: tuple[int, int]) -> BlockingPair:
    return BlockingPair(instance.left[uw[0]], instance.right[uw[1]])


def _witness(
    instance: Instance,
    parents: dict[CanonicalKey, tuple[CanonicalKey, tuple[int, int]] | None],
    goal: CanonicalKey,
) -> list[BlockingPair]:
    path: list[BlockingPair] = []
    node = goal
    while parents[node] is not None:
        prev, uw = parents[node]  # type: ignore[misc]
        path.append(_pair_obj(instance, uw))
        node = prev
    path.reverse()
    return path


def reachable_search(
    instance: Instance,
    m0: Matching,
    budget: Budget | None = None,
    *,
    workers: int = 1,
    require_both_matched: bool = False,
) -> SearchVerdict:
    """Breadth-first search from m0 over feasible b-interchanges.

    Stops at the first stable node (the witness is shortest in arc count), on
    exhaustion of the reachable set, or on budget (INCONCLUSIVE).  Neighbors
    expand in blocking-pair order, so single-threaded runs are deterministic.
    """
    if budget is None:
        budget = Budget()
    if workers > 1:
        return _reachable_search_layered(
            instance, m0, budget, workers, require_both_matched
        )
    deadline = (
        time.monotonic() + budget.max_millis / 1000.0
        if budget.max_millis is not None
        else None
    )
    start = canonical_key(instance, m0)
    parents: dict[CanonicalKey, tuple[CanonicalKey, tuple[int, int]] | None] = {
        start: None
    }
    queue: deque[CanonicalKey] = deque([start])
    explored = 0
    peak = 1
    while queue:
        if explored >= budget.max_nodes or (
            deadline is not None and time.monotonic() > deadline
        ):
            return SearchVerdict(VerdictKind.INCONCLUSIVE, None, explored, peak)
        key = queue.popleft()
        explored += 1
        rpart = _right_partners(instance, key)
        bps = _blocking_pairs_key(instance, key, rpart)
        if require_both_matched:
            bps = [(u, w) for u, w in bps if key[u] != UNMATCHED and rpart[w] != UNMATCHED]
        if not bps:
            return SearchVerdict(
                VerdictKind.REACHABLE_STABLE,
                _witness(instance, parents, key),
                explored,
                peak,
            )
        for uw in bps:
            nk = _apply_key(instance, key, rpart, *uw)
            if nk is None or nk in parents:
                continue
            parents[nk] = (key, uw)
            queue.append(nk)
        if len(queue) > peak:
            peak = len(queue)
    return SearchVerdict(VerdictKind.NOT_REACHABLE, None, explored, peak)


def _reachable_search_layered(
    instance: Instance,
    m0: Matching,
    budget: Budget,
    workers: int,
    require_both_matched: bool,
) -> SearchVerdict:
    """Layer-synchronous variant: each BFS layer expands on a thread pool,
    results merge in deterministic node order.  Returns the same verdict kind
    (and witness length) as the single-threaded search."""
    deadline = (
        time.monotonic() + budget.max_millis / 1000.0
        if budget.max_millis is not None
        else None
    )

    def expand(key: CanonicalKey):
        rpart = _right_partners(instance, key)
        bps = _blocking_pairs_key(instance, key, rpart)
        if require_both_matched:
            bps = [(u, w) for u, w in bps if key[u] != UNMATCHED and rpart[w] != UNMATCHED]
        succ = []
        for uw in bps:
            nk = _apply_key(instance, key, rpart, *uw)
            if nk is not None:
                succ.append((uw, nk))
        return bool(bps), succ

    start = canonical_key(instance, m0)
    parents: dict[CanonicalKey, tuple[CanonicalKey, tuple[int, int]] | None] = {
        start: None
    }
    layer = [start]
    explored = 0
    peak = 1
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while layer:
            if explored + len(layer) > budget.max_nodes or (
                deadline is not None and time.monotonic() > deadline
            ):
                return SearchVerdict(VerdictKind.INCONCLUSIVE, None, explored, peak)
            results = list(pool.map(expand, layer))
            nxt: list[CanonicalKey] = []
            for key, (blocked, succ) in zip(layer, results):
                explored += 1
                if not blocked:
                    return SearchVerdict(
                        VerdictKind.REACHABLE_STABLE,
                        _witness(instance, parents, key),
                        explored,
                        peak,
                    )
                for uw, nk in succ:
                    if nk in parents:
                        continue
                    parents[nk] = (key, uw)
                    nxt.append(nk)
            layer = nxt
            if len(layer) > peak:
                peak = len(layer)
    return SearchVerdict(VerdictKind.NOT_REACHABLE, None, explored, peak)


# ---------------------------------------------------------------------------
# Divorce-graph construction and analytics
# ---------------------------------------------------------------------------

@dataclass
class DivorceGraph:
    instance: Instance
    nodes: dict[CanonicalKey, Matching]
    arcs: dict[CanonicalKey, list[tuple[BlockingPair, CanonicalKey]]]
    stable: frozenset[CanonicalKey]

    def node_count(self) -> int:
        return len(self.nodes)

    def arc_count(self) -> int:
        return sum(len(v) for v in self.arcs.values())


def _all_matching_keys(instance: Instance, guard: int) -> Iterator[CanonicalKey]:
    """Every matching of the instance (including partial ones), each once."""
    lacc = instance._lacc
    n = instance.n_left
    count = 0
    key = [UNMATCHED] * n
    used: set[int] = set()

    def rec(i: int) -> Iterator[CanonicalKey]:
        nonlocal count
        if i == n:
            count += 1
            if count > guard:
                raise GuardExceeded(
                    f"matching enumeration exceeded guard of {guard} matchings"
                )
            yield tuple(key)
            return
        yield from rec(i + 1)
        for w in lacc[i]:
            if w in used:
                continue
            key[i] = w
            used.add(w)
            yield from rec(i + 1)
            used.discard(w)
            key[i] = UNMATCHED

    yield from rec(0)


def build_divorce_graph(
    instance: Instance,
    roots: Iterable[Matching] | None = None,
    *,
    max_matchings: int = 1_000_000,
) -> DivorceGraph:
    """With roots: the sub-graph reachable from them.  Without: the full
    graph over all matchings, guarded by `max_matchings`."""
    if roots is None:
        keys = list(_all_matching_keys(instance, max_matchings))
    else:
        seed = [canonical_key(instance, m) for m in roots]
        seen = set(seed)
        queue = deque(seed)
        keys = []
        while queue:
            key = queue.popleft()
            keys.append(key)
            if len(keys) > max_matchings:
                raise GuardExceeded(
                    f"reachable closure exceeded guard of {max_matchings} matchings"
                )
            rpart = _right_partners(instance, key)
            for uw in _blocking_pairs_key(instance, key, rpart):
                nk = _apply_key(instance, key, rpart, *uw)
                if nk is not None and nk not in seen:
                    seen.add(nk)
                    queue.append(nk)

    nodes: dict[CanonicalKey, Matching] = {}
    arcs: dict[CanonicalKey, list[tuple[BlockingPair, CanonicalKey]]] = {}
    stable: set[CanonicalKey] = set()
    for key in keys:
        nodes[key] = matching_from_key(instance, key)
    for key in nodes:
        rpart = _right_partners(instance, key)
        bps = _blocking_pairs_key(instance, key, rpart)
        if not bps:
            stable.add(key)
        out = []
        for uw in bps:
            nk = _apply_key(instance, key, rpart, *uw)
            if nk is None:
                continue
            if nk not in nodes:
                # Can only happen for a rooted build whose closure is already
                # complete; full builds contain every matching.
                nodes[nk] = matching_from_key(instance, nk)
            out.append((_pair_obj(instance, uw), nk))
        arcs[key] = out
    # Targets added late still need their own arc lists.
    for key in list(nodes):
        if key not in arcs:
            rpart = _right_partners(instance, key)
            bps = _blocking_pairs_key(instance, key, rpart)
            if not bps:
                stable.add(key)
            arcs[key] = [
                (_pair_obj(instance, uw), nk)
                for uw in bps
                if (nk := _apply_key(instance, key, rpart, *uw)) is not None
            ]
    return DivorceGraph(instance, nodes, arcs, frozenset(stable))


def sinks(g: DivorceGraph) -> frozenset[CanonicalKey]:
    """Nodes with zero outgoing arcs (infeasible interchanges produce none)."""
    return frozenset(k for k, out in g.arcs.items() if not out)


@dataclass
class Condensation:
    components: list[tuple[CanonicalKey, ...]]
    dag_arcs: frozenset[tuple[int, int]]
    component_of: dict[CanonicalKey, int]
    no_stable_path: frozenset[int]


def condensation(g: DivorceGraph) -> Condensation:
    """Tarjan SCCs plus the condensation DAG; flags components from which no
    stable node is reachable."""
    order = sorted(g.nodes)
    succ = {k: [t for _, t in g.arcs[k]] for k in order}

    index: dict[CanonicalKey, int] = {}
    low: dict[CanonicalKey, int] = {}
    onstack: set[CanonicalKey] = set()
    stack: list[CanonicalKey] = []
    comps: list[tuple[CanonicalKey, ...]] = []
    counter = 0

    for root in order:
        if root in index:
            continue
        work: list[tuple[CanonicalKey, int]] = [(root, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                onstack.add(node)
            advanced = False
            targets = succ[node]
            for i in range(pi, len(targets)):
                s = targets[i]
                if s not in index:
                    work[-1] = (node, i + 1)
                    work.append((s, 0))
                    advanced = True
                    break
                if s in onstack:
                    low[node] = min(low[node], index[s])
            if advanced:
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    onstack.discard(x)
                    comp.append(x)
                    if x == node:
                        break
                comps.append(tuple(sorted(comp)))
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    component_of = {k: ci for ci, comp in enumerate(comps) for k in comp}
    dag_arcs = set()
    for k in order:
        for t in succ[k]:
            a, b = component_of[k], component_of[t]
            if a != b:
                dag_arcs.add((a, b))
    # Tarjan emits components in reverse topological order: successors of a
    # component always carry a smaller index, so one ascending pass suffices.
    reaches = [False] * len(comps)
    out_by_comp: dict[int, set[int]] = {}
    for a, b in dag_arcs:
        out_by_comp.setdefault(a, set()).add(b)
    for ci, comp in enumerate(comps):
        reaches[ci] = any(k in g.stable for k in comp) or any(
            reaches[cj] for cj in out_by_comp.get(ci, ())
        )
    no_stable_path = frozenset(ci for ci, r in enumerate(reaches) if not r)
    return Condensation(comps, frozenset(dag_arcs), component_of, no_stable_path)


def _label(m: Matching) -> str:
    body = "\\n".join(f"{l.name}-{r.name}" for l, r in m.sorted_pairs())
    return body or "(empty)"


def export_dot(
    g: DivorceGraph,
    *,
    root: Matching | None = None,
    witness: Iterable[BlockingPair] | None = None,
) -> str:
    """Deterministic DOT rendering; stable nodes are double-bordered, the
    root is bold, and the witness path (replayed from the root) is red."""
    ids = {key: f"n{i}" for i, key in enumerate(sorted(g.nodes))}
    root_key = canonical_key(g.instance, root) if root is not None else None
    path_edges: set[tuple[CanonicalKey, CanonicalKey]] = set()
    if root is not None and witness is not None:
        cur = root_key
        for p in witness:
            rpart = _right_partners(g.instance, cur)
            nk = _apply_key(g.instance, cur, rpart, p.left.index, p.right.index)
            if nk is None:
                break
            path_edges.add((cur, nk))
            cur = nk

    lines = ["digraph divorce {", "  rankdir=LR;", '  node [shape=box, fontsize=10];']
    for key in sorted(g.nodes):
        attrs = [f'label="{_label(g.nodes[key])}"']
        if key in g.stable:
            attrs.append("peripheries=2")
            attrs.append("style=filled")
            attrs.append('fillcolor="palegreen"')
        if root_key is not None and key == root_key:
            attrs.append("penwidth=2")
        lines.append(f"  {ids[key]} [{', '.join(attrs)}];")
    for key in sorted(g.nodes):
        for pair, target in g.arcs[key]:
            attrs = [f'label="{pair.left.name},{pair.right.name}"']
            if (key, target) in path_edges:
                attrs.append('color="red"')
                attrs.append("penwidth=2")
            lines.append(f"  {ids[key]} -> {ids[target]} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
