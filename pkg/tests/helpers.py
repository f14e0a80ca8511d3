"""Shared generators and independent checkers for the test suite."""

from __future__ import annotations

import random
from collections import deque

from divorcedyn import Instance, Matching
from divorcedyn.oracles import _all_blocking, _naive_binter


def random_instance(rng: random.Random, max_side: int = 4, p_accept: float = 0.6) -> Instance:
    """Random SMTI instance with mutual acceptability and random tie tiers."""
    nl = rng.randint(0, max_side)
    nr = rng.randint(0, max_side)
    left = [f"u{i + 1}" for i in range(nl)]
    right = [f"w{i + 1}" for i in range(nr)]
    acc = {(u, w) for u in left for w in right if rng.random() < p_accept}

    def tiers_for(me, others, key):
        mine = [o for o in others if key(me, o) in acc]
        rng.shuffle(mine)
        tiers = []
        i = 0
        while i < len(mine):
            size = rng.randint(1, len(mine) - i)
            tiers.append(mine[i : i + size])
            i += size
        return tiers

    prefs = {}
    for u in left:
        prefs[u] = tiers_for(u, right, lambda a, b: (a, b))
    for w in right:
        prefs[w] = tiers_for(w, left, lambda a, b: (b, a))
    return Instance.from_names(left, right, prefs)


def random_matching(rng: random.Random, instance: Instance) -> Matching:
    pairs = []
    used = set()
    lefts = list(instance.left)
    rng.shuffle(lefts)
    for u in lefts:
        options = [w for w in instance.acceptable(u) if w not in used]
        if options and rng.random() < 0.7:
            w = rng.choice(options)
            used.add(w)
            pairs.append((u, w))
    return Matching(instance, pairs)


def is_complete(instance: Instance) -> bool:
    return all(
        len(instance.acceptable(u)) == instance.n_right for u in instance.left
    ) and all(len(instance.acceptable(w)) == instance.n_left for w in instance.right)


def check_transition_laws(instance: Instance, m: Matching, pair, out: Matching) -> None:
    """Matched-set, perfectness-preservation, and progress laws for a single
    applied b-interchange m --{u,w}--> out; raises AssertionError on violation."""
    u, w = pair
    before = m.matched_agents()
    after = out.matched_agents()
    pu, pw = m.partner(u), m.partner(w)
    if pu is not None and pw is not None:
        assert after == before
    elif pu is None and pw is None:
        assert after == before | {u, w}
    else:
        gained = {u} if pu is None else {w}
        lost = {pw} if pu is None else {pu}
        assert after == (before | gained) - lost
    if len(before) == instance.n_left + instance.n_right:
        assert len(after) == instance.n_left + instance.n_right
    assert out.partner(u) == w
    old_u = instance.rank(u, pu) if pu is not None else None
    old_w = instance.rank(w, pw) if pw is not None else None
    assert old_u is None or instance.rank(u, w) < old_u
    assert old_w is None or instance.rank(w, u) < old_w


def naive_shortest_stable_distance(instance: Instance, m0: Matching) -> int | None:
    """BFS arc distance from m0 to the nearest stable matching, computed with
    the oracles' naive primitives only; None when unreachable."""
    seen = {m0}
    queue = deque([(m0, 0)])
    while queue:
        m, d = queue.popleft()
        blocking = _all_blocking(instance, m)
        if not blocking:
            return d
        for u, w in blocking:
            child = _naive_binter(instance, m, u, w)
            if child is not None and child not in seen:
                seen.add(child)
                queue.append((child, d + 1))
    return None
