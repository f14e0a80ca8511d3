"""Blocking pairs, b-interchanges, and certificate-sequence verification.

A pair blocks a matching when it is absent from it, mutually acceptable, and
each member is unmatched or strictly prefers the other to its current partner
(ties never block: weak stability).  A b-interchange marries a blocking pair
and remarries the two ex-partners to each other; it is feasible only when the
resulting pair set is again a matching.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import (
    AgentId,
    CanonicalKey,
    Instance,
    Matching,
    ParseError,
    Side,
    UNMATCHED,
    canonical_key,
    is_matching,
    normalize_pair,
    _content_lines,
)

_INF = float("inf")


@dataclass(frozen=True)
class BlockingPair:
    left: AgentId
    right: AgentId

    def names(self) -> tuple[str, str]:
        return (self.left.name, self.right.name)

    def __iter__(self):
        return iter((self.left, self.right))

    def __repr__(self):
        return f"{{{self.left.name},{self.right.name}}}"


class Reason(enum.Enum):
    NOT_BLOCKING = "NOT_BLOCKING"
    REMARRIAGE_UNACCEPTABLE = "REMARRIAGE_UNACCEPTABLE"
    # Only under the strict reading where both pair members must be matched.
    NOT_BOTH_MATCHED = "NOT_BOTH_MATCHED"


@dataclass(frozen=True)
class Infeasible:
    reason: Reason


@dataclass(frozen=True)
class StepRecord:
    pair: BlockingPair
    before: CanonicalKey
    after: CanonicalKey


@dataclass
class SequenceResult:
    final: Matching
    steps: list[StepRecord]
    final_stable: bool


@dataclass(frozen=True)
class Rejected:
    index: int
    reason: Reason


# ---------------------------------------------------------------------------
# Key-level fast path shared with the explorer.  A key is the canonical
# partner tuple (right index per left agent, UNMATCHED for single).
# ---------------------------------------------------------------------------

def _right_partners(instance: Instance, key: CanonicalKey) -> list[int]:
    rp = [UNMATCHED] * instance.n_right
    for i, j in enumerate(key):
        if j != UNMATCHED:
            rp[j] = i
    return rp


def _blocking_pairs_key(
    instance: Instance, key: CanonicalKey, rpart: list[int] | None = None
) -> list[tuple[int, int]]:
    """Blocking pairs as (left index, right index), in lexicographic order."""
    if rpart is None:
        rpart = _right_partners(instance, key)
    lrank, rrank, lacc = instance._lrank, instance._rrank, instance._lacc
    cur_right = [
        rrank[j][rpart[j]] if rpart[j] != UNMATCHED else _INF
        for j in range(instance.n_right)
    ]
    out = []
    for u in range(instance.n_left):
        row = lrank[u]
        pu = key[u]
        ru = row[pu] if pu != UNMATCHED else _INF
        for w in lacc[u]:
            if row[w] < ru and rrank[w][u] < cur_right[w]:
                out.append((u, w))
    return out


def _apply_key(
    instance: Instance, key: CanonicalKey, rpart: list[int], u: int, w: int
) -> CanonicalKey | None:
    """Apply a b-interchange by the blocking pair (u, w) to `key`.

    Assumes (u, w) blocks.  Returns None when the remarried ex-partners are
    not mutually acceptable (the interchange is infeasible).
    """
    pu = key[u]
    pw = rpart[w]
    new = list(key)
    new[u] = w
    if pw != UNMATCHED:
        if pu != UNMATCHED:
            if pu not in instance._lrank[pw]:
                return None
            new[pw] = pu
        else:
            new[pw] = UNMATCHED
    return tuple(new)


# ---------------------------------------------------------------------------
# Public object-level operations
# ---------------------------------------------------------------------------

def is_blocking(instance: Instance, m: Matching, pair) -> bool:
    l, r = normalize_pair(instance, pair)
    if m.partner(l) is r:
        return False
    rank_lr = instance.rank(l, r)
    rank_rl = instance.rank(r, l)
    if rank_lr is None or rank_rl is None:
        return False
    pl = m.partner(l)
    if pl is not None and rank_lr >= instance.rank(l, pl):
        return False
    pr = m.partner(r)
    if pr is not None and rank_rl >= instance.rank(r, pr):
        return False
    return True


def blocking_pairs(instance: Instance, m: Matching) -> list[BlockingPair]:
    """All blocking pairs, ordered by (left index, right index)."""
    key = canonical_key(instance, m)
    return [
        BlockingPair(instance.left[u], instance.right[w])
        for u, w in _blocking_pairs_key(instance, key)
    ]


def is_stable(instance: Instance, m: Matching) -> bool:
    return not _blocking_pairs_key(instance, canonical_key(instance, m))


def b_inter_raw(m: Matching, pair) -> frozenset[tuple[AgentId, AgentId]]:
    """Set semantics of the b-interchange formula, covering every matchedness
    case; the result need not be a matching."""
    if isinstance(pair, BlockingPair):
        u, w = pair.left, pair.right
    else:
        u, w = pair
    if u.side is Side.RIGHT:
        u, w = w, u
    pairs = set(m.pairs)
    pu = m.partner(u)
    pw = m.partner(w)
    if pu is not None:
        pairs.discard((u, pu))
    if pw is not None:
        pairs.discard((pw, w))
    pairs.add((u, w))
    if pu is not None and pw is not None:
        pairs.add((pw, pu))
    return frozenset(pairs)


def apply_b_interchange(
    instance: Instance,
    m: Matching,
    pair,
    *,
    require_both_matched: bool = False,
) -> Matching | Infeasible:
    """Apply the b-interchange by `pair` if it blocks and stays a matching.

    Infeasibility is a typed return, not an error: the divorce-graph search
    treats infeasible interchanges as absent arcs.
    """
    l, r = normalize_pair(instance, pair)
    if not is_blocking(instance, m, (l, r)):
        return Infeasible(Reason.NOT_BLOCKING)
    if require_both_matched and (m.partner(l) is None or m.partner(r) is None):
        return Infeasible(Reason.NOT_BOTH_MATCHED)
    raw = b_inter_raw(m, (l, r))
    if not is_matching(instance, raw):
        return Infeasible(Reason.REMARRIAGE_UNACCEPTABLE)
    return Matching(instance, raw)


def verify_sequence(
    instance: Instance,
    m0: Matching,
    seq: Iterable,
    *,
    require_both_matched: bool = False,
) -> SequenceResult | Rejected:
    """Replay a b-interchange sequence from m0; reject at the first
    infeasible step, otherwise report the final matching and its stability."""
    steps: list[StepRecord] = []
    cur = m0
    for i, pair in enumerate(seq):
        l, r = normalize_pair(instance, pair)
        res = apply_b_interchange(
            instance, cur, (l, r), require_both_matched=require_both_matched
        )
        if isinstance(res, Infeasible):
            return Rejected(i, res.reason)
        steps.append(
            StepRecord(
                BlockingPair(l, r),
                canonical_key(instance, cur),
                canonical_key(instance, res),
            )
        )
        cur = res
    return SequenceResult(final=cur, steps=steps, final_stable=is_stable(instance, cur))


# Certificate files: one `step <leftName> <rightName>` line per b-interchange.

def parse_certificate(text: str, instance: Instance) -> list[BlockingPair]:
    out = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 3 or parts[0] != "step":
            raise ParseError("expected `step <leftName> <rightName>`", lineno)
        try:
            l, r = normalize_pair(instance, (parts[1], parts[2]))
        except Exception as exc:
            raise ParseError(str(exc), lineno) from exc
        out.append(BlockingPair(l, r))
    return out


def serialize_certificate(seq: Sequence[BlockingPair]) -> str:
    return "".join(f"step {p.left.name} {p.right.name}\n" for p in seq)
