"""Instances, preference lists, and matchings for two-sided markets with
weak-order (tied) and possibly incomplete preferences.

Agents live on two disjoint sides.  Preferences are ordered tiers: agents in
an earlier tier are strictly preferred to agents in a later tier, agents
within one tier are tied, and agents absent from every tier are unacceptable.
Acceptability must be mutual; the validator rejects instances where it is not.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

NAME_RE = re.compile(r"[A-Za-z0-9_^{}]+\Z")

#: Partner slot value in a canonical key for an unmatched agent.
UNMATCHED = -1


class Side(enum.Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


class Comparison(enum.Enum):
    PREFERS_A = "PREFERS_A"
    TIED = "TIED"
    PREFERS_B = "PREFERS_B"
    INCOMPARABLE = "INCOMPARABLE"


class ValidationError(ValueError):
    """A structural invariant of an instance or matching is violated."""


class GuardExceeded(RuntimeError):
    """An explicit input-size guard was exceeded."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class AgentId:
    side: Side
    index: int
    name: str


@dataclass(frozen=True)
class PreferenceList:
    """Ordered tiers of opposite-side agents; earlier tiers strictly preferred."""

    tiers: tuple[frozenset[AgentId], ...] = ()

    def __post_init__(self):
        seen: set[AgentId] = set()
        for tier in self.tiers:
            if not tier:
                raise ValidationError("empty preference tier")
            for agent in tier:
                if agent in seen:
                    raise ValidationError(f"{agent.name} appears in more than one tier")
                seen.add(agent)

    def tier_of(self, agent: AgentId) -> int | None:
        for t, tier in enumerate(self.tiers):
            if agent in tier:
                return t
        return None

    def listed(self) -> frozenset[AgentId]:
        out: set[AgentId] = set()
        for tier in self.tiers:
            out |= tier
        return frozenset(out)


class Instance:
    """An immutable two-sided instance with validated preference lists."""

    def __init__(
        self,
        left: Sequence[AgentId],
        right: Sequence[AgentId],
        prefs: dict[AgentId, PreferenceList] | None = None,
    ):
        self.left = tuple(left)
        self.right = tuple(right)
        given = dict(prefs or {})

        by_name: dict[str, AgentId] = {}
        for side, agents in ((Side.LEFT, self.left), (Side.RIGHT, self.right)):
            for pos, agent in enumerate(agents):
                if agent.side is not side:
                    raise ValidationError(f"{agent.name} listed on the wrong side")
                if agent.index != pos:
                    raise ValidationError(
                        f"{agent.name} has index {agent.index}, expected {pos}"
                    )
                if not NAME_RE.match(agent.name):
                    raise ValidationError(f"invalid agent name {agent.name!r}")
                if agent.name in by_name:
                    raise ValidationError(f"duplicate agent name {agent.name}")
                by_name[agent.name] = agent
        self._by_name = by_name

        everyone = set(self.left) | set(self.right)
        for owner in given:
            if owner not in everyone:
                raise ValidationError(f"preferences given for unknown agent {owner.name}")
        self.prefs: dict[AgentId, PreferenceList] = {
            a: given.get(a, PreferenceList()) for a in self.left + self.right
        }

        for owner, plist in self.prefs.items():
            for tier in plist.tiers:
                for other in tier:
                    if other not in everyone:
                        raise ValidationError(
                            f"{owner.name} lists unknown agent {other.name}"
                        )
                    if other.side is owner.side:
                        raise ValidationError(
                            f"{owner.name} lists {other.name} from its own side"
                        )
        listed = {a: self.prefs[a].listed() for a in self.prefs}
        for owner, others in listed.items():
            for other in others:
                if owner not in listed[other]:
                    raise ValidationError(
                        f"acceptability is not mutual: {owner.name} lists "
                        f"{other.name} but not vice versa"
                    )

        self._rank: dict[AgentId, dict[AgentId, int]] = {
            a: {other: t for t, tier in enumerate(plist.tiers) for other in tier}
            for a, plist in self.prefs.items()
        }
        self.n_left = len(self.left)
        self.n_right = len(self.right)
        # Integer-indexed views used by the search-facing fast paths.
        self._lrank: list[dict[int, int]] = [
            {o.index: t for o, t in self._rank[a].items()} for a in self.left
        ]
        self._rrank: list[dict[int, int]] = [
            {o.index: t for o, t in self._rank[a].items()} for a in self.right
        ]
        self._lacc: list[tuple[int, ...]] = [tuple(sorted(d)) for d in self._lrank]

    @classmethod
    def from_names(
        cls,
        left_names: Sequence[str],
        right_names: Sequence[str],
        prefs: dict[str, Sequence[Sequence[str] | str]] | None = None,
    ) -> "Instance":
        """Build an instance from names; each tier is a list of names (a bare
        string means a singleton tier)."""
        left = tuple(AgentId(Side.LEFT, i, n) for i, n in enumerate(left_names))
        right = tuple(AgentId(Side.RIGHT, i, n) for i, n in enumerate(right_names))
        by = {}
        for a in left + right:
            if a.name in by:
                raise ValidationError(f"duplicate agent name {a.name}")
            by[a.name] = a

        def resolve(name: str) -> AgentId:
            try:
                return by[name]
            except KeyError:
                raise ValidationError(f"unknown agent {name}") from None

        p: dict[AgentId, PreferenceList] = {}
        for name, tiers in (prefs or {}).items():
            owner = resolve(name)
            built = []
            for tier in tiers:
                members = [tier] if isinstance(tier, str) else list(tier)
                built.append(frozenset(resolve(m) for m in members))
            p[owner] = PreferenceList(tuple(built))
        return cls(left, right, p)

    def __contains__(self, agent: AgentId) -> bool:
        return self._by_name.get(agent.name) == agent

    def agent(self, name: str) -> AgentId:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValidationError(f"unknown agent {name}") from None

    def rank(self, who: AgentId, other: AgentId) -> int | None:
        """Tier index of `other` in `who`'s list, or None if unacceptable."""
        try:
            ranks = self._rank[who]
        except KeyError:
            raise ValidationError(f"{who.name} is not in this instance") from None
        return ranks.get(other)

    def acceptable(self, who: AgentId) -> tuple[AgentId, ...]:
        """Acceptable partners of `who`, sorted by index."""
        ranks = self._rank.get(who)
        if ranks is None:
            raise ValidationError(f"{who.name} is not in this instance")
        return tuple(sorted(ranks, key=lambda a: a.index))

    def agents(self) -> tuple[AgentId, ...]:
        return self.left + self.right

    def __eq__(self, other):
        return (
            isinstance(other, Instance)
            and self.left == other.left
            and self.right == other.right
            and self.prefs == other.prefs
        )

    def __hash__(self):
        return hash((self.left, self.right))

    def __repr__(self):
        return f"Instance({self.n_left}x{self.n_right})"


def compare(instance: Instance, who: AgentId, a: AgentId, b: AgentId) -> Comparison:
    """Compare partners a and b from `who`'s point of view.

    INCOMPARABLE when either candidate is unacceptable to `who`; unacceptable
    agents rank below being unmatched for blocking purposes.
    """
    for x in (who, a, b):
        if x not in instance:
            raise ValidationError(f"{x.name} is not in this instance")
    if a.side is who.side or b.side is who.side:
        raise ValidationError("candidates must be on the side opposite to the chooser")
    ra = instance.rank(who, a)
    rb = instance.rank(who, b)
    if ra is None or rb is None:
        return Comparison.INCOMPARABLE
    if ra < rb:
        return Comparison.PREFERS_A
    if ra > rb:
        return Comparison.PREFERS_B
    return Comparison.TIED


def _resolve_agent(instance: Instance, x) -> AgentId:
    if isinstance(x, AgentId):
        if x not in instance:
            raise ValidationError(f"{x.name} is not in this instance")
        return x
    return instance.agent(x)


def normalize_pair(instance: Instance, pair) -> tuple[AgentId, AgentId]:
    """Resolve a pair (of AgentIds or names, in either order) to (left, right)."""
    try:
        a, b = pair
    except (TypeError, ValueError):
        raise ValidationError(f"not a pair: {pair!r}") from None
    a = _resolve_agent(instance, a)
    b = _resolve_agent(instance, b)
    if a.side is b.side:
        raise ValidationError(f"{a.name} and {b.name} are on the same side")
    return (a, b) if a.side is Side.LEFT else (b, a)


class Matching:
    """An immutable set of disjoint, mutually acceptable pairs."""

    __slots__ = ("pairs", "_partner")

    def __init__(self, instance: Instance, pairs: Iterable):
        norm = {normalize_pair(instance, p) for p in pairs}
        partner: dict[AgentId, AgentId] = {}
        for l, r in sorted(norm, key=lambda p: (p[0].index, p[1].index)):
            if l in partner:
                raise ValidationError(f"{l.name} occurs in two pairs")
            if r in partner:
                raise ValidationError(f"{r.name} occurs in two pairs")
            if instance.rank(l, r) is None:
                raise ValidationError(
                    f"{l.name} and {r.name} are not mutually acceptable"
                )
            partner[l] = r
            partner[r] = l
        self.pairs: frozenset[tuple[AgentId, AgentId]] = frozenset(norm)
        self._partner = partner

    def partner(self, agent: AgentId) -> AgentId | None:
        return self._partner.get(agent)

    def sorted_pairs(self) -> list[tuple[AgentId, AgentId]]:
        return sorted(self.pairs, key=lambda p: p[0].index)

    def matched_agents(self) -> frozenset[AgentId]:
        return frozenset(self._partner)

    def __eq__(self, other):
        return isinstance(other, Matching) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[AgentId, AgentId]]:
        return iter(self.sorted_pairs())

    def __repr__(self):
        body = " ".join(f"{l.name}-{r.name}" for l, r in self.sorted_pairs())
        return f"Matching({body or 'empty'})"


def is_matching(instance: Instance, pairs: Iterable) -> bool:
    """Total predicate: True iff `pairs` forms a valid matching for `instance`."""
    try:
        Matching(instance, pairs)
    except (ValidationError, ValueError):
        return False
    return True


#: Fixed-length partner encoding of a matching: one slot per left agent.
CanonicalKey = tuple[int, ...]


def canonical_key(instance: Instance, m: Matching) -> CanonicalKey:
    """Deterministic encoding; equal keys iff equal pair sets."""
    key = [UNMATCHED] * instance.n_left
    for l, r in m.pairs:
        key[l.index] = r.index
    return tuple(key)


def matching_from_key(instance: Instance, key: CanonicalKey) -> Matching:
    return Matching(
        instance,
        [
            (instance.left[i], instance.right[j])
            for i, j in enumerate(key)
            if j != UNMATCHED
        ],
    )


# ---------------------------------------------------------------------------
# Text formats
#
# Instance file (line oriented, `#` starts a comment):
#   side LEFT: u1 u2 ...
#   side RIGHT: w1 w2 ...
#   pref u1: w1 | w3 w2 | w4        (tiers separated by `|`, ties inside)
# Matching file:
#   pair u1 w1
# ---------------------------------------------------------------------------

_SIDE_LINE = re.compile(r"\s*side\s+(\S+)\s*:\s*(.*)$")
_PREF_LINE = re.compile(r"\s*pref\s+(\S+)\s*:\s*(.*)$")
_PAIR_LINE = re.compile(r"\s*pair\s+(\S+)\s+(\S+)\s*$")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _check_name(name: str, lineno: int, line: str) -> str:
    if not NAME_RE.match(name):
        raise ParseError(f"invalid name {name!r}", lineno, line.find(name) + 1)
    return name


def parse_instance(text: str) -> Instance:
    sides: dict[str, list[str]] = {}
    pref_lines: list[tuple[int, str, str]] = []
    for lineno, line in _content_lines(text):
        m = _SIDE_LINE.match(line)
        if m:
            label, rest = m.groups()
            if label not in ("LEFT", "RIGHT"):
                raise ParseError(
                    f"unknown side {label!r}", lineno, line.find(label) + 1
                )
            if label in sides:
                raise ParseError(f"duplicate side {label} line", lineno)
            sides[label] = [_check_name(n, lineno, line) for n in rest.split()]
            continue
        m = _PREF_LINE.match(line)
        if m:
            owner, rest = m.groups()
            pref_lines.append((lineno, _check_name(owner, lineno, line), rest))
            continue
        word = line.split()[0]
        raise ParseError(f"unrecognized directive {word!r}", lineno, line.find(word) + 1)

    if "LEFT" not in sides or "RIGHT" not in sides:
        raise ParseError("missing `side LEFT:` or `side RIGHT:` line")

    names_seen: dict[str, int] = {}
    for label in ("LEFT", "RIGHT"):
        for n in sides[label]:
            if n in names_seen:
                raise ParseError(f"duplicate agent name {n}")
            names_seen[n] = 1

    prefs: dict[str, list[list[str]]] = {}
    for lineno, owner, rest in pref_lines:
        if owner not in names_seen:
            raise ParseError(f"preference line for unknown agent {owner}", lineno)
        if owner in prefs:
            raise ParseError(f"duplicate preference line for {owner}", lineno)
        tiers: list[list[str]] = []
        if rest.strip():
            for chunk in rest.split("|"):
                members = [_check_name(n, lineno, rest) for n in chunk.split()]
                if not members:
                    raise ParseError(f"empty tier in preference line for {owner}", lineno)
                tiers.append(members)
        for tier in tiers:
            for n in tier:
                if n not in names_seen:
                    raise ParseError(f"{owner} lists unknown agent {n}", lineno)
        prefs[owner] = tiers

    return Instance.from_names(sides["LEFT"], sides["RIGHT"], prefs)


def serialize_instance(instance: Instance) -> str:
    lines = [
        "side LEFT: " + " ".join(a.name for a in instance.left),
        "side RIGHT: " + " ".join(a.name for a in instance.right),
    ]
    for agent in instance.left + instance.right:
        tiers = instance.prefs[agent].tiers
        body = " | ".join(
            " ".join(a.name for a in sorted(tier, key=lambda x: x.index))
            for tier in tiers
        )
        lines.append(f"pref {agent.name}:" + (" " + body if body else ""))
    return "\n".join(lines) + "\n"


def parse_matching(text: str, instance: Instance) -> Matching:
    pairs = []
    for lineno, line in _content_lines(text):
        m = _PAIR_LINE.match(line)
        if not m:
            word = line.split()[0]
            raise ParseError(
                f"unrecognized directive {word!r} (expected `pair L R`)",
                lineno,
                line.find(word) + 1,
            )
        a, b = m.groups()
        try:
            pairs.append(normalize_pair(instance, (a, b)))
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from exc
    return Matching(instance, pairs)


def serialize_matching(m: Matching) -> str:
    return "".join(f"pair {l.name} {r.name}\n" for l, r in m.sorted_pairs())


def instance_to_json(instance: Instance) -> dict:
    return {
        "left": [a.name for a in instance.left],
        "right": [a.name for a in instance.right],
        "prefs": {
            a.name: [
                sorted((x.name for x in tier), key=lambda n: instance.agent(n).index)
                for tier in instance.prefs[a].tiers
            ]
            for a in instance.left + instance.right
        },
    }


def instance_from_json(data: dict) -> Instance:
    return Instance.from_names(data["left"], data["right"], data.get("prefs", {}))


def matching_to_json(m: Matching) -> dict:
    return {"pairs": [[l.name, r.name] for l, r in m.sorted_pairs()]}


def matching_from_json(instance: Instance, data: dict) -> Matching:
    return Matching(instance, [tuple(p) for p in data["pairs"]])


def dumps_instance_json(instance: Instance) -> str:
    return json.dumps(instance_to_json(instance), indent=2) + "\n"
