"""Independent Set -> divorce-reachability reduction, with its constructive
certificate, independent-set extractor, and structural-property checker.

Given a graph G=(V,E) with |V|=n, |E|=m and a target size k, the reduction
emits an instance with 4m+2n agents per side and an initial matching from
which a stable matching is reachable iff G has a k-vertex independent set.
Per vertex v_i there are agents a_i (left) and s_i/t_i, b_i (right); per edge
e_j there are e_j, f_j, x_j, c_j (left) and two edge-endpoint agents
e^{v}_j, plus y_j, d_j (right).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import (
    Instance,
    Matching,
    ParseError,
    ValidationError,
    _content_lines,
)
from .dynamics import BlockingPair, is_stable


@dataclass(frozen=True)
class SourceGraph:
    """Undirected simple graph with 1-based vertices and a target size k."""

    n: int
    k: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("vertex count must be non-negative")
        if not 0 <= self.k <= self.n:
            raise ValidationError(f"k={self.k} outside 0..{self.n}")
        norm = []
        seen = set()
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValidationError(f"edge ({u},{v}) has an endpoint outside 1..{self.n}")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValidationError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertex_name(self, i: int) -> str:
        return f"v_{i}"

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        return not any(u in vs and v in vs for u, v in self.edges)

    def incident(self, i: int) -> list[int]:
        """1-based indices of edges incident to vertex i, ascending."""
        return [j for j, (u, v) in enumerate(self.edges, 1) if i in (u, v)]


def parse_source_graph(text: str) -> SourceGraph:
    n = k = None
    edges = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "k" and len(parts) == 2:
                k = int(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ParseError(
                    f"expected `n <int>`, `k <int>`, or `edge <i> <j>`", lineno
                )
        except ValueError as exc:
            raise ParseError(f"bad integer in {line.strip()!r}", lineno) from exc
    if n is None or k is None:
        raise ParseError("graph file must declare both `n` and `k`")
    try:
        return SourceGraph(n, k, tuple(edges))
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def serialize_source_graph(g: SourceGraph) -> str:
    lines = [f"n {g.n}", f"k {g.k}"]
    lines += [f"edge {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


@dataclass
class ReductionArtifact:
    instance: Instance
    m0: Matching
    source: SourceGraph
    #: Name maps back to the source graph; `meta["edges"][j-1]["orientation"]`
    #: records which endpoint's edge-agent starts matched to x_j vs c_j.
    meta: dict

    def meta_json(self) -> str:
        return json.dumps(self.meta, indent=2) + "\n"


def reduce_graph(g: SourceGraph) -> ReductionArtifact:
    """Emit the reduced instance and its initial matching M0.

    Each side gets exactly 4m+2n agents.  Per-edge gadget orientation is fixed
    as: the smaller-index endpoint's edge-agent starts matched to x_j.
    """
    n, k, m = g.n, g.k, g.m
    V = [f"v_{i}" for i in range(1, n + 1)]
    A = [f"a_{i}" for i in range(1, n + 1)]
    S = [f"s_{i}" for i in range(1, k + 1)]
    T = [f"t_{i}" for i in range(1, n - k + 1)]
    B = [f"b_{i}" for i in range(1, n + 1)]
    Ej = [f"e_{j}" for j in range(1, m + 1)]
    Fj = [f"f_{j}" for j in range(1, m + 1)]
    Xj = [f"x_{j}" for j in range(1, m + 1)]
    Cj = [f"c_{j}" for j in range(1, m + 1)]
    Yj = [f"y_{j}" for j in range(1, m + 1)]
    Dj = [f"d_{j}" for j in range(1, m + 1)]

    def ev(vertex: int, j: int) -> str:
        return f"e^{{v_{vertex}}}_{j}"

    edge_agents = []  # per edge: (smaller endpoint agent, larger endpoint agent)
    for j, (u, v) in enumerate(g.edges, 1):
        edge_agents.append((ev(u, j), ev(v, j)))

    left_names = V + A + Ej + Fj + Xj + Cj
    right_names = S + T + B + [name for pair in edge_agents for name in pair] + Yj + Dj

    incident_agents: dict[int, list[str]] = {i: [] for i in range(1, n + 1)}
    for j, (u, v) in enumerate(g.edges, 1):
        incident_agents[u].append(ev(u, j))
        incident_agents[v].append(ev(v, j))

    prefs: dict[str, list[list[str]]] = {}
    for i in range(1, n + 1):
        tiers = []
        if T:
            tiers.append(T)
        if incident_agents[i]:
            tiers.append(incident_agents[i])
        if S:
            tiers.append(S)
        tiers.append([f"b_{i}"])
        prefs[f"v_{i}"] = tiers
    for i in range(1, n + 1):
        last = f"s_{i}" if i <= k else f"t_{i - k}"
        prefs[f"a_{i}"] = [B, [last]]
    for j in range(1, m + 1):
        pair = list(edge_agents[j - 1])
        prefs[f"e_{j}"] = [pair, [f"y_{j}"]]
        prefs[f"f_{j}"] = [pair, [f"d_{j}"]]
        prefs[f"x_{j}"] = [[f"y_{j}"], pair, [f"d_{j}"]]
        prefs[f"c_{j}"] = [[f"d_{j}"], pair, [f"y_{j}"]]
    for i in range(1, k + 1):
        # Vertex agents are tied here, as for the T-agents; a strict order
        # would leave stray blocking pairs against S mid-certificate.
        prefs[f"s_{i}"] = [V, [f"a_{i}"]] if V else [[f"a_{i}"]]
    for i in range(1, n - k + 1):
        prefs[f"t_{i}"] = [V, [f"a_{i + k}"]]
    for i in range(1, n + 1):
        prefs[f"b_{i}"] = [[a] for a in A] + [[f"v_{i}"]]
    for j, (u, v) in enumerate(g.edges, 1):
        for vertex in (u, v):
            prefs[ev(vertex, j)] = [
                [f"e_{j}"],
                [f"v_{vertex}"],
                [f"f_{j}"],
                [f"c_{j}"],
                [f"x_{j}"],
            ]
        prefs[f"y_{j}"] = [[f"x_{j}"], [f"e_{j}"], [f"c_{j}"]]
        # d_j mirrors y_j; x_j is the only remaining left agent listing d_j.
        prefs[f"d_{j}"] = [[f"c_{j}"], [f"f_{j}"], [f"x_{j}"]]

    instance = Instance.from_names(left_names, right_names, prefs)

    m0_pairs: list[tuple[str, str]] = []
    for i in range(1, n + 1):
        m0_pairs.append((f"v_{i}", f"b_{i}"))
        m0_pairs.append((f"a_{i}", f"s_{i}" if i <= k else f"t_{i - k}"))
    for j, (u, v) in enumerate(g.edges, 1):
        m0_pairs.append((f"x_{j}", ev(u, j)))
        m0_pairs.append((f"c_{j}", ev(v, j)))
        m0_pairs.append((f"e_{j}", f"y_{j}"))
        m0_pairs.append((f"f_{j}", f"d_{j}"))
    m0 = Matching(instance, m0_pairs)

    meta = {
        "n": n,
        "k": k,
        "m": m,
        "vertices": {
            f"v_{i}": {
                "vertex_agent": f"v_{i}",
                "a": f"a_{i}",
                "b": f"b_{i}",
                "edge_agents": incident_agents[i],
            }
            for i in range(1, n + 1)
        },
        "s_agents": S,
        "t_agents": T,
        "edges": [
            {
                "index": j,
                "endpoints": [f"v_{u}", f"v_{v}"],
                "e": f"e_{j}",
                "f": f"f_{j}",
                "x": f"x_{j}",
                "c": f"c_{j}",
                "y": f"y_{j}",
                "d": f"d_{j}",
                "edge_agents": {f"v_{u}": ev(u, j), f"v_{v}": ev(v, j)},
                "orientation": {"x_side": f"v_{u}", "c_side": f"v_{v}"},
            }
            for j, (u, v) in enumerate(g.edges, 1)
        ],
    }
    return ReductionArtifact(instance, m0, g, meta)


def _vertex_indices(g: SourceGraph, vset: Iterable) -> list[int]:
    out = []
    for v in vset:
        if isinstance(v, int):
            idx = v
        else:
            name = str(v)
            if not name.startswith("v_"):
                raise ValidationError(f"not a vertex name: {name!r}")
            idx = int(name[2:])
        if not 1 <= idx <= g.n:
            raise ValidationError(f"vertex v_{idx} outside 1..{g.n}")
        out.append(idx)
    if len(set(out)) != len(out):
        raise ValidationError("duplicate vertices in the given set")
    return sorted(out)


def build_certificate(art: ReductionArtifact, vset: Iterable) -> list[BlockingPair]:
    """Concatenated b-interchange sequence for an independent set of size k:
    first V'-vertices marry the S-agents, then the remaining vertices marry
    the T-agents, then every edge gadget resolves (2 steps when the c-side
    endpoint is outside V', 3 steps when it is inside)."""
    g = art.source
    chosen = _vertex_indices(g, vset)
    if len(chosen) != g.k:
        raise ValidationError(f"expected {g.k} vertices, got {len(chosen)}")
    if not g.is_independent(chosen):
        raise ValidationError("the given vertex set is not independent")
    inside = set(chosen)
    rest = [i for i in range(1, g.n + 1) if i not in inside]

    inst = art.instance
    pair = lambda a, b: BlockingPair(inst.agent(a), inst.agent(b))
    seq: list[BlockingPair] = []
    for i, r in enumerate(chosen, 1):
        seq.append(pair(f"v_{r}", f"s_{i}"))
    for i, z in enumerate(rest, 1):
        seq.append(pair(f"v_{z}", f"t_{i}"))
    for em in art.meta["edges"]:
        j = em["index"]
        x_side = em["orientation"]["x_side"]
        c_side = em["orientation"]["c_side"]
        ev_x = em["edge_agents"][x_side]
        ev_c = em["edge_agents"][c_side]
        c_vertex = int(c_side[2:])
        if c_vertex in inside:
            seq.append(pair(f"e_{j}", ev_c))
            seq.append(pair(f"x_{j}", f"y_{j}"))
            seq.append(pair(f"c_{j}", f"d_{j}"))
        else:
            seq.append(pair(f"e_{j}", ev_x))
            seq.append(pair(f"f_{j}", ev_c))
    return seq


def extract_independent_set(art: ReductionArtifact, m: Matching) -> list[str]:
    """Vertices whose agents are matched into S; for a stable matching
    reachable from M0 this is a k-vertex independent set."""
    if not is_stable(art.instance, m):
        raise ValidationError("matching is not stable; nothing to extract")
    s_names = set(art.meta["s_agents"])
    out = []
    for i in range(1, art.source.n + 1):
        p = m.partner(art.instance.agent(f"v_{i}"))
        if p is not None and p.name in s_names:
            out.append(f"v_{i}")
    return out


@dataclass
class Claim1Report:
    """Six structural properties of stable matchings reachable from M0:
    1. every a_i is matched into B;        2. every x_j is matched to y_j;
    3. every c_j is matched to d_j;        4. every t_i is matched into V;
    5. every s_i is matched into V;        6. for every vertex matched into S,
    each incident edge-agent pairs with its e_j and the other endpoint is
    matched into T."""

    holds: tuple[bool, bool, bool, bool, bool, bool]
    counterexamples: tuple[tuple[str, ...], ...]

    @property
    def all_hold(self) -> bool:
        return all(self.holds)


def check_claim1(art: ReductionArtifact, m: Matching) -> Claim1Report:
    inst = art.instance
    g = art.source
    s_names = set(art.meta["s_agents"])
    t_names = set(art.meta["t_agents"])
    v_names = {f"v_{i}" for i in range(1, g.n + 1)}
    b_names = {f"b_{i}" for i in range(1, g.n + 1)}

    def partner_name(name: str) -> str | None:
        p = m.partner(inst.agent(name))
        return p.name if p is not None else None

    bad: list[list[str]] = [[] for _ in range(6)]
    for i in range(1, g.n + 1):
        if partner_name(f"a_{i}") not in b_names:
            bad[0].append(f"a_{i}")
    for j in range(1, g.m + 1):
        if partner_name(f"x_{j}") != f"y_{j}":
            bad[1].append(f"x_{j}")
        if partner_name(f"c_{j}") != f"d_{j}":
            bad[2].append(f"c_{j}")
    for t in sorted(t_names, key=lambda s: int(s[2:])):
        if partner_name(t) not in v_names:
            bad[3].append(t)
    for s in sorted(s_names, key=lambda s: int(s[2:])):
        if partner_name(s) not in v_names:
            bad[4].append(s)
    for i in range(1, g.n + 1):
        if partner_name(f"v_{i}") not in s_names:
            continue
        for j in g.incident(i):
            em = art.meta["edges"][j - 1]
            other = next(x for x in em["endpoints"] if x != f"v_{i}")
            if partner_name(f"e_{j}") != em["edge_agents"][f"v_{i}"]:
                bad[5].append(f"e_{j}")
            if partner_name(other) not in t_names:
                bad[5].append(other)

    return Claim1Report(
        holds=tuple(not b for b in bad),  # type: ignore[arg-type]
        counterexamples=tuple(tuple(b) for b in bad),
    )
