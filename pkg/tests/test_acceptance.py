"""End-to-end acceptance gate for the whole toolkit.

Each criterion prints exactly one line, `ACCEPTANCE <n> (<name>): PASS|FAIL`
(visible with `pytest -s` or in the captured output of a failing run).
Criteria 8-10 share one seeded 500-instance corpus.
"""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from functools import lru_cache
from itertools import combinations

from divorcedyn import (
    Budget,
    Matching,
    Rejected,
    SourceGraph,
    VerdictKind,
    apply_b_interchange,
    blocking_pairs,
    build_certificate,
    build_divorce_graph,
    canonical_key,
    check_claim1,
    extract_independent_set,
    is_stable,
    reachable_search,
    reduce_graph,
    sinks,
    verify_sequence,
)
from divorcedyn.fixtures import (
    nonstable_sink_fixture,
    tamura_instance,
    tamura_m0,
    tamura_n0,
    tamura_stable,
)
from divorcedyn.oracles import brute_force_independent_set, exhaustive_reachability

from helpers import check_transition_laws, is_complete, random_instance, random_matching


@contextmanager
def criterion(num: int, name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num} ({name}): FAIL")
        raise
    print(f"ACCEPTANCE {num} ({name}): PASS")


# ---------------------------------------------------------------------------
# Shared corpora (built lazily, reused across criteria)
# ---------------------------------------------------------------------------

CORPUS_SIZE = 500
CORPUS_SEED = 20260823


@lru_cache(maxsize=1)
def corpus() -> tuple:
    rng = random.Random(CORPUS_SEED)
    out = []
    for i in range(CORPUS_SIZE):
        # every fifth instance has complete preference lists
        inst = random_instance(rng, p_accept=1.0 if i % 5 == 0 else 0.6)
        out.append((inst, random_matching(rng, inst)))
    return tuple(out)


@lru_cache(maxsize=1)
def corpus_search_verdicts() -> tuple:
    return tuple(
        (reachable_search(inst, m0), exhaustive_reachability(inst, m0))
        for inst, m0 in corpus()
    )


@lru_cache(maxsize=1)
def corpus_graphs() -> tuple:
    return tuple(build_divorce_graph(inst) for inst, _ in corpus())


def all_graphs(n: int):
    """Every simple graph on vertices 1..n (one per edge subset)."""
    slots = list(combinations(range(1, n + 1), 2))
    for r in range(len(slots) + 1):
        for chosen in combinations(slots, r):
            yield chosen


def independent_sets(g: SourceGraph):
    for combo in combinations(range(1, g.n + 1), g.k):
        if g.is_independent(combo):
            yield combo


def edge_block_lengths(art, inside: set[int]) -> list[int]:
    return [
        3 if int(em["orientation"]["c_side"][2:]) in inside else 2
        for em in art.meta["edges"]
    ]


def gadget_names(em) -> set[str]:
    return {
        em["e"], em["x"], em["y"], em["c"], em["d"],
        *em["edge_agents"].values(),
    }


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def test_criterion_1_example_blocking_pairs():
    with criterion(1, "example blocking pairs"):
        inst = tamura_instance()
        m0 = tamura_m0(inst)
        blocking_pairs(inst, m0)  # warm caches before timing
        t0 = time.perf_counter()
        bps = blocking_pairs(inst, m0)
        elapsed = time.perf_counter() - t0
        assert {bp.names() for bp in bps} == {("u2", "w2"), ("u4", "w4")}
        assert elapsed < 0.001


def test_criterion_2_example_one_step_convergence():
    with criterion(2, "example one-step convergence"):
        inst = tamura_instance()
        m0 = tamura_m0(inst)
        diagonal = tamura_stable(inst)
        for pair in (("u2", "w2"), ("u4", "w4")):
            apply_b_interchange(inst, m0, pair)  # warm
            t0 = time.perf_counter()
            out = apply_b_interchange(inst, m0, pair)
            stable = is_stable(inst, out)
            elapsed = time.perf_counter() - t0
            assert out == diagonal and stable
            assert elapsed < 0.001


def test_criterion_3_non_reachability():
    with criterion(3, "non-reachability from N0"):
        inst = tamura_instance()
        t0 = time.perf_counter()
        verdict = reachable_search(inst, tamura_n0(inst))
        elapsed = time.perf_counter() - t0
        assert verdict.kind is VerdictKind.NOT_REACHABLE
        assert verdict.explored <= 24
        assert elapsed < 1.0


def test_criterion_4_reduction_size_law():
    with criterion(4, "reduction size law"):
        cases = [
            SourceGraph(2, 1, ((1, 2),)),                      # K2
            SourceGraph(3, 1, ((1, 2), (1, 3), (2, 3))),       # K3
            SourceGraph(3, 2, ((1, 2), (2, 3))),               # P3
            SourceGraph(4, 4, ()),                             # edgeless
        ]
        for g in cases:
            art = reduce_graph(g)
            assert art.instance.n_left == 4 * g.m + 2 * g.n
            assert art.instance.n_right == 4 * g.m + 2 * g.n


def _forward_runs():
    """All (artifact, V', accepted sequence result) triples for n <= 4."""
    for n in range(0, 5):
        for edges in all_graphs(n):
            for k in range(0, n + 1):
                g = SourceGraph(n, k, edges)
                art = reduce_graph(g)
                for vprime in independent_sets(g):
                    yield g, art, vprime


def test_criterion_5_forward_soundness():
    with criterion(5, "forward soundness n<=4"):
        t0 = time.perf_counter()
        runs = 0
        for g, art, vprime in _forward_runs():
            cert = build_certificate(art, vprime)
            res = verify_sequence(art.instance, art.m0, cert)
            assert not isinstance(res, Rejected)
            assert res.final_stable
            assert check_claim1(art, res.final).all_hold
            assert extract_independent_set(art, res.final) == [
                f"v_{i}" for i in vprime
            ]
            runs += 1
        assert runs > 0
        assert time.perf_counter() - t0 < 10.0


def test_criterion_6_stage_boundary_laws():
    with criterion(6, "stage boundary laws"):
        for g, art, vprime in _forward_runs():
            inst = art.instance
            inside = set(vprime)
            cert = build_certificate(art, vprime)
            s_names = set(art.meta["s_agents"])
            st_names = s_names | set(art.meta["t_agents"])
            blocks = edge_block_lengths(art, inside)
            boundaries = {g.k: s_names, g.n: st_names}
            pos = g.n
            for em, blen in zip(art.meta["edges"], blocks):
                pos += blen
                # once an edge is processed its whole gadget goes quiet
                boundaries[pos] = boundaries.get(pos, set()) | gadget_names(em)
            cur = art.m0
            for i, pair in enumerate(cert, 1):
                cur = apply_b_interchange(inst, cur, pair)
                assert isinstance(cur, Matching)
                forbidden = boundaries.get(i)
                if forbidden:
                    for bp in blocking_pairs(inst, cur):
                        assert not (set(bp.names()) & forbidden), (
                            f"boundary {i}: {bp} touches {forbidden & set(bp.names())}"
                        )
            # the k=0 / empty-certificate boundary degenerates to M0 itself
            if not cert:
                for bp in blocking_pairs(inst, art.m0):
                    assert not (set(bp.names()) & st_names)


def test_criterion_7_backward_soundness():
    with criterion(7, "backward soundness n<=3"):
        budget = Budget(max_nodes=10**6)
        for n in range(0, 4):
            for edges in all_graphs(n):
                for k in range(0, n + 1):
                    g = SourceGraph(n, k, edges)
                    art = reduce_graph(g)
                    verdict = reachable_search(art.instance, art.m0, budget)
                    assert verdict.kind is not VerdictKind.INCONCLUSIVE, (g, k)
                    expect_yes = brute_force_independent_set(g) is not None
                    assert (verdict.kind is VerdictKind.REACHABLE_STABLE) == expect_yes, (
                        g,
                        k,
                    )


def test_criterion_8_oracle_equivalence():
    with criterion(8, "oracle equivalence on 500 random instances"):
        agree = sum(
            1
            for fast, slow in corpus_search_verdicts()
            if fast.kind is slow.kind
        )
        assert agree == CORPUS_SIZE


def test_criterion_9_sink_stability_laws():
    with criterion(9, "sink/stability laws"):
        for (inst, _), g in zip(corpus(), corpus_graphs()):
            sink_keys = sinks(g)
            assert g.stable <= sink_keys
            if is_complete(inst):
                assert sink_keys <= g.stable
        # a stored incomplete-preference fixture with a non-stable sink
        inst, trap = nonstable_sink_fixture()
        g = build_divorce_graph(inst)
        key = canonical_key(inst, trap)
        assert key in sinks(g) and key not in g.stable


def test_criterion_10_invariant_suite():
    with criterion(10, "invariant suite"):
        # every transition of every corpus divorce graph
        for (inst, _), g in zip(corpus(), corpus_graphs()):
            for key, out_arcs in g.arcs.items():
                m = g.nodes[key]
                for pair, target in out_arcs:
                    check_transition_laws(
                        inst, m, (pair.left, pair.right), g.nodes[target]
                    )
        # every transition explored from the worked example and the K2 reduction
        extra = [
            (tamura_instance(), None),
            (reduce_graph(SourceGraph(2, 1, ((1, 2),))), "reduced"),
        ]
        inst = extra[0][0]
        g = build_divorce_graph(inst, roots=[tamura_m0(inst), tamura_n0(inst)])
        for key, out_arcs in g.arcs.items():
            for pair, target in out_arcs:
                check_transition_laws(
                    inst, g.nodes[key], (pair.left, pair.right), g.nodes[target]
                )
        art = extra[1][0]
        rg = build_divorce_graph(art.instance, roots=[art.m0], max_matchings=100_000)
        edge_agents_of = {
            vn: set(vm["edge_agents"]) for vn, vm in art.meta["vertices"].items()
        }
        for key, out_arcs in rg.arcs.items():
            m = rg.nodes[key]
            for pair, target in out_arcs:
                check_transition_laws(
                    art.instance, m, (pair.left, pair.right), rg.nodes[target]
                )
            # a vertex agent never marries one of its own edge agents
            for vn, bad in edge_agents_of.items():
                p = m.partner(art.instance.agent(vn))
                assert p is None or p.name not in bad
        # every search witness replays and ends stable
        for (inst, m0), (fast, slow) in zip(corpus(), corpus_search_verdicts()):
            for verdict in (fast, slow):
                if verdict.kind is VerdictKind.REACHABLE_STABLE:
                    res = verify_sequence(inst, m0, verdict.witness)
                    assert not isinstance(res, Rejected)
                    assert res.final_stable
