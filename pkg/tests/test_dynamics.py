import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divorcedyn import (
    BlockingPair,
    Infeasible,
    Matching,
    Reason,
    Rejected,
    apply_b_interchange,
    b_inter_raw,
    blocking_pairs,
    is_blocking,
    is_matching,
    is_stable,
    parse_certificate,
    serialize_certificate,
    verify_sequence,
)
from divorcedyn.fixtures import (
    nonstable_sink_fixture,
    tamura_instance,
    tamura_m0,
    tamura_stable,
)
from divorcedyn.oracles import _all_blocking, _naive_binter, enumerate_matchings

from helpers import check_transition_laws, random_instance, random_matching


def test_example_blocking_pairs():
    inst = tamura_instance()
    m0 = tamura_m0(inst)
    bps = blocking_pairs(inst, m0)
    assert {bp.names() for bp in bps} == {("u2", "w2"), ("u4", "w4")}
    assert is_blocking(inst, m0, ("u2", "w2"))
    assert is_blocking(inst, m0, ("w4", "u4"))  # order-insensitive
    assert not is_blocking(inst, m0, ("u1", "w1"))  # already married
    assert not is_blocking(inst, m0, ("u1", "w2"))


def test_example_one_step_convergence():
    inst = tamura_instance()
    m0 = tamura_m0(inst)
    diag = tamura_stable(inst)
    for pair in (("u2", "w2"), ("u4", "w4")):
        out = apply_b_interchange(inst, m0, pair)
        assert isinstance(out, Matching)
        assert out == diag
        assert is_stable(inst, out)
    assert not is_stable(inst, m0)


def test_apply_rejects_non_blocking():
    inst = tamura_instance()
    m0 = tamura_m0(inst)
    out = apply_b_interchange(inst, m0, ("u1", "w2"))
    assert isinstance(out, Infeasible)
    assert out.reason is Reason.NOT_BLOCKING


def test_apply_rejects_unacceptable_remarriage():
    inst, sink = nonstable_sink_fixture()
    assert blocking_pairs(inst, sink)  # blocked ...
    out = apply_b_interchange(inst, sink, ("u1", "w1"))
    assert isinstance(out, Infeasible)
    assert out.reason is Reason.REMARRIAGE_UNACCEPTABLE  # ... but stuck


def test_strict_mode_needs_both_matched():
    inst = tamura_instance()
    m = Matching(inst, [("u2", "w4"), ("u3", "w3"), ("u4", "w2")])
    pair = ("u1", "w1")
    assert is_blocking(inst, m, pair)
    strict = apply_b_interchange(inst, m, pair, require_both_matched=True)
    assert isinstance(strict, Infeasible)
    assert strict.reason is Reason.NOT_BOTH_MATCHED
    loose = apply_b_interchange(inst, m, pair)
    assert isinstance(loose, Matching)
    assert loose.partner(inst.agent("u1")) == inst.agent("w1")


def test_b_inter_raw_matches_formula_cases():
    inst = tamura_instance()
    u1, w1 = inst.agent("u1"), inst.agent("w1")
    # both matched: swap partners
    m = Matching(inst, [("u1", "w2"), ("u2", "w1")])
    raw = b_inter_raw(m, (u1, w1))
    assert raw == frozenset(
        {(u1, w1), (inst.agent("u2"), inst.agent("w2"))}
    )
    # one matched: the ex-partner is left single
    m = Matching(inst, [("u2", "w1")])
    assert b_inter_raw(m, (u1, w1)) == frozenset({(u1, w1)})
    # neither matched: plain addition
    m = Matching(inst, [("u3", "w3")])
    assert b_inter_raw(m, (u1, w1)) == frozenset(
        {(u1, w1), (inst.agent("u3"), inst.agent("w3"))}
    )


def test_apply_agrees_with_naive_oracle():
    for seed in range(40):
        rng = random.Random(3000 + seed)
        inst = random_instance(rng)
        m = random_matching(rng, inst)
        expected = {
            (u.name, w.name): _naive_binter(inst, m, u, w)
            for u, w in _all_blocking(inst, m)
        }
        assert {bp.names() for bp in blocking_pairs(inst, m)} == set(expected)
        for (un, wn), oracle_out in expected.items():
            out = apply_b_interchange(inst, m, (un, wn))
            if oracle_out is None:
                assert isinstance(out, Infeasible)
                assert out.reason is Reason.REMARRIAGE_UNACCEPTABLE
            else:
                assert out == oracle_out


def test_verify_sequence_accepts_and_reports():
    inst = tamura_instance()
    m0 = tamura_m0(inst)
    res = verify_sequence(inst, m0, [("u2", "w2")])
    assert not isinstance(res, Rejected)
    assert res.final_stable
    assert res.final == tamura_stable(inst)
    assert len(res.steps) == 1
    assert res.steps[0].pair.names() == ("u2", "w2")


def test_verify_sequence_empty():
    inst = tamura_instance()
    res = verify_sequence(inst, tamura_stable(inst), [])
    assert not isinstance(res, Rejected)
    assert res.final_stable and res.steps == []
    res2 = verify_sequence(inst, tamura_m0(inst), [])
    assert not res2.final_stable


def test_verify_sequence_rejects_at_first_bad_step():
    inst = tamura_instance()
    m0 = tamura_m0(inst)
    res = verify_sequence(inst, m0, [("u2", "w2"), ("u4", "w4")])
    assert isinstance(res, Rejected)
    assert res.index == 1
    assert res.reason is Reason.NOT_BLOCKING


def test_certificate_text_roundtrip():
    inst = tamura_instance()
    seq = [BlockingPair(inst.agent("u2"), inst.agent("w2"))]
    text = serialize_certificate(seq)
    assert text == "step u2 w2\n"
    assert parse_certificate(text + "# trailing comment\n", inst) == seq


def test_transition_laws_by_enumeration():
    """Every feasible b-interchange of every matching of small instances."""
    for seed in range(12):
        inst = random_instance(random.Random(4000 + seed))
        for m in enumerate_matchings(inst, max_count=100_000):
            for bp in blocking_pairs(inst, m):
                out = apply_b_interchange(inst, m, bp)
                if isinstance(out, Infeasible):
                    assert out.reason is Reason.REMARRIAGE_UNACCEPTABLE
                    continue
                check_transition_laws(inst, m, (bp.left, bp.right), out)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_transition_laws_property(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    m = random_matching(rng, inst)
    for bp in blocking_pairs(inst, m):
        out = apply_b_interchange(inst, m, bp)
        if isinstance(out, Matching):
            check_transition_laws(inst, m, (bp.left, bp.right), out)
            assert is_matching(inst, out.pairs)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_stability_agrees_with_oracle_property(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    m = random_matching(rng, inst)
    assert is_stable(inst, m) == (not _all_blocking(inst, m))
