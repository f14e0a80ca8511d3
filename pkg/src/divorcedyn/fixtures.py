"""Canonical small instances used throughout the tests and demos."""

from __future__ import annotations

from .model import Instance, Matching


def _strict(names: str) -> list[list[str]]:
    return [[n] for n in names.split()]


def tamura_instance() -> Instance:
    """Tamura's 4x4 strict complete instance whose divorce graph has a
    region with no escape to a stable matching."""
    return Instance.from_names(
        ["u1", "u2", "u3", "u4"],
        ["w1", "w2", "w3", "w4"],
        {
            "u1": _strict("w1 w3 w2 w4"),
            "u2": _strict("w2 w4 w3 w1"),
            "u3": _strict("w3 w1 w4 w2"),
            "u4": _strict("w4 w2 w1 w3"),
            "w1": _strict("u2 u4 u1 u3"),
            "w2": _strict("u3 u1 u2 u4"),
            "w3": _strict("u4 u2 u3 u1"),
            "w4": _strict("u1 u3 u4 u2"),
        },
    )


def tamura_m0(instance: Instance) -> Matching:
    """Two blocking pairs; either b-interchange reaches stability in one step."""
    return Matching(instance, [("u1", "w1"), ("u2", "w4"), ("u3", "w3"), ("u4", "w2")])


def tamura_n0(instance: Instance) -> Matching:
    """No b-interchange sequence from here ever reaches a stable matching."""
    return Matching(instance, [("u1", "w1"), ("u2", "w2"), ("u3", "w4"), ("u4", "w3")])


def tamura_stable(instance: Instance) -> Matching:
    """The man-optimal (diagonal) stable matching."""
    return Matching(instance, [(f"u{i}", f"w{i}") for i in range(1, 5)])


def nonstable_sink_fixture() -> tuple[Instance, Matching]:
    """Incomplete-preference instance with a blocked matching whose only
    blocking pair has an infeasible b-interchange: a sink that is not stable.

    {u1,w1} blocks u1-w2/u2-w1, but the divorce would remarry u2 and w2,
    who find each other unacceptable.
    """
    instance = Instance.from_names(
        ["u1", "u2"],
        ["w1", "w2"],
        {
            "u1": [["w1"], ["w2"]],
            "u2": [["w1"]],
            "w1": [["u1"], ["u2"]],
            "w2": [["u1"]],
        },
    )
    return instance, Matching(instance, [("u1", "w2"), ("u2", "w1")])
