"""Walk through the classic 4x4 worked example.

M0 has two blocking pairs; either b-interchange lands on the man-optimal
stable matching in one step.  N0 looks similar but is trapped: no sequence
of b-interchanges from it ever reaches a stable matching.

Run with:  python3 demos/01_worked_example.py
"""

from divorcedyn import (
    apply_b_interchange,
    blocking_pairs,
    is_stable,
    reachable_search,
    serialize_instance,
)
from divorcedyn.fixtures import tamura_instance, tamura_m0, tamura_n0


def main():
    inst = tamura_instance()
    print("The instance:")
    print(serialize_instance(inst))

    m0 = tamura_m0(inst)
    print(f"M0 = {m0}")
    bps = blocking_pairs(inst, m0)
    print(f"blocking pairs of M0: {bps}")

    for bp in bps:
        out = apply_b_interchange(inst, m0, bp)
        print(f"divorce by {bp} -> {out}  stable={is_stable(inst, out)}")

    n0 = tamura_n0(inst)
    print(f"\nN0 = {n0}")
    print(f"blocking pairs of N0: {blocking_pairs(inst, n0)}")
    verdict = reachable_search(inst, n0)
    print(
        f"exhaustive search from N0: {verdict.kind.value} "
        f"after exploring {verdict.explored} matchings"
    )
    print("every matching reachable from N0 is blocked -- divorce never ends here.")


if __name__ == "__main__":
    main()
