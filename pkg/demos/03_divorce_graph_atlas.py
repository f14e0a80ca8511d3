"""Map an entire divorce graph: sinks, strongly connected components, and
the region from which no stable matching can ever be reached.

Also shows the small incomplete-preference fixture whose only blocking pair
has an infeasible b-interchange -- a sink of the divorce graph that is not
stable, something that cannot happen under complete preferences.

Run with:  python3 demos/03_divorce_graph_atlas.py
Optionally pass an output path to also write a DOT rendering.
"""

import sys

from divorcedyn import (
    blocking_pairs,
    build_divorce_graph,
    condensation,
    export_dot,
    sinks,
)
from divorcedyn.fixtures import nonstable_sink_fixture, tamura_instance, tamura_n0


def main():
    inst = tamura_instance()
    g = build_divorce_graph(inst)
    cond = condensation(g)
    doomed = sum(len(cond.components[ci]) for ci in cond.no_stable_path)
    print("full divorce graph of the 4x4 worked example:")
    print(f"  nodes (matchings, partial included): {g.node_count()}")
    print(f"  arcs (feasible b-interchanges):      {g.arc_count()}")
    print(f"  stable matchings:                    {len(g.stable)}")
    print(f"  sinks:                               {len(sinks(g))}")
    print(f"  strongly connected components:       {len(cond.components)}")
    print(f"  nodes with no path to stability:     {doomed}")

    trap = build_divorce_graph(inst, roots=[tamura_n0(inst)])
    print(
        f"\nthe trap region around N0 has {trap.node_count()} matchings, "
        f"{len(trap.stable)} of them stable."
    )

    small, stuck = nonstable_sink_fixture()
    sg = build_divorce_graph(small)
    print(f"\nnon-stable sink fixture ({small.n_left}x{small.n_right} incomplete):")
    print(f"  matching {stuck} has blocking pairs {blocking_pairs(small, stuck)}")
    print("  yet no feasible b-interchange: the divorcees' exes refuse each other.")

    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            fh.write(export_dot(sg))
        print(f"\nwrote DOT for the small fixture to {sys.argv[1]}")


if __name__ == "__main__":
    main()
