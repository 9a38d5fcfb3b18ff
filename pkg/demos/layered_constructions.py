"""Layered decompositions for geometric intersection graphs.

For unit disks and for grid paths the layered tree-independence number is
bounded by a constant independent of n. This script measures it on growing
random instances and prints the measurement next to the bound.
"""
from fractions import Fraction

from treealpha import (
    GenSpec,
    generate,
    grid_layered_bound,
    grid_path_layered_decomposition,
    intersection_graph,
    layered_independence_number,
    unit_disk_layered_decomposition,
)


def main() -> None:
    print("unit disks (bound 8)")
    for n in (20, 60, 120):
        inst = generate(GenSpec("unit_disks", n, seed=n, extent=Fraction(n, 6)))
        g = intersection_graph(inst)
        td, lay = unit_disk_layered_decomposition(inst)
        print(f"  n={n:4d}  edges={g.num_edges:5d}  measured={layered_independence_number(g, td, lay)}")

    for mode in ("v", "e"):
        for ell in (1, 2, 3):
            inst = generate(GenSpec(
                "grid_paths", 80, seed=ell, extent=Fraction(10), size_min=Fraction(0),
                size_max=Fraction(ell - 1), bends=2 if ell > 1 else 0, mode=mode,
            ))
            g = intersection_graph(inst)
            td, lay = grid_path_layered_decomposition(inst, ell, g)
            k = layered_independence_number(g, td, lay)
            print(f"grid paths mode={mode} ell={ell}: measured {k}, bound {grid_layered_bound(inst, ell)}")


if __name__ == "__main__":
    main()
