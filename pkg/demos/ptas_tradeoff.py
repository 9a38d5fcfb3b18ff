"""Accuracy against running time for the approximation schemes.

Solves one weighted unit-disk instance exactly, then with the cover-based
scheme and the shifting scheme for shrinking eps, reporting each ratio.
"""
import math
import time
from fractions import Fraction

from treealpha import (
    GenSpec,
    PackingInstance,
    cover_from_layering,
    generate,
    intersection_graph,
    ptas_over_cover,
    shifting_ptas,
    singleton_family,
    solve_mwis,
    unit_disk_layered_decomposition,
)


def main() -> None:
    inst = generate(GenSpec("unit_disks", 60, seed=3, extent=Fraction(14), weighted=True))
    g = intersection_graph(inst)
    w = inst.vertex_weights()
    td, lay = unit_disk_layered_decomposition(inst)
    opt = solve_mwis(g, w, td).weight
    print(f"n={inst.n}, exact optimum {opt}")
    pi = PackingInstance(g, singleton_family(g.n), w)
    for eps in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)):
        r = math.ceil(1 / eps)
        t0 = time.perf_counter()
        cov = ptas_over_cover(pi, cover_from_layering(g, td, lay, r, 8), r)
        t1 = time.perf_counter()
        sh = shifting_ptas(inst, eps)
        t2 = time.perf_counter()
        print(f"eps={eps}: cover {float(cov.solution.weight / opt):.3f} ({t1 - t0:.2f}s), "
              f"shifting {float(sh.solution.weight / opt):.3f} ({t2 - t1:.2f}s), floor {float(1 - eps):.3f}")


if __name__ == "__main__":
    main()
