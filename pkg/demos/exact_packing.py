"""Exact packing on a graph of bounded tree-independence number.

Builds a small random graph, derives a decomposition by elimination, and
packs weighted edges and vertices exactly. The brute-force search is run
alongside as a cross-check.
"""
import random
from fractions import Fraction

from treealpha import (
    PackingInstance,
    brute_force_packing,
    build_graph,
    enumerate_family,
    independence_number,
    solve_packing,
)
from treealpha.treedec import make_decomposition


def elimination_decomposition(g):
    """Min-degree elimination: each eliminated vertex contributes one bag."""
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    order, bags = [], []
    while adj:
        v = min(adj, key=lambda u: (len(adj[u]), u))
        nb = adj.pop(v)
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        order.append(v)
        bags.append(sorted(nb | {v}))
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for i, bag in enumerate(bags):
        later = [pos[u] for u in bag if pos[u] > i]
        if later:
            edges.append((i, min(later)))
        elif i + 1 < len(bags):
            edges.append((i, i + 1))
    return make_decomposition(bags, edges)


def main() -> None:
    rng = random.Random(7)
    n = 12
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
    g = build_graph(n, edges)
    td = elimination_decomposition(g)
    print(f"graph: n={g.n}, m={g.num_edges}; decomposition: {len(td.bags)} bags, "
          f"alpha of worst bag = {independence_number(g, td)}")

    fam = enumerate_family(g, [build_graph(1, []), build_graph(2, [(0, 1)])], 2)
    weights = [Fraction(1) if len(m) == 1 else Fraction(5, 3) for m in fam.members]
    sol = solve_packing(PackingInstance(g, fam, weights), td)
    ref = brute_force_packing(g, fam, weights, allow_large=True)
    print(f"{len(fam)} members (vertices and edges), dp weight {sol.weight}, brute force {ref.weight}")
    for j in sol.chosen:
        print(f"  member {j}: vertices {fam.members[j]}, weight {weights[j]}")


if __name__ == "__main__":
    main()
