"""Exact Max Weight Independent Packing over a tree decomposition.

The family is lifted to its conflict graph (members touching or joined by an
edge conflict), the decomposition is lifted alongside it, and a standard
introduce/forget/join dynamic programme runs over independent subsets of each
lifted bag. The number of states per node is therefore bounded by the number
of independent sets of a bag, which is polynomial when the decomposition has
bounded independence number.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    Graph,
    PackingSolution,
    SubgraphFamily,
    as_weights,
    conflict_graph,
    iter_bits,
    prefer,
    singleton_family,
    verify_packing,
)
from .treedec import (
    TreeDecomposition,
    independence_number,
    make_nice,
    validate_decomposition,
)

__all__ = [
    "PackingInstance",
    "lift_decomposition",
    "solve_packing",
    "solve_mwis",
    "prefer",
]


@dataclass(frozen=True)
class PackingInstance:
    host: Graph
    family: SubgraphFamily
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", as_weights(self.weights, len(self.family)))


def lift_decomposition(
    g: Graph, fam: SubgraphFamily, td: TreeDecomposition, *, check: bool = True, vertices=None
) -> TreeDecomposition:
    """Replace each bag by the indices of members meeting it."""
    if check:
        rep = validate_decomposition(g, td, vertices)
        if not rep.ok:
            raise ValueError(f"invalid tree decomposition: {rep.summary()}")
    touching: dict[int, list[int]] = {}
    for j, m in enumerate(fam.members):
        for v in m:
            touching.setdefault(v, []).append(j)
    bags = []
    for bag in td.bags:
        js: set[int] = set()
        for v in bag:
            js.update(touching.get(v, ()))
        bags.append(tuple(sorted(js)))
    return TreeDecomposition(tuple(bags), td.tree_edges)


def _state_cap(bag_size: int, k: int) -> int:
    return sum(math.comb(bag_size, i) for i in range(min(k, bag_size) + 1))


def _run_dp(
    cmasks: Sequence[int],
    weights: Sequence[Fraction],
    td: TreeDecomposition,
    *,
    k_bound: int | None = None,
) -> tuple[Fraction, int]:
    """Maximum weight independent set of the graph given by ``cmasks`` over ``td``.

    Returns ``(weight, chosen_bitset)``. When ``k_bound`` is given every table is
    checked against the independent-subset count bound for that ``k``.
    """
    scale = 1
    for w in weights:
        scale = scale * w.denominator // math.gcd(scale, w.denominator)
    wi = [int(w * scale) for w in weights]

    nice = make_nice(td)
    tables: list[dict[int, tuple[int, int]] | None] = [None] * nice.num_nodes
    for t in range(nice.num_nodes):
        kind = nice.kinds[t]
        ch = nice.children[t]
        if kind == "leaf":
            table = {0: (0, 0)}
        elif kind == "introduce":
            j = nice.vertex[t]
            bit = 1 << j
            src = tables[ch[0]]
            table = dict(src)
            cj = cmasks[j]
            for s, (w, c) in src.items():
                if not s & cj:
                    table[s | bit] = (w + wi[j], c | bit)
        elif kind == "forget":
            bit = 1 << nice.vertex[t]
            table = {}
            for s, val in tables[ch[0]].items():
                key = s & ~bit
                cur = table.get(key)
                if cur is None or val[0] > cur[0] or (val[0] == cur[0] and prefer(val[1], cur[1])):
                    table[key] = val
        else:  # join
            left, right = tables[ch[0]], tables[ch[1]]
            table = {}
            for s, (w1, c1) in left.items():
                other = right.get(s)
                if other is None:
                    continue
                w2, c2 = other
                table[s] = (w1 + w2 - sum(wi[j] for j in iter_bits(s)), c1 | c2)
        for c in ch:
            tables[c] = None
        if k_bound is not None:
            cap = _state_cap(len(nice.bags[t]), k_bound)
            assert len(table) <= cap, (
                f"DP table at node {t} has {len(table)} states, bound is {cap}"
            )
        tables[t] = table

    root = tables[nice.root]
    best_w, best_c = None, 0
    for w, c in root.values():
        if best_w is None or w > best_w or (w == best_w and prefer(c, best_c)):
            best_w, best_c = w, c
    return Fraction(best_w, scale), best_c


def solve_packing(
    inst: PackingInstance, td: TreeDecomposition, *, debug: bool = False
) -> PackingSolution:
    """Exact maximum-weight independent packing.

    ``td`` must cover every member vertex and every host edge between member
    vertices (a decomposition of the host or of an induced subgraph containing
    the family). With ``debug`` the DP state counts are checked against the
    bound implied by the lifted decomposition's independence number.
    """
    t0 = time.perf_counter()
    fam = inst.family
    if len(fam) == 0:
        return PackingSolution((), Fraction(0), True, 0)
    cg = conflict_graph(inst.host, fam)
    lifted = lift_decomposition(inst.host, fam, td, check=False)
    rep = validate_decomposition(cg, lifted)
    if not rep.ok:
        raise ValueError(f"decomposition does not cover the family: {rep.summary()}")
    k = independence_number(cg, lifted, check=False) if debug else None
    weight, chosen_bits = _run_dp(cg.masks, inst.weights, lifted, k_bound=k)
    chosen = tuple(iter_bits(chosen_bits))
    ok = verify_packing(inst.host, fam, chosen) and sum(
        (inst.weights[j] for j in chosen), Fraction(0)
    ) == weight
    ms = int((time.perf_counter() - t0) * 1000)
    return PackingSolution(chosen, weight, ok, ms)


def solve_mwis(
    g: Graph, weights: Iterable, td: TreeDecomposition, *, vertices=None, debug: bool = False
) -> PackingSolution:
    """Maximum-weight independent set of ``g`` (or ``g[vertices]``) using ``td``.

    Vertices outside ``vertices`` are treated as absent.
    """
    t0 = time.perf_counter()
    w = as_weights(weights, g.n)
    rep = validate_decomposition(g, td, vertices)
    if not rep.ok:
        raise ValueError(f"invalid tree decomposition: {rep.summary()}")
    if vertices is not None:
        keep = 0
        for v in vertices:
            keep |= 1 << v
        masks = [m & keep for m in g.masks]
    else:
        masks = list(g.masks)
    k = independence_number(g, td, check=False) if debug else None
    weight, chosen_bits = _run_dp(masks, w, td, k_bound=k)
    chosen = tuple(iter_bits(chosen_bits))
    ok = verify_packing(g, singleton_family(g.n), chosen)
    return PackingSolution(chosen, weight, ok, int((time.perf_counter() - t0) * 1000))
