"""Shared helpers. The oracles here share no code with the library."""
from __future__ import annotations

import itertools
import os
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings

from treealpha import build_graph, make_decomposition

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_graph(rng: random.Random, n: int, p: float):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return build_graph(n, edges)


def random_decomposition(g, rng: random.Random, pad: float = 0.0):
    """Tree decomposition from a random elimination order.

    With ``pad > 0`` bags are grown along tree edges and extra leaves holding
    random subsets of existing bags are attached; both keep T1-T3.
    """
    order = list(range(g.n))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    nb = {v: set(g.neighbors(v)) for v in range(g.n)}
    bags, parent_of = {}, {}
    for v in order:
        later = {u for u in nb[v] if pos[u] > pos[v]}
        bags[v] = {v} | later
        for a in later:
            nb[a] |= later - {a}
        if later:
            parent_of[v] = min(later, key=pos.get)
    if not order:
        return make_decomposition([[]], [])
    idx = {v: i for i, v in enumerate(order)}
    edges = [(idx[v], idx[p]) for v, p in parent_of.items()]
    roots = [v for v in order if v not in parent_of]
    edges += [(idx[a], idx[b]) for a, b in zip(roots, roots[1:])]
    blist = [set(bags[v]) for v in order]
    if pad:
        for a, b in list(edges):
            for v in list(blist[a]):
                if rng.random() < pad:
                    blist[b].add(v)
        for _ in range(int(pad * len(blist)) + 1):
            host = rng.randrange(len(blist))
            sub = {v for v in blist[host] if rng.random() < 0.5}
            blist.append(sub)
            edges.append((host, len(blist) - 1))
    return make_decomposition([sorted(b) for b in blist], edges)


def nx_graph(g) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def oracle_alpha(g, vertices=None) -> int:
    vs = list(range(g.n)) if vertices is None else list(vertices)
    if not vs:
        return 0
    comp = nx.complement(nx_graph(g).subgraph(vs))
    return max(len(c) for c in nx.find_cliques(comp))


def oracle_valid(g, td) -> bool:
    """T1-T3 checked with networkx only."""
    t = nx.Graph()
    t.add_nodes_from(range(len(td.bags)))
    t.add_edges_from(td.tree_edges)
    if not nx.is_tree(t):
        return False
    bags = [set(b) for b in td.bags]
    if set().union(*bags) != set(range(g.n)):
        return False
    for u, v in g.edges():
        if not any(u in b and v in b for b in bags):
            return False
    for v in range(g.n):
        nodes = [i for i, b in enumerate(bags) if v in b]
        if not nx.is_connected(t.subgraph(nodes)):
            return False
    return True


def oracle_packing(g, members, weights, d: int = 2) -> Fraction:
    """Exhaustive optimum over subfamilies at pairwise host distance >= d.

    ``d = 2`` is the independent packing (disjoint, no joining edge).
    """
    sp = dict(nx.all_pairs_shortest_path_length(nx_graph(g)))
    inf = g.n + 1
    m = len(members)
    ok = [
        [all(sp[x].get(y, inf) >= d for x in members[i] for y in members[j]) for j in range(m)]
        for i in range(m)
    ]
    best = Fraction(0)

    def go(i: int, picked: list[int], total: Fraction) -> None:
        nonlocal best
        if i == m:
            best = max(best, total)
            return
        if all(ok[i][j] for j in picked) and all(x != y for j in picked for x in members[i] for y in members[j]):
            picked.append(i)
            go(i + 1, picked, total + weights[i])
            picked.pop()
        go(i + 1, picked, total)

    go(0, [], Fraction(0))
    return best


@pytest.fixture
def rng():
    return random.Random(12345)
