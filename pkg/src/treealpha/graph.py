"""Vertex-weighted simple graphs, powers, conflict graphs and exact oracles.

Vertices are dense integers ``0..n-1``. Most set manipulation is done on
Python ints used as bitsets (bit ``v`` set means vertex ``v`` is present),
which keeps the exhaustive oracles usable up to a few dozen vertices.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Graph",
    "SubgraphFamily",
    "PackingSolution",
    "build_graph",
    "graph_power",
    "conflict_graph",
    "make_family",
    "singleton_family",
    "enumerate_family",
    "verify_power_identity",
    "brute_force_packing",
    "verify_packing",
    "verify_distance_packing",
    "max_independent_set",
    "independence_number_of",
    "connected_components",
    "bfs_distances",
    "as_weights",
    "prefer",
    "iter_bits",
]


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with sorted neighbour lists."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(_mask_of(nb) for nb in self.adj)

    @cached_property
    def _adj_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(nb) for nb in self.adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adj) // 2

    def induced_edges(self, vertices: Iterable[int]) -> list[tuple[int, int]]:
        keep = set(vertices)
        return [(u, v) for u, v in self.edges() if u in keep and v in keep]

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        return cls(len(masks), tuple(tuple(iter_bits(m)) for m in masks))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph on ``n`` vertices; duplicate edges are merged."""
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))


def as_weights(values: Iterable, length: int | None = None) -> tuple[Fraction, ...]:
    """Coerce ints, Fractions or ``"p/q"`` strings to a tuple of non-negative Fractions."""
    out = tuple(Fraction(v) for v in values)
    if length is not None and len(out) != length:
        raise ValueError(f"expected {length} weights, got {len(out)}")
    for w in out:
        if w < 0:
            raise ValueError("weights must be non-negative")
    return out


def bfs_distances(g: Graph, sources: Iterable[int], limit: int | None = None) -> dict[int, int]:
    """Multi-source BFS; vertices farther than ``limit`` are omitted."""
    dist: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def connected_components(g: Graph, vertices: Iterable[int] | None = None) -> list[list[int]]:
    """Components of ``g`` (or of the subgraph induced by ``vertices``), each sorted,
    ordered by smallest vertex."""
    allowed = set(range(g.n)) if vertices is None else set(vertices)
    seen: set[int] = set()
    comps = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def graph_power(g: Graph, p: int) -> Graph:
    """``G^p``: join every pair at distance between 1 and ``p``."""
    if p < 1:
        raise ValueError("power must be a positive integer")
    if p == 1:
        return g
    adj = []
    for v in range(g.n):
        ball = bfs_distances(g, [v], limit=p)
        adj.append(tuple(sorted(u for u in ball if u != v)))
    return Graph(g.n, tuple(adj))


# --------------------------------------------------------------------------
# subgraph families


@dataclass(frozen=True)
class SubgraphFamily:
    """Vertex sets of connected subgraphs of a host graph (one member per index)."""

    members: tuple[tuple[int, ...], ...]

    @property
    def h_max(self) -> int:
        return max((len(m) for m in self.members), default=0)

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(_mask_of(m) for m in self.members)

    def restrict(self, vertices: Iterable[int]) -> tuple["SubgraphFamily", list[int]]:
        """Members fully inside ``vertices`` plus their original indices."""
        keep = _mask_of(vertices)
        idx = [j for j, m in enumerate(self.masks) if m & ~keep == 0]
        return SubgraphFamily(tuple(self.members[j] for j in idx)), idx


def _is_connected(g: Graph, vertices: Sequence[int]) -> bool:
    if not vertices:
        return False
    return len(connected_components(g, vertices)) == 1


def make_family(g: Graph, members: Iterable[Iterable[int]]) -> SubgraphFamily:
    """Validate and normalise a family; every member must be non-empty and connected in ``g``."""
    out = []
    for raw in members:
        m = tuple(sorted(set(int(v) for v in raw)))
        if not m:
            raise ValueError("family members must be non-empty")
        if m[0] < 0 or m[-1] >= g.n:
            raise ValueError(f"member {m} references a vertex outside the host")
        if not _is_connected(g, m):
            raise ValueError(f"member {m} is not connected in the host graph")
        out.append(m)
    return SubgraphFamily(tuple(out))


def singleton_family(n: int) -> SubgraphFamily:
    return SubgraphFamily(tuple((v,) for v in range(n)))


def conflict_graph(g: Graph, fam: SubgraphFamily) -> Graph:
    """Graph on member indices; adjacent when members share a vertex or an edge joins them."""
    for m in fam.members:
        if not _is_connected(g, m):
            raise ValueError(f"member {m} is not connected in the host graph")
    gm = g.masks
    closed = []
    for m in fam.members:
        c = 0
        for v in m:
            c |= gm[v] | (1 << v)
        closed.append(c)
    fm = fam.masks
    k = len(fm)
    masks = [0] * k
    for i in range(k):
        ci = closed[i]
        for j in range(i + 1, k):
            if ci & fm[j]:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return Graph.from_masks(masks)


def verify_power_identity(g: Graph, k: int, d: int) -> bool:
    """Check that ``G^(k+2d)`` equals ``G^k`` of the family of radius-``d`` balls."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    gk = graph_power(g, k)
    balls = SubgraphFamily(
        tuple(tuple(sorted(bfs_distances(g, [v], limit=d))) for v in range(g.n))
    )
    lhs = graph_power(g, k + 2 * d)
    rhs = conflict_graph(gk, balls)
    return lhs.adj == rhs.adj


DEFAULT_H_CAP = 3


def _contains_template(g: Graph, subset: Sequence[int], template: Graph) -> bool:
    tedges = template.edges()
    for perm in itertools.permutations(subset):
        if all(g.has_edge(perm[a], perm[b]) for a, b in tedges):
            return True
    return False


def enumerate_family(
    g: Graph, templates: Sequence[Graph], h: int, *, h_cap: int = DEFAULT_H_CAP
) -> SubgraphFamily:
    """All vertex sets of size <= h whose induced subgraph has a spanning copy of a template.

    Members are ordered by size, then lexicographically.
    """
    if h > h_cap:
        raise ValueError(f"h={h} exceeds the enumeration cap {h_cap}")
    for t in templates:
        if t.n > h:
            raise ValueError(f"template on {t.n} vertices is larger than h={h}")
        if t.n == 0 or len(connected_components(t)) != 1:
            raise ValueError("templates must be connected and non-null")
    sizes = sorted({t.n for t in templates})
    members = []
    for s in sizes:
        ts = [t for t in templates if t.n == s]
        for subset in itertools.combinations(range(g.n), s):
            if any(_contains_template(g, subset, t) for t in ts):
                members.append(subset)
    return SubgraphFamily(tuple(members))


# --------------------------------------------------------------------------
# independent sets


def _clique_cover_size(masks: Sequence[int], cand: int) -> int:
    count = 0
    rest = cand
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        clique = low
        pool = rest & masks[v]
        while pool:
            lw = pool & -pool
            clique |= lw
            pool &= masks[lw.bit_length() - 1]
        rest &= ~clique
        count += 1
    return count


def _mis_bitset(masks: Sequence[int], cand: int) -> int:
    """Maximum independent set (as a bitset) inside ``cand`` by branch and bound."""
    best = [0, 0]  # size, set

    def rec(cand: int, size: int, chosen: int) -> None:
        if cand == 0:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + cand.bit_count() <= best[0]:
            return
        if size + _clique_cover_size(masks, cand) <= best[0]:
            return
        lo_v, lo_deg, hi_v, hi_deg = -1, 1 << 30, -1, -1
        for v in iter_bits(cand):
            dv = (masks[v] & cand).bit_count()
            if dv < lo_deg:
                lo_v, lo_deg = v, dv
            if dv > hi_deg:
                hi_v, hi_deg = v, dv
        if lo_deg <= 1:
            # a vertex of degree <= 1 always lies in some maximum independent set
            rec(cand & ~(masks[lo_v] | (1 << lo_v)), size + 1, chosen | (1 << lo_v))
            return
        v = hi_v
        rec(cand & ~(masks[v] | (1 << v)), size + 1, chosen | (1 << v))
        rec(cand & ~(1 << v), size, chosen)

    rec(cand, 0, 0)
    return best[1]


def max_independent_set(g: Graph, vertices: Iterable[int] | None = None) -> list[int]:
    """A maximum independent set of ``g`` (or of ``g[vertices]``)."""
    cand = (1 << g.n) - 1 if vertices is None else _mask_of(vertices)
    return list(iter_bits(_mis_bitset(g.masks, cand)))


def independence_number_of(g: Graph, vertices: Iterable[int] | None = None) -> int:
    return len(max_independent_set(g, vertices))


# --------------------------------------------------------------------------
# packings


@dataclass(frozen=True)
class PackingSolution:
    """Chosen member indices, their total weight and the feasibility verdict."""

    chosen: tuple[int, ...]
    weight: Fraction
    verified: bool = False
    elapsed_ms: int = field(default=0, compare=False)


def verify_packing(g: Graph, fam: SubgraphFamily, chosen: Iterable[int]) -> bool:
    """True iff the chosen members are pairwise vertex-disjoint with no host edge between them.

    Works from the host adjacency directly; deliberately independent of the conflict graph.
    """
    owner: dict[int, int] = {}
    chosen = list(chosen)
    if len(set(chosen)) != len(chosen):
        return False
    for j in chosen:
        if not 0 <= j < len(fam.members):
            return False
        for v in fam.members[j]:
            if v in owner:
                return False
            owner[v] = j
    for v, j in owner.items():
        for w in g.adj[v]:
            if w in owner and owner[w] != j:
                return False
    return True


def verify_distance_packing(g: Graph, fam: SubgraphFamily, chosen: Iterable[int], d: int) -> bool:
    """True iff every two chosen members are at distance at least ``d`` in ``g``."""
    chosen = list(chosen)
    if len(set(chosen)) != len(chosen):
        return False
    for a, i in enumerate(chosen):
        dist = bfs_distances(g, fam.members[i], limit=d - 1)
        for j in chosen[a + 1:]:
            if any(v in dist for v in fam.members[j]):
                return False
    return True


BRUTE_FORCE_LIMIT = 25


def prefer(a: int, b: int) -> bool:
    """Tie-break between two chosen-index bitsets of equal weight.

    The set containing the smallest index on which they differ wins. The rule is
    a total order and is unchanged by adding the same disjoint members to both
    sides, so piecewise optimal choices compose.
    """
    diff = a ^ b
    return bool(diff & -diff & a)


def brute_force_packing(
    g: Graph,
    fam: SubgraphFamily,
    weights: Sequence,
    *,
    allow_large: bool = False,
) -> PackingSolution:
    """Exact maximum-weight independent packing by exhaustive search.

    The search enumerates independent subfamilies of the conflict graph; it splits
    the candidate set into connected pieces and memoises on the remaining candidates,
    so the whole space is covered without listing it twice. Ties are broken by
    :func:`prefer`.
    Families larger than ``BRUTE_FORCE_LIMIT`` need ``allow_large=True``.
    """
    w = as_weights(weights, len(fam))
    if len(fam) > BRUTE_FORCE_LIMIT and not allow_large:
        raise ValueError(
            f"family has {len(fam)} members; exhaustive search is limited to "
            f"{BRUTE_FORCE_LIMIT} unless allow_large=True"
        )
    cg = conflict_graph(g, fam)
    masks = cg.masks
    memo: dict[int, tuple[Fraction, int]] = {0: (Fraction(0), 0)}

    def component_of(cand: int) -> int:
        low = cand & -cand
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= masks[v]
            nxt &= cand & ~comp
            comp |= nxt
            frontier = nxt
        return comp

    def solve(cand: int) -> tuple[Fraction, int]:
        hit = memo.get(cand)
        if hit is not None:
            return hit
        comp = component_of(cand)
        if comp != cand:
            w1, s1 = solve(comp)
            w2, s2 = solve(cand & ~comp)
            res = (w1 + w2, s1 | s2)
        else:
            v, deg = -1, -1
            for u in iter_bits(cand):
                du = (masks[u] & cand).bit_count()
                if du > deg:
                    v, deg = u, du
            if deg == 0:
                # a single member with no conflicts left
                res = (w[v], 1 << v)
            else:
                wi, si = solve(cand & ~(masks[v] | (1 << v)))
                inc = (wi + w[v], si | (1 << v))
                exc = solve(cand & ~(1 << v))
                if inc[0] > exc[0] or (inc[0] == exc[0] and prefer(inc[1], exc[1])):
                    res = inc
                else:
                    res = exc
        memo[cand] = res
        return res

    weight, bits = solve((1 << len(fam)) - 1)
    chosen = tuple(iter_bits(bits))
    return PackingSolution(chosen, weight, verify_packing(g, fam, chosen))
