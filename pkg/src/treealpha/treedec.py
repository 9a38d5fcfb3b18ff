"""Tree decompositions, layerings and their measured quality."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph, independence_number_of

__all__ = [
    "TreeDecomposition",
    "Layering",
    "NiceDecomposition",
    "ValidationReport",
    "make_decomposition",
    "path_decomposition",
    "trivial_decomposition",
    "make_layering",
    "layering_violations",
    "validate_decomposition",
    "independence_number",
    "layered_independence_number",
    "make_nice",
    "merge_components",
    "restrict_decomposition",
]


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by tree node id ``0..len(bags)-1`` plus the tree's edge list."""

    bags: tuple[tuple[int, ...], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def num_nodes(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for s, t in self.tree_edges:
            adj[s].append(t)
            adj[t].append(s)
        return adj

    @property
    def is_path(self) -> bool:
        return all(len(a) <= 2 for a in self.tree_adjacency())

    def vertices(self) -> set[int]:
        out: set[int] = set()
        for b in self.bags:
            out.update(b)
        return out


def make_decomposition(bags: Iterable[Iterable[int]], tree_edges: Iterable[Sequence[int]]) -> TreeDecomposition:
    return TreeDecomposition(
        tuple(tuple(sorted(set(b))) for b in bags),
        tuple((int(s), int(t)) for s, t in tree_edges),
    )


def path_decomposition(bags: Sequence[Iterable[int]]) -> TreeDecomposition:
    return make_decomposition(bags, [(i, i + 1) for i in range(len(bags) - 1)])


def trivial_decomposition(g: Graph) -> TreeDecomposition:
    return make_decomposition([range(g.n)], [])


# --------------------------------------------------------------------------
# layerings


@dataclass(frozen=True)
class Layering:
    """Layer index per vertex, normalised to ``0..num_layers-1`` without gaps."""

    layers: tuple[int, ...]

    @property
    def num_layers(self) -> int:
        return max(self.layers, default=-1) + 1

    def layer_sets(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_layers)]
        for v, i in enumerate(self.layers):
            out[i].append(v)
        return out


def make_layering(assignment: Sequence[int]) -> Layering:
    """Relabel arbitrary integer layer indices to consecutive 0-based ones, keeping order."""
    distinct = sorted(set(assignment))
    rank = {x: i for i, x in enumerate(distinct)}
    return Layering(tuple(rank[x] for x in assignment))


def layering_violations(g: Graph, lay: Layering) -> list[tuple[int, int]]:
    if len(lay.layers) != g.n:
        raise ValueError("layering length does not match the graph")
    return [(u, v) for u, v in g.edges() if abs(lay.layers[u] - lay.layers[v]) > 1]


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    """Violations of the decomposition axioms; empty lists mean valid."""

    not_a_tree: list[str] = field(default_factory=list)
    foreign: list[int] = field(default_factory=list)
    missing_vertices: list[int] = field(default_factory=list)
    uncovered_edges: list[tuple[int, int]] = field(default_factory=list)
    disconnected: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.not_a_tree or self.foreign or self.missing_vertices
            or self.uncovered_edges or self.disconnected
        )

    def summary(self) -> str:
        if self.ok:
            return "valid"
        parts = []
        if self.not_a_tree:
            parts.append("tree: " + "; ".join(self.not_a_tree))
        if self.foreign:
            parts.append(f"bags hold vertices outside the graph: {self.foreign[:5]}")
        if self.missing_vertices:
            parts.append(f"(T1) vertices in no bag: {self.missing_vertices[:5]}")
        if self.uncovered_edges:
            parts.append(f"(T2) edges in no bag: {self.uncovered_edges[:5]}")
        if self.disconnected:
            parts.append(f"(T3) disconnected traces: {[v for v, _ in self.disconnected[:5]]}")
        return " | ".join(parts)


def _tree_problems(td: TreeDecomposition) -> list[str]:
    k = td.num_nodes
    if k == 0:
        return ["no nodes"]
    probs = []
    for s, t in td.tree_edges:
        if not (0 <= s < k and 0 <= t < k) or s == t:
            probs.append(f"bad tree edge ({s}, {t})")
    if probs:
        return probs
    if len(set(map(frozenset, td.tree_edges))) != len(td.tree_edges):
        probs.append("repeated tree edge")
    if len(td.tree_edges) != k - 1:
        probs.append(f"{len(td.tree_edges)} edges for {k} nodes")
    adj = td.tree_adjacency()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != k:
        probs.append("tree is disconnected")
    return probs


def validate_decomposition(
    g: Graph, td: TreeDecomposition, vertices: Iterable[int] | None = None
) -> ValidationReport:
    """Check (T1)-(T3) against ``g`` or against the induced subgraph ``g[vertices]``."""
    rep = ValidationReport()
    rep.not_a_tree = _tree_problems(td)
    allowed = set(range(g.n)) if vertices is None else set(vertices)
    occurs: dict[int, list[int]] = defaultdict(list)
    for t, bag in enumerate(td.bags):
        for v in bag:
            if v in allowed:
                occurs[v].append(t)
            elif v not in rep.foreign:
                rep.foreign.append(v)
    rep.missing_vertices = sorted(v for v in allowed if v not in occurs)
    bag_sets = [set(b) for b in td.bags]
    by_vertex = {v: set(ts) for v, ts in occurs.items()}
    for u, v in g.edges():
        if u in allowed and v in allowed:
            tu, tv = by_vertex.get(u, set()), by_vertex.get(v, set())
            if not (tu & tv):
                rep.uncovered_edges.append((u, v))
    if not rep.not_a_tree:
        inner = defaultdict(int)
        for s, t in td.tree_edges:
            for v in bag_sets[s] & bag_sets[t]:
                inner[v] += 1
        for v, ts in sorted(occurs.items()):
            if inner[v] != len(ts) - 1:
                rep.disconnected.append((v, tuple(ts)))
    return rep


def _require_valid(g: Graph, td: TreeDecomposition, vertices=None) -> None:
    rep = validate_decomposition(g, td, vertices)
    if not rep.ok:
        raise ValueError(f"invalid tree decomposition: {rep.summary()}")


def independence_number(g: Graph, td: TreeDecomposition, *, check: bool = True, vertices=None) -> int:
    """Largest independence number of a bag-induced subgraph."""
    if check:
        _require_valid(g, td, vertices)
    cache: dict[tuple[int, ...], int] = {}
    best = 0
    for bag in td.bags:
        if bag not in cache:
            cache[bag] = independence_number_of(g, bag)
        best = max(best, cache[bag])
    return best


def layered_independence_number(
    g: Graph, td: TreeDecomposition, lay: Layering, *, check: bool = True
) -> int:
    """Largest independence number over all (bag, layer) cells."""
    bad = layering_violations(g, lay)
    if bad:
        raise ValueError(f"invalid layering: edges {bad[:5]} span two or more layers")
    if check:
        _require_valid(g, td)
    cache: dict[tuple[int, ...], int] = {}
    best = 0
    for bag in td.bags:
        cells: dict[int, list[int]] = defaultdict(list)
        for v in bag:
            cells[lay.layers[v]].append(v)
        for cell in cells.values():
            key = tuple(cell)
            if key not in cache:
                cache[key] = independence_number_of(g, key)
            best = max(best, cache[key])
    return best


# --------------------------------------------------------------------------
# nice decompositions


@dataclass(frozen=True)
class NiceDecomposition:
    """Rooted decomposition with leaf / introduce / forget / join nodes.

    Leaves have empty bags; ``vertex[t]`` is the introduced or forgotten vertex.
    Children always precede their parent in node order, so a forward scan is a
    valid bottom-up schedule.
    """

    kinds: tuple[str, ...]
    vertex: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    bags: tuple[tuple[int, ...], ...]
    root: int

    @property
    def num_nodes(self) -> int:
        return len(self.kinds)

    def to_tree_decomposition(self) -> TreeDecomposition:
        edges = [(t, c) for t, cs in enumerate(self.children) for c in cs]
        return TreeDecomposition(self.bags, tuple(edges))


def make_nice(td: TreeDecomposition, root: int = 0) -> NiceDecomposition:
    """Convert a (valid) decomposition to nice form rooted at ``root``."""
    kinds: list[str] = []
    vertex: list[int] = []
    children: list[tuple[int, ...]] = []
    bags: list[tuple[int, ...]] = []

    def add(kind: str, v: int, ch: tuple[int, ...], bag: frozenset) -> int:
        kinds.append(kind)
        vertex.append(v)
        children.append(ch)
        bags.append(tuple(sorted(bag)))
        return len(kinds) - 1

    def morph(node: int, cur: frozenset, target: frozenset) -> int:
        for v in sorted(cur - target):
            cur = cur - {v}
            node = add("forget", v, (node,), cur)
        for v in sorted(target - cur):
            cur = cur | {v}
            node = add("introduce", v, (node,), cur)
        return node

    adj = td.tree_adjacency()
    parent = {root: -1}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    kids: dict[int, list[int]] = defaultdict(list)
    for u in order[1:]:
        kids[parent[u]].append(u)

    top: dict[int, int] = {}
    for t in reversed(order):
        target = frozenset(td.bags[t])
        if not kids[t]:
            leaf = add("leaf", -1, (), frozenset())
            top[t] = morph(leaf, frozenset(), target)
            continue
        branches = [morph(top[c], frozenset(td.bags[c]), target) for c in kids[t]]
        node = branches[0]
        for b in branches[1:]:
            node = add("join", -1, (node, b), target)
        top[t] = node
    return NiceDecomposition(tuple(kinds), tuple(vertex), tuple(children), tuple(bags), top[root])


# --------------------------------------------------------------------------
# surgery


def merge_components(
    parts: Sequence[tuple[Iterable[int], TreeDecomposition]]
) -> TreeDecomposition:
    """Glue decompositions of vertex-disjoint parts under a fresh empty-bag node 0."""
    seen: set[int] = set()
    bags: list[tuple[int, ...]] = [()]
    edges: list[tuple[int, int]] = []
    for verts, td in parts:
        vs = set(verts)
        if vs & seen:
            raise ValueError(f"parts overlap on vertices {sorted(vs & seen)[:5]}")
        seen |= vs
        off = len(bags)
        bags.extend(td.bags)
        edges.extend((s + off, t + off) for s, t in td.tree_edges)
        edges.append((0, off))
    return TreeDecomposition(tuple(bags), tuple(edges))


def restrict_decomposition(td: TreeDecomposition, vertices: Iterable[int]) -> TreeDecomposition:
    """Intersect every bag with ``vertices`` and trim empty-bag leaves.

    At least one node always survives.
    """
    keep = set(vertices)
    bags = [tuple(v for v in b if v in keep) for b in td.bags]
    adj = [set(a) for a in td.tree_adjacency()]
    alive = set(range(len(bags)))
    stack = [t for t in alive if not bags[t] and len(adj[t]) <= 1]
    while stack and len(alive) > 1:
        t = stack.pop()
        if t not in alive or bags[t] or len(adj[t]) > 1:
            continue
        alive.discard(t)
        for w in adj[t]:
            adj[w].discard(t)
            if not bags[w] and len(adj[w]) <= 1:
                stack.append(w)
        adj[t].clear()
    order = sorted(alive)
    new_id = {t: i for i, t in enumerate(order)}
    new_edges = [
        (new_id[s], new_id[t]) for s, t in td.tree_edges if s in alive and t in alive
    ]
    return TreeDecomposition(tuple(bags[t] for t in order), tuple(new_edges))
