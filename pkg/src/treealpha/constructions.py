"""Constructive decompositions and covers for geometric intersection graphs.

Every function returns plain :class:`TreeDecomposition` / :class:`Layering`
objects over the instance's vertex ids (object indices), so the output can be
checked with :func:`treealpha.treedec.validate_decomposition` directly.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import (
    Ball,
    Box,
    FatnessProfile,
    GeometricInstance,
    GridPath,
    intersection_graph,
    meets_box,
    projection,
    object_size,
    rescale_to_unit,
)
from .graph import Graph, bfs_distances, connected_components, graph_power
from .treedec import (
    Layering,
    TreeDecomposition,
    make_decomposition,
    make_layering,
    merge_components,
    path_decomposition,
    restrict_decomposition,
    validate_decomposition,
    layering_violations,
)

__all__ = [
    "GeneralCover",
    "RankedGridSystem",
    "unit_disk_layered_decomposition",
    "grid_path_layered_decomposition",
    "grid_layered_bound",
    "narrow_strip_decomposition",
    "narrow_strip_bound",
    "power_decomposition",
    "cover_from_layering",
    "fat_cover_ratio",
    "fat_cover",
]


def _floor(q: Fraction) -> int:
    return math.floor(q)


def _ceil(q: Fraction) -> int:
    return math.ceil(q)


# --------------------------------------------------------------------------
# covers


@dataclass(frozen=True)
class GeneralCover:
    """Multiset of vertex sets, each with a decomposition of its induced subgraph.

    ``bound`` is the independence-number bound the construction promises for
    every element decomposition (``None`` when no bound is claimed).
    """

    elements: tuple[tuple[int, ...], ...]
    decomps: tuple[TreeDecomposition, ...]
    beta: Fraction
    bound: int | None = None
    info: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def coverage_counts(self, n: int) -> list[int]:
        counts = [0] * n
        for el in self.elements:
            for v in el:
                counts[v] += 1
        return counts

    def min_coverage(self, n: int) -> Fraction:
        """Smallest fraction of elements containing a single vertex."""
        if not self.elements or n == 0:
            return Fraction(0)
        return Fraction(min(self.coverage_counts(n)), len(self.elements))

    def problems(self, g: Graph) -> list[str]:
        """Every coverage or decomposition defect, as readable strings."""
        out = []
        if len(self.elements) != len(self.decomps):
            out.append("element and decomposition counts differ")
        counts = self.coverage_counts(g.n)
        need = self.beta * len(self.elements)
        low = [v for v, c in enumerate(counts) if c < need]
        if low:
            out.append(f"vertices {low[:5]} lie in fewer than {need} elements")
        for idx, (el, td) in enumerate(zip(self.elements, self.decomps)):
            rep = validate_decomposition(g, td, el)
            if not rep.ok:
                out.append(f"element {idx}: {rep.summary()}")
        return out


# --------------------------------------------------------------------------
# unit disks


def unit_disk_layered_decomposition(inst: GeometricInstance) -> tuple[TreeDecomposition, Layering]:
    """Path decomposition from vertical strips one diameter wide, plus a layering
    from horizontal strips of the same width (layer = strip holding the centre).

    Every (bag, layer) cell has independence number at most 8.
    """
    if inst.kind != "unit_disks":
        raise ValueError(f"expected unit_disks, got {inst.kind}")
    if not inst.objects:
        raise ValueError("empty instance")
    c = inst.radius
    diam = 2 * c
    strips: dict[int, list[int]] = {}
    for v, o in enumerate(inst.objects):
        x = o.center[0]
        for i in range(_ceil((x - c) / diam), _floor((x + c) / diam) + 2):
            strips.setdefault(i, []).append(v)
    bags: list[list[int]] = []
    for i in sorted(strips):
        if not bags or bags[-1] != strips[i]:
            bags.append(strips[i])
    td = path_decomposition(bags)
    lay = make_layering([_ceil(o.center[1] / diam) for o in inst.objects])
    return td, lay


# --------------------------------------------------------------------------
# grid paths and rectangles: rows of contact points


def _check_gridlike(inst: GeometricInstance) -> None:
    if inst.kind == "grid_paths":
        return
    if inst.kind == "rectangles":
        return
    raise ValueError(f"expected grid_paths or rectangles, got {inst.kind}")


def _x_range(o) -> tuple[int, int]:
    a, b = projection(o, 0)
    return int(a), int(b)


def _first_point(o) -> tuple[int, int]:
    if isinstance(o, GridPath):
        return min(o.grid_points)
    return int(o.lo[0]), int(o.lo[1])


def _edge_height(e) -> Fraction:
    """Height of a grid-edge's midpoint: ``y`` if horizontal, ``y + 1/2`` if vertical."""
    (x1, y1), (x2, y2) = e
    return Fraction(y1) if y1 == y2 else Fraction(min(y1, y2)) + Fraction(1, 2)


def _contact_value(a, b, mode: str | None) -> Fraction | None:
    """Row of the contact between two objects, or ``None`` if they do not meet.

    Under vertex contact this is the row of the lexicographically smallest
    shared grid-point. Under edge contact it is the midpoint height of the
    smallest shared grid-edge, so vertical contacts sit on half-integral rows.
    """
    if isinstance(a, GridPath):
        if mode == "e":
            common = a.grid_edges & b.grid_edges
            return _edge_height(min(common)) if common else None
        common = a.grid_points & b.grid_points
        return Fraction(min(common)[1]) if common else None
    lo = [max(p, q) for p, q in zip(a.lo, b.lo)]
    hi = [min(p, q) for p, q in zip(a.hi, b.hi)]
    if any(x > y for x, y in zip(lo, hi)):
        return None
    return Fraction(lo[1])


def _own_value(o, mode: str | None) -> Fraction:
    if isinstance(o, GridPath) and mode == "e":
        return _edge_height(min(o.grid_edges))
    return Fraction(_first_point(o)[1])


def _contact_rows(inst: GeometricInstance, g: Graph) -> TreeDecomposition:
    rows_of: list[list[Fraction]] = [[] for _ in range(inst.n)]
    for u, v in g.edges():
        y = _contact_value(inst.objects[u], inst.objects[v], inst.mode)
        rows_of[u].append(y)
        rows_of[v].append(y)
    for v, rows in enumerate(rows_of):
        if not rows:
            rows.append(_own_value(inst.objects[v], inst.mode))
    rows = sorted({y for rs in rows_of for y in rs})
    pos = {y: i for i, y in enumerate(rows)}
    bags: list[list[int]] = [[] for _ in rows]
    for v, rs in enumerate(rows_of):
        for i in range(pos[min(rs)], pos[max(rs)] + 1):
            bags[i].append(v)
    return path_decomposition(bags)


def _layer_width(inst: GeometricInstance, ell: int) -> int:
    if inst.kind == "grid_paths" and inst.mode == "e":
        return max(ell - 1, 1)
    return 2 * ell


def grid_layered_bound(inst: GeometricInstance, ell: int) -> int:
    """Cell bound ``4*ell - 1`` of :func:`grid_path_layered_decomposition`.

    Under vertex contact every path of a cell meets the cell's row inside a
    window of ``4*ell - 1`` columns, and independent paths use distinct
    grid-points there. Under edge contact the layers are ``max(ell-1, 1)``
    columns wide, so a layer spans ``C = max(2*ell - 2, 1)`` columns. On a
    half-integral row independent paths cross distinct vertical edges (at most
    ``C``). On an integral row each path either holds a horizontal edge of the
    row or crosses the half-rows next to it (at most ``2C - 1`` in total). Both
    stay within ``4*ell - 1``.
    """
    return 4 * ell - 1


def grid_path_layered_decomposition(
    inst: GeometricInstance, ell: int, g: Graph | None = None
) -> tuple[TreeDecomposition, Layering]:
    """Decomposition over contact rows plus a layering by vertical strips.

    Every object must have horizontal part of length at most ``ell - 1``.
    Strips are ``2*ell`` columns wide, or ``max(ell-1, 1)`` under edge contact.
    Rectangles with integral corners are handled like vertex-contact paths.
    """
    _check_gridlike(inst)
    if ell < 1:
        raise ValueError("ell must be at least 1")
    if not inst.objects:
        raise ValueError("empty instance")
    xr = [_x_range(o) for o in inst.objects]
    too_wide = [v for v, (a, b) in enumerate(xr) if b - a > ell - 1]
    if too_wide:
        raise ValueError(f"objects {too_wide[:5]} have horizontal part longer than {ell - 1}")
    g = intersection_graph(inst) if g is None else g
    td = _contact_rows(inst, g)
    width = _layer_width(inst, ell)
    lay = make_layering([_ceil(Fraction(a, width)) for a, _ in xr])
    return td, lay


# --------------------------------------------------------------------------
# narrow strips


def narrow_strip_bound(inst: GeometricInstance, ell: int) -> int:
    """Independence bound promised by :func:`narrow_strip_decomposition`."""
    if inst.kind == "grid_paths":
        return ell if inst.mode == "v" else 3 * ell - 1
    if inst.kind == "rectangles":
        if all(o.hi[0] > o.lo[0] for o in inst.objects):
            return ell // 2
        return ell
    if inst.kind == "unit_disks":
        return 2 * _ceil(Fraction(ell) / inst.radius)
    raise ValueError(f"no narrow-strip construction for {inst.kind}")


def _columns(inst: GeometricInstance) -> int:
    lo = min(projection(o, 0)[0] for o in inst.objects)
    hi = max(projection(o, 0)[1] for o in inst.objects)
    return int(hi - lo) + 1


def narrow_strip_decomposition(
    inst: GeometricInstance, ell: int, g: Graph | None = None
) -> TreeDecomposition:
    """Path decomposition for an instance confined to a narrow vertical window.

    Grid paths and rectangles must use at most ``ell`` grid columns; unit disks
    (radius at least 1) must fit between two integral vertical lines at
    distance at most ``ell - 1``.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    if not inst.objects:
        return make_decomposition([()], [])
    if inst.kind in ("grid_paths", "rectangles"):
        cols = _columns(inst)
        if cols > ell:
            raise ValueError(f"instance uses {cols} columns, more than {ell}")
        g = intersection_graph(inst) if g is None else g
        return _contact_rows(inst, g)
    if inst.kind == "unit_disks":
        c = inst.radius
        if c < 1:
            raise ValueError("disk radius must be at least 1")
        left = _floor(min(o.center[0] for o in inst.objects) - c)
        right = _ceil(max(o.center[0] for o in inst.objects) + c)
        if right - left > ell - 1:
            raise ValueError(f"disks span width {right - left}, more than {ell - 1}")
        strips: dict[int, list[int]] = {}
        for v, o in enumerate(inst.objects):
            y = o.center[1]
            for j in range(_ceil((y - c) / c), _floor((y + c) / c) + 2):
                strips.setdefault(j, []).append(v)
        return path_decomposition([strips[j] for j in sorted(strips)])
    raise ValueError(f"no narrow-strip construction for {inst.kind}")


# --------------------------------------------------------------------------
# graph powers and layer covers


def power_decomposition(
    g: Graph, td: TreeDecomposition, lay: Layering, d: int
) -> tuple[Graph, TreeDecomposition, Layering]:
    """Decomposition and layering of ``g ** (1 + 2d)`` from those of ``g``.

    Bags grow to everything within distance ``d``; every ``1 + 2d`` consecutive
    layers merge into one. A cell bound of ``k`` becomes ``(1 + 4d) k``.
    """
    if d <= 0:
        raise ValueError("d must be positive")
    rep = validate_decomposition(g, td)
    if not rep.ok:
        raise ValueError(f"invalid tree decomposition: {rep.summary()}")
    if layering_violations(g, lay):
        raise ValueError("invalid layering")
    p = 1 + 2 * d
    gp = graph_power(g, p)
    bags = [sorted(bfs_distances(g, bag, d)) if bag else [] for bag in td.bags]
    out = make_decomposition(bags, td.tree_edges)
    return gp, out, make_layering([i // p for i in lay.layers])


def cover_from_layering(
    g: Graph, td: TreeDecomposition, lay: Layering, r: int, ell: int | None = None
) -> GeneralCover:
    """``r`` elements, the ``m``-th dropping every layer congruent to ``m`` mod ``r``.

    Each vertex lies in exactly ``r - 1`` elements. Each element's
    decomposition glues the restrictions of ``td`` to its components.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if len(lay.layers) != g.n:
        raise ValueError("layering length does not match the graph")
    elements, decomps = [], []
    for m in range(r):
        el = [v for v in range(g.n) if lay.layers[v] % r != m]
        parts = [(comp, restrict_decomposition(td, comp)) for comp in connected_components(g, el)]
        elements.append(tuple(el))
        decomps.append(merge_components(parts))
    bound = None if ell is None else ell * (r - 1)
    return GeneralCover(tuple(elements), tuple(decomps), Fraction(r - 1, r), bound, {"r": r})


# --------------------------------------------------------------------------
# fat objects


def fat_cover_ratio(r0: int, d: int) -> int:
    """``2 * ceil(1 / (1 - (1 - 1/r0) ** (1/d)))`` computed exactly.

    The ceiling is the least ``N`` with ``(1 - 1/N) ** d >= 1 - 1/r0``.
    """
    if r0 < 2 or d < 1:
        raise ValueError("need r0 >= 2 and d >= 1")
    target = 1 - Fraction(1, r0)
    n = 1
    while (1 - Fraction(1, n)) ** d < target:
        n += 1
    return 2 * n


@dataclass(frozen=True)
class RankedGridSystem:
    """Shifted hierarchical grids: rank ``i`` hyperplanes on axis ``j`` sit at
    ``m * r**(1-i) + y[j] * sum(r**-k for k in i..k0+1)``."""

    r: int
    k0: int
    y: tuple[int, ...]

    def __post_init__(self):
        if self.r < 4 or self.r % 2:
            raise ValueError("grid ratio must be even and at least 4")
        if any(not 0 <= yj < self.r // 2 for yj in self.y):
            raise ValueError("shift coordinates must lie in 0..r/2-1")

    @property
    def d(self) -> int:
        return len(self.y)

    @functools.cache
    def period(self, i: int) -> Fraction:
        return Fraction(self.r) ** (1 - i)

    @functools.cache
    def shift_sum(self, i: int) -> Fraction:
        return sum((Fraction(1, self.r ** k) for k in range(i, self.k0 + 2)), Fraction(0))

    @functools.cache
    def offset(self, i: int, j: int) -> Fraction:
        return self.y[j] * self.shift_sum(i)

    def rank(self, size: Fraction) -> int:
        """The ``k`` with ``r**-k >= size > r**-(k+1)``; sizes must lie in (0, 1]."""
        if not 0 < size <= 1:
            raise ValueError("sizes must lie in (0, 1]")
        k = 0
        while size <= Fraction(1, self.r ** (k + 1)):
            k += 1
        return k

    def avoids(self, obj, i: int) -> bool:
        """True when ``obj`` meets no rank-``i`` hyperplane."""
        p = self.period(i)
        for j in range(self.d):
            lo, hi = projection(obj, j)
            off = self.offset(i, j)
            if _ceil((lo - off) / p) <= _floor((hi - off) / p):
                return False
        return True

    def cell_of(self, obj, i: int) -> tuple[int, ...]:
        p = self.period(i)
        return tuple(_floor((projection(obj, j)[0] - self.offset(i, j)) / p) for j in range(self.d))

    def box(self, i: int, m: Sequence[int]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        p = self.period(i)
        lo = tuple(self.offset(i, j) + m[j] * p for j in range(self.d))
        return lo, tuple(a + p for a in lo)

    def cell_ranges(self, obj, i: int) -> list[range]:
        """Per-axis indices of rank-``i`` closed boxes the object's bounding box meets."""
        p = self.period(i)
        out = []
        for j in range(self.d):
            lo, hi = projection(obj, j)
            off = self.offset(i, j)
            out.append(range(_ceil((lo - off) / p) - 1, _floor((hi - off) / p) + 1))
        return out

    def containing_cell(self, i: int, m: Sequence[int], coarser: int) -> tuple[int, ...]:
        """Index of the rank-``coarser`` box containing box ``(i, m)``."""
        p, q = self.period(i), self.period(coarser)
        return tuple(
            _floor((self.offset(i, j) + (m[j] + Fraction(1, 2)) * p - self.offset(coarser, j)) / q)
            for j in range(self.d)
        )


def _fat_element(
    objs: Sequence, ranks: Sequence[int], grid: RankedGridSystem
) -> tuple[tuple[int, ...], TreeDecomposition]:
    members = [v for v, o in enumerate(objs) if grid.avoids(o, ranks[v])]
    cells: dict[tuple[int, tuple[int, ...]], None] = {}
    for v in members:
        cells[(ranks[v], grid.cell_of(objs[v], ranks[v]))] = None
    keys = sorted(cells)
    node_id = {key: t + 1 for t, key in enumerate(keys)}
    by_rank: dict[int, list[tuple[int, ...]]] = {}
    for i, m in keys:
        by_rank.setdefault(i, []).append(m)

    bags: list[list[int]] = [[] for _ in range(len(keys) + 1)]
    for v in members:
        o = objs[v]
        for i, ms in by_rank.items():
            if i < ranks[v]:
                continue
            rngs = grid.cell_ranges(o, i)
            span = math.prod(len(rg) for rg in rngs)
            if span <= len(ms):
                cands = (m for m in itertools.product(*rngs) if (i, m) in node_id)
            else:
                cands = (m for m in ms if all(m[j] in rngs[j] for j in range(grid.d)))
            for m in cands:
                lo, hi = grid.box(i, m)
                if meets_box(o, lo, hi):
                    bags[node_id[(i, m)]].append(v)

    edges = []
    for i, m in keys:
        parent = 0
        for coarser in range(i - 1, -1, -1):
            pm = grid.containing_cell(i, m, coarser)
            if (coarser, pm) in node_id:
                parent = node_id[(coarser, pm)]
                break
        edges.append((parent, node_id[(i, m)]))
    return tuple(members), make_decomposition(bags, edges)


def fat_cover(inst: GeometricInstance, profile: FatnessProfile, r0: int) -> GeneralCover:
    """``(1 - 1/r0)``-general cover of a fat family by shifted hierarchical grids.

    There is one element per shift vector in ``{0..r/2-1}^d`` (row-major) with
    ``r = fat_cover_ratio(r0, d)``. Objects avoid the grid lines of their own
    rank. Every element decomposition has at most ``n + 1`` nodes and
    independence number at most ``c * r**(2d)``.
    """
    if inst.kind not in ("disks", "boxes_d", "unit_disks", "rectangles"):
        raise ValueError(f"fat covers are not defined for {inst.kind}")
    if profile.d != inst.d:
        raise ValueError("fatness profile dimension does not match the instance")
    if r0 < 2:
        raise ValueError("r0 must be an integer >= 2")
    d = inst.d
    r = fat_cover_ratio(r0, d)
    if not inst.objects:
        return GeneralCover((), (), 1 - Fraction(1, r0), profile.c * r ** (2 * d), {"r": r})
    scaled, scale = rescale_to_unit(inst)
    objs = scaled.objects
    probe = RankedGridSystem(r, 0, (0,) * d)
    ranks = [probe.rank(object_size(o)) for o in objs]
    k0 = max(ranks)
    elements, decomps = [], []
    for y in itertools.product(range(r // 2), repeat=d):
        el, td = _fat_element(objs, ranks, RankedGridSystem(r, k0, y))
        elements.append(el)
        decomps.append(td)
    return GeneralCover(
        tuple(elements),
        tuple(decomps),
        1 - Fraction(1, r0),
        profile.c * r ** (2 * d),
        {"r": r, "k0": k0, "scale": scale, "ranks": tuple(ranks)},
    )
