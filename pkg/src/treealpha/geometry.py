"""Geometric families with exact rational coordinates and their intersection graphs.

Supported kinds:

``unit_disks``  discs in the plane sharing one radius (``radius``)
``disks``       balls in R^d with individual radii
``rectangles``  closed axis-parallel rectangles with integer corners
``boxes_d``     closed axis-parallel boxes in R^d
``grid_paths``  rectilinear paths on the integer grid, compared by shared
                grid-points (``mode="v"``) or shared unit grid-edges (``mode="e"``)

All objects are closed sets; touching counts as intersecting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .graph import Graph, as_weights

__all__ = [
    "Ball",
    "Box",
    "GridPath",
    "GeometricInstance",
    "FatnessProfile",
    "KINDS",
    "unit_disks",
    "disks",
    "rectangles",
    "boxes",
    "grid_paths",
    "intersects",
    "intersection_graph",
    "fatness_constant",
    "rescale_to_unit",
    "horizontal_part",
    "object_size",
    "projection",
    "meets_box",
    "max_aspect_ratio",
]

KINDS = ("unit_disks", "disks", "rectangles", "grid_paths", "boxes_d")


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise ValueError(f"float coordinate {x!r}; pass ints, Fractions or 'p/q' strings")
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Ball:
    center: tuple[Fraction, ...]
    radius: Fraction


@dataclass(frozen=True)
class Box:
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]


@dataclass(frozen=True)
class GridPath:
    """Endpoints and bend-points in traversal order."""

    points: tuple[tuple[int, int], ...]

    @cached_property
    def grid_points(self) -> frozenset:
        pts = {self.points[0]}
        for (x1, y1), (x2, y2) in zip(self.points, self.points[1:]):
            if x1 == x2:
                step = 1 if y2 >= y1 else -1
                pts.update((x1, y) for y in range(y1, y2 + step, step))
            else:
                step = 1 if x2 >= x1 else -1
                pts.update((x, y1) for x in range(x1, x2 + step, step))
        return frozenset(pts)

    @cached_property
    def grid_edges(self) -> frozenset:
        edges = set()
        for (x1, y1), (x2, y2) in zip(self.points, self.points[1:]):
            if x1 == x2:
                for y in range(min(y1, y2), max(y1, y2)):
                    edges.add(((x1, y), (x1, y + 1)))
            else:
                for x in range(min(x1, x2), max(x1, x2)):
                    edges.add(((x, y1), (x + 1, y1)))
        return frozenset(edges)

    @property
    def bends(self) -> int:
        return max(len(self.points) - 2, 0)


@dataclass(frozen=True)
class GeometricInstance:
    kind: str
    objects: tuple
    d: int = 2
    radius: Fraction | None = None
    mode: str | None = None
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        _validate(self)

    def __len__(self) -> int:
        return len(self.objects)

    @property
    def n(self) -> int:
        return len(self.objects)

    def vertex_weights(self) -> tuple[Fraction, ...]:
        if self.weights is None:
            return tuple(Fraction(1) for _ in self.objects)
        return self.weights

    def subset(self, idx: Sequence[int]) -> "GeometricInstance":
        w = None if self.weights is None else tuple(self.weights[i] for i in idx)
        return replace(self, objects=tuple(self.objects[i] for i in idx), weights=w)


def _validate(inst: GeometricInstance) -> None:
    if inst.kind not in KINDS:
        raise ValueError(f"unknown kind {inst.kind!r}")
    if inst.weights is not None:
        object.__setattr__(inst, "weights", as_weights(inst.weights, len(inst.objects)))
    if inst.kind in ("unit_disks", "rectangles", "grid_paths") and inst.d != 2:
        raise ValueError(f"{inst.kind} live in the plane")
    if inst.d < 1:
        raise ValueError("dimension must be positive")
    if inst.kind == "unit_disks":
        if inst.radius is None or inst.radius <= 0:
            raise ValueError("unit_disks need a positive common radius")
        for o in inst.objects:
            if not isinstance(o, Ball) or o.radius != inst.radius or len(o.center) != 2:
                raise ValueError("unit_disks objects must be planar Balls with the common radius")
    elif inst.kind == "disks":
        for o in inst.objects:
            if not isinstance(o, Ball) or len(o.center) != inst.d or o.radius < 0:
                raise ValueError(f"disks objects must be Balls in R^{inst.d}")
    elif inst.kind in ("rectangles", "boxes_d"):
        for o in inst.objects:
            if not isinstance(o, Box) or len(o.lo) != inst.d or len(o.hi) != inst.d:
                raise ValueError(f"{inst.kind} objects must be Boxes in R^{inst.d}")
            if any(a > b for a, b in zip(o.lo, o.hi)):
                raise ValueError(f"box {o} has lo > hi")
            if inst.kind == "rectangles" and any(
                x.denominator != 1 for x in o.lo + o.hi
            ):
                raise ValueError("rectangle corners must be integral")
    else:
        if inst.mode not in ("e", "v"):
            raise ValueError("grid_paths need mode 'e' or 'v'")
        for o in inst.objects:
            if not isinstance(o, GridPath) or not o.points:
                raise ValueError("grid_paths objects must be non-empty GridPaths")
            for (x1, y1), (x2, y2) in zip(o.points, o.points[1:]):
                if x1 != x2 and y1 != y2:
                    raise ValueError(f"path {o.points} has a non axis-parallel segment")
            if inst.mode == "e" and not o.grid_edges:
                raise ValueError("under edge contact every path needs at least one grid-edge")


# --------------------------------------------------------------------------
# constructors


def unit_disks(centers: Iterable[Sequence], radius=Fraction(1, 2), weights=None) -> GeometricInstance:
    r = _q(radius)
    objs = tuple(Ball((_q(x), _q(y)), r) for x, y in centers)
    return GeometricInstance("unit_disks", objs, 2, radius=r, weights=weights)


def disks(centers: Iterable[Sequence], radii: Iterable, weights=None) -> GeometricInstance:
    objs = tuple(Ball(tuple(_q(c) for c in ctr), _q(r)) for ctr, r in zip(centers, radii))
    d = len(objs[0].center) if objs else 2
    return GeometricInstance("disks", objs, d, weights=weights)


def rectangles(rects: Iterable[Sequence], weights=None) -> GeometricInstance:
    """Rectangles given as ``(x1, y1, x2, y2)`` with integer corners."""
    objs = tuple(
        Box((_q(min(x1, x2)), _q(min(y1, y2))), (_q(max(x1, x2)), _q(max(y1, y2))))
        for x1, y1, x2, y2 in rects
    )
    return GeometricInstance("rectangles", objs, 2, weights=weights)


def boxes(los: Iterable[Sequence], his: Iterable[Sequence], weights=None) -> GeometricInstance:
    objs = tuple(
        Box(tuple(_q(a) for a in lo), tuple(_q(b) for b in hi)) for lo, hi in zip(los, his)
    )
    d = len(objs[0].lo) if objs else 2
    return GeometricInstance("boxes_d", objs, d, weights=weights)


def grid_paths(paths: Iterable[Sequence[Sequence[int]]], mode: str = "v", weights=None) -> GeometricInstance:
    objs = tuple(GridPath(tuple((int(x), int(y)) for x, y in p)) for p in paths)
    return GeometricInstance("grid_paths", objs, 2, mode=mode, weights=weights)


# --------------------------------------------------------------------------
# predicates


def _balls_meet(a: Ball, b: Ball) -> bool:
    dist2 = sum((x - y) ** 2 for x, y in zip(a.center, b.center))
    return dist2 <= (a.radius + b.radius) ** 2


def _boxes_meet(a: Box, b: Box) -> bool:
    return all(al <= bh and bl <= ah for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi))


def intersects(a, b, kind: str | None = None, mode: str | None = None) -> bool:
    """Exact closed-set intersection test for two objects of the same kind."""
    if type(a) is not type(b):
        raise TypeError(f"cannot compare {type(a).__name__} with {type(b).__name__}")
    if isinstance(a, Ball):
        return _balls_meet(a, b)
    if isinstance(a, Box):
        return _boxes_meet(a, b)
    if isinstance(a, GridPath):
        if mode == "e":
            return not a.grid_edges.isdisjoint(b.grid_edges)
        if mode in (None, "v"):
            return not a.grid_points.isdisjoint(b.grid_points)
        raise ValueError(f"unknown contact mode {mode!r}")
    raise TypeError(f"unsupported object {a!r}")


def intersection_graph(inst: GeometricInstance) -> Graph:
    objs = inst.objects
    n = len(objs)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        oi = objs[i]
        for j in range(i + 1, n):
            if intersects(oi, objs[j], inst.kind, inst.mode):
                adj[i].append(j)
                adj[j].append(i)
    return Graph(n, tuple(tuple(sorted(a)) for a in adj))


def horizontal_part(p: GridPath) -> tuple[int, int]:
    """Projection of a path onto the x-axis."""
    xs = [x for x, _ in p.points]
    return min(xs), max(xs)


def projection(obj, axis: int) -> tuple[Fraction, Fraction]:
    if isinstance(obj, Ball):
        c = obj.center[axis]
        return c - obj.radius, c + obj.radius
    if isinstance(obj, Box):
        return obj.lo[axis], obj.hi[axis]
    if isinstance(obj, GridPath):
        vals = [pt[axis] for pt in obj.points]
        return Fraction(min(vals)), Fraction(max(vals))
    raise TypeError(f"unsupported object {obj!r}")


def meets_box(obj, lo: Sequence[Fraction], hi: Sequence[Fraction]) -> bool:
    """Does ``obj`` meet the closed axis-parallel box ``[lo, hi]``?"""
    if isinstance(obj, Ball):
        dist2 = Fraction(0)
        for c, a, b in zip(obj.center, lo, hi):
            if c < a:
                dist2 += (a - c) ** 2
            elif c > b:
                dist2 += (c - b) ** 2
        return dist2 <= obj.radius ** 2
    if isinstance(obj, Box):
        return all(ol <= b and a <= oh for ol, oh, a, b in zip(obj.lo, obj.hi, lo, hi))
    raise TypeError(f"unsupported object {obj!r}")


def object_size(obj) -> Fraction:
    """Side length of the smallest enclosing axis-parallel hypercube."""
    if isinstance(obj, Ball):
        return 2 * obj.radius
    if isinstance(obj, Box):
        return max(b - a for a, b in zip(obj.lo, obj.hi))
    raise TypeError(f"size is defined for balls and boxes, not {obj!r}")


def max_aspect_ratio(inst: GeometricInstance) -> Fraction:
    best = Fraction(1)
    for o in inst.objects:
        sides = [b - a for a, b in zip(o.lo, o.hi)]
        if min(sides) == 0:
            raise ValueError("degenerate box has unbounded aspect ratio")
        best = max(best, max(sides) / min(sides))
    return best


# --------------------------------------------------------------------------
# fatness and rescaling


@dataclass(frozen=True)
class FatnessProfile:
    """``c`` stabbing points suffice per box (see :func:`fatness_constant`)."""

    d: int
    c: int

    def __post_init__(self):
        if self.c < 1 or self.d < 1:
            raise ValueError("fatness needs c >= 1 and d >= 1")


def _ceil_sqrt(x: Fraction) -> int:
    """Smallest integer N >= 0 with N*N >= x, exactly."""
    if x <= 0:
        return 0
    n = math.isqrt(x.numerator // x.denominator)
    while n * n < x:
        n += 1
    while n > 0 and (n - 1) * (n - 1) >= x:
        n -= 1
    return n


def fatness_constant(kind: str, d: int, t=1) -> FatnessProfile:
    """Stabbing constant for balls (``3^d d!``) or boxes of aspect ratio <= t
    (``ceil((3 t sqrt(d))^d)``), computed exactly."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if kind in ("balls", "disks", "unit_disks"):
        return FatnessProfile(d, 3 ** d * math.factorial(d))
    if kind in ("boxes", "boxes_d", "rectangles"):
        t = _q(t)
        if t < 1:
            raise ValueError("aspect ratio must be at least 1")
        # (3 t sqrt(d))^d = sqrt((9 t^2 d)^d)
        return FatnessProfile(d, _ceil_sqrt((9 * t * t * d) ** d))
    raise ValueError(f"no fatness constant for kind {kind!r}")


def rescale_to_unit(inst: GeometricInstance) -> tuple[GeometricInstance, Fraction]:
    """Divide all coordinates by the largest object size so every size is <= 1.

    Rectangles come back as ``boxes_d`` since their corners stop being integral.
    """
    if inst.kind == "grid_paths":
        raise ValueError("grid paths have no size-based rescaling")
    if not inst.objects:
        raise ValueError("cannot rescale an empty instance")
    sizes = [object_size(o) for o in inst.objects]
    if min(sizes) <= 0:
        raise ValueError("zero-size object")
    scale = 1 / max(sizes)
    if inst.kind in ("unit_disks", "disks"):
        objs = tuple(Ball(tuple(c * scale for c in o.center), o.radius * scale) for o in inst.objects)
        rad = None if inst.radius is None else inst.radius * scale
        return replace(inst, objects=objs, radius=rad), scale
    objs = tuple(Box(tuple(a * scale for a in o.lo), tuple(b * scale for b in o.hi)) for o in inst.objects)
    return replace(inst, kind="boxes_d", objects=objs), scale
