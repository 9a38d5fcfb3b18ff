"""Approximation drivers built on the exact solver.

* :func:`ptas_over_cover` solves each element of a general cover exactly and
  keeps the best; a member lies inside at least a ``1 - h/r`` fraction of the
  elements, so the best element retains that fraction of the optimum.
* :func:`ptas_distance_d` reduces distance-``d`` packing (``d`` even) to
  independent packing in ``G^(d-1)`` and runs the cover driver there.
* :func:`shifting_ptas` deletes the objects crossing every ``k*c``-th
  vertical cutting line, solves the narrow pieces with narrow-strip
  decompositions and keeps the best shift.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .constructions import (
    GeneralCover,
    cover_from_layering,
    narrow_strip_bound,
    narrow_strip_decomposition,
    power_decomposition,
)
from .geometry import GeometricInstance, intersection_graph, projection
from .graph import (
    PackingSolution,
    as_weights,
    connected_components,
    singleton_family,
    verify_distance_packing,
    verify_packing,
)
from .solver import PackingInstance, solve_mwis, solve_packing
from .treedec import Layering, TreeDecomposition, independence_number

__all__ = [
    "ApproxResult",
    "OddDistanceError",
    "ptas_over_cover",
    "ptas_distance_d",
    "shifting_ptas",
    "shift_parameters",
]


@dataclass(frozen=True)
class ApproxResult:
    """Best solution found, its proven ratio and the per-element (or per-shift) weights."""

    solution: PackingSolution
    guarantee: Fraction
    winner: int
    per_element: tuple[tuple[int, Fraction], ...]


class OddDistanceError(ValueError):
    """Raised for odd packing distances, where no PTAS exists unless P = NP."""


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _argmax(weights: Sequence[Fraction]) -> int:
    best = 0
    for i, w in enumerate(weights):
        if w > weights[best]:
            best = i
    return best


# --------------------------------------------------------------------------
# general covers


def ptas_over_cover(
    inst: PackingInstance, cover: GeneralCover, r: int, *, threads: int = 1
) -> ApproxResult:
    """Best exact packing over the cover's elements, with guarantee ``1 - h/r``.

    The cover must place every host vertex in at least ``(1 - 1/r)|C|``
    elements; each member is then checked to lie wholly inside at least
    ``(1 - h/r)|C|`` of them.
    """
    t0 = time.perf_counter()
    host, fam = inst.host, inst.family
    if r < 1:
        raise ValueError("r must be positive")
    size = len(cover.elements)
    if size == 0:
        raise ValueError("cover has no elements")
    if len(cover.decomps) != size:
        raise ValueError("cover needs one decomposition per element")
    counts = cover.coverage_counts(host.n)
    need = Fraction(r - 1, r) * size
    low = [v for v, c in enumerate(counts) if c < need]
    if low:
        raise ValueError(f"cover is not (1-1/{r})-general: vertices {low[:5]} are under-covered")
    h = fam.h_max
    elsets = [set(el) for el in cover.elements]
    need_m = (1 - Fraction(h, r)) * size
    for j, m in enumerate(fam.members):
        inside = sum(1 for s in elsets if all(v in s for v in m))
        if inside < need_m:
            raise ValueError(f"member {j} lies in only {inside} of {size} elements")

    def run(idx: int) -> tuple[Fraction, tuple[int, ...]]:
        sub, orig = fam.restrict(cover.elements[idx])
        if not len(sub):
            return Fraction(0), ()
        w = tuple(inst.weights[j] for j in orig)
        sol = solve_packing(PackingInstance(host, sub, w), cover.decomps[idx])
        if not sol.verified:
            raise RuntimeError(f"solver returned an unverified packing on element {idx}")
        return sol.weight, tuple(orig[j] for j in sol.chosen)

    results = _pmap(run, list(range(size)), threads)
    weights = [w for w, _ in results]
    win = _argmax(weights)
    chosen = tuple(sorted(results[win][1]))
    weight = weights[win]
    ok = verify_packing(host, fam, chosen) and weight == sum(
        (inst.weights[j] for j in chosen), Fraction(0)
    )
    sol = PackingSolution(chosen, weight, ok, int((time.perf_counter() - t0) * 1000))
    guarantee = max(Fraction(0), 1 - Fraction(h, r))
    return ApproxResult(sol, guarantee, win, tuple(enumerate(weights)))


# --------------------------------------------------------------------------
# distance-d packing


def ptas_distance_d(
    inst: PackingInstance,
    td: TreeDecomposition,
    lay: Layering,
    r: int,
    d: int,
    *,
    ell: int | None = None,
    threads: int = 1,
) -> ApproxResult:
    """Distance-``d`` packing for even ``d`` via independent packing in ``G^(d-1)``.

    ``(td, lay)`` must be a decomposition and layering of the host. The result
    is re-verified with BFS distances in the original host.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if d % 2:
        raise OddDistanceError(
            f"distance-{d} packing is not supported: for odd d the problem has no "
            "PTAS unless P = NP (already Distance-3 Independent Set is hard to approximate)"
        )
    t0 = time.perf_counter()
    g = inst.host
    k = d // 2
    if k == 1:
        gp, tdp, layp = g, td, lay
    else:
        gp, tdp, layp = power_decomposition(g, td, lay, k - 1)
    cell = None if ell is None else (4 * k - 3) * ell
    cover = cover_from_layering(gp, tdp, layp, r, cell)
    res = ptas_over_cover(PackingInstance(gp, inst.family, inst.weights), cover, r, threads=threads)
    chosen = res.solution.chosen
    ok = res.solution.verified and verify_distance_packing(g, inst.family, chosen, d)
    sol = PackingSolution(chosen, res.solution.weight, ok, int((time.perf_counter() - t0) * 1000))
    return ApproxResult(sol, res.guarantee, res.winner, res.per_element)


# --------------------------------------------------------------------------
# shifting


def _line_offset(inst: GeometricInstance) -> Fraction:
    """Offset ``delta`` of the cutting lines ``x = i + delta``.

    Grid objects have integral coordinates, so ``1/2`` keeps every line off
    their endpoints. For disks the smallest dyadic offset missing every
    endpoint's fractional part is used.
    """
    if inst.kind != "unit_disks":
        return Fraction(1, 2)
    taken = set()
    for o in inst.objects:
        for e in projection(o, 0):
            taken.add(e - math.floor(e))
    m = 1
    while True:
        for j in range(1, 2 ** m, 2):
            delta = Fraction(j, 2 ** m)
            if delta not in taken:
                return delta
        m += 1


def _cut_range(obj, delta: Fraction) -> tuple[int, int]:
    """Integers ``i`` with ``i + delta`` inside the object's x-projection."""
    lo, hi = projection(obj, 0)
    return math.ceil(lo - delta), math.floor(hi - delta)


def shift_parameters(inst: GeometricInstance, eps: Fraction, c=None) -> tuple[int, int, int]:
    """``(k, c, period)`` for the shifting scheme, with ``period = k * c``.

    An object crosses at most ``c`` cutting lines (``2c`` for disks of radius
    ``c``), hence at most a ``1/k`` (``2/k``) share of the shifts removes it.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    if inst.kind == "unit_disks":
        rad = inst.radius
        c = rad if c is None else Fraction(c)
        if c != rad:
            raise ValueError("for unit disks c is the common radius")
        if c < 1 or c.denominator != 1:
            raise ValueError("disk radius must be an integer >= 1; rescale the instance first")
        k = math.ceil(2 / eps)
    elif inst.kind in ("grid_paths", "rectangles"):
        widths = [projection(o, 0)[1] - projection(o, 0)[0] for o in inst.objects]
        c = Fraction(max(max(widths, default=1), 1)) if c is None else Fraction(c)
        if c < 1 or c.denominator != 1:
            raise ValueError("c must be an integer >= 1")
        if any(w > c for w in widths):
            raise ValueError(f"horizontal parts exceed c = {c}")
        k = math.ceil(1 / eps)
    else:
        raise ValueError(f"no shifting scheme for {inst.kind}")
    return k, int(c), k * int(c)


def _span(sub: GeometricInstance) -> int:
    lo = min(projection(o, 0)[0] for o in sub.objects)
    hi = max(projection(o, 0)[1] for o in sub.objects)
    if sub.kind == "unit_disks":
        return math.ceil(hi) - math.floor(lo) + 1
    return int(hi - lo) + 1


def shifting_ptas(
    inst: GeometricInstance,
    eps,
    c=None,
    *,
    weights: Iterable | None = None,
    threads: int = 1,
    debug: bool = False,
) -> ApproxResult:
    """Maximum weight independent set within ``1 - eps`` by the shifting technique.

    Supports grid paths (horizontal part at most ``c``), rectangles (width at
    most ``c``) and unit disks (common radius ``c >= 1``).
    """
    t0 = time.perf_counter()
    k, c, period = shift_parameters(inst, eps, c)
    g = intersection_graph(inst)
    w = inst.vertex_weights() if weights is None else as_weights(weights, inst.n)
    delta = _line_offset(inst)
    ranges = [_cut_range(o, delta) for o in inst.objects]

    def removed(v: int, s: int) -> bool:
        a, b = ranges[v]
        if b < a:
            return False
        if b - a + 1 >= period:
            return True
        first = a + (s - a) % period
        return first <= b

    def run(s: int) -> tuple[Fraction, tuple[int, ...]]:
        keep = [v for v in range(inst.n) if not removed(v, s)]
        chosen: list[int] = []
        total = Fraction(0)
        for comp in connected_components(g, keep):
            sub = inst.subset(comp)
            ell = _span(sub)
            td_local = narrow_strip_decomposition(sub, ell)
            if debug:
                sg = intersection_graph(sub)
                assert independence_number(sg, td_local) <= narrow_strip_bound(sub, ell)
            td = TreeDecomposition(
                tuple(tuple(sorted(comp[v] for v in bag)) for bag in td_local.bags),
                td_local.tree_edges,
            )
            sol = solve_mwis(g, w, td, vertices=comp)
            chosen.extend(sol.chosen)
            total += sol.weight
        return total, tuple(sorted(chosen))

    results = _pmap(run, list(range(period)), threads)
    weights_by_shift = [x for x, _ in results]
    win = _argmax(weights_by_shift)
    chosen = results[win][1]
    ok = verify_packing(g, singleton_family(inst.n), chosen)
    sol = PackingSolution(chosen, weights_by_shift[win], ok, int((time.perf_counter() - t0) * 1000))
    return ApproxResult(sol, 1 - Fraction(eps), win, tuple(enumerate(weights_by_shift)))
