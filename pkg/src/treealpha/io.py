"""JSON encodings. Rationals travel as ``"p/q"`` (or ``"p"``) strings."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .constructions import GeneralCover
from .geometry import Ball, Box, GeometricInstance, GridPath
from .graph import Graph, PackingSolution, build_graph
from .ptas import ApproxResult
from .treedec import Layering, TreeDecomposition, make_decomposition

__all__ = [
    "q",
    "unq",
    "dumps",
    "graph_to_json",
    "graph_from_json",
    "decomposition_to_json",
    "decomposition_from_json",
    "cover_to_json",
    "cover_from_json",
    "instance_to_json",
    "instance_from_json",
    "solution_to_json",
    "solution_from_json",
    "approx_to_json",
]


def q(x: Fraction) -> str:
    return str(Fraction(x))


def unq(s) -> Fraction:
    if isinstance(s, float):
        raise ValueError("floating-point values are not accepted; use 'p/q' strings")
    return Fraction(s)


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def graph_to_json(g: Graph, weights=None) -> dict:
    out: dict[str, Any] = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if weights is not None:
        out["weights"] = [q(w) for w in weights]
    return out


def graph_from_json(data: dict) -> tuple[Graph, tuple[Fraction, ...] | None]:
    g = build_graph(int(data["n"]), [tuple(e) for e in data.get("edges", [])])
    w = data.get("weights")
    return g, (None if w is None else tuple(unq(x) for x in w))


def decomposition_to_json(td: TreeDecomposition, lay: Layering | None = None) -> dict:
    out: dict[str, Any] = {
        "tree_edges": [list(e) for e in td.tree_edges],
        "bags": {str(t): list(b) for t, b in enumerate(td.bags)},
    }
    if lay is not None:
        out["layering"] = list(lay.layers)
    return out


def decomposition_from_json(data: dict) -> tuple[TreeDecomposition, Layering | None]:
    bags_raw = data["bags"]
    n_nodes = len(bags_raw)
    if sorted(int(t) for t in bags_raw) != list(range(n_nodes)):
        raise ValueError("bag keys must be the node ids 0..N-1")
    bags = [bags_raw[str(t)] for t in range(n_nodes)]
    td = make_decomposition(bags, data.get("tree_edges", []))
    lay = data.get("layering")
    return td, (None if lay is None else Layering(tuple(int(x) for x in lay)))


def cover_to_json(cover: GeneralCover) -> dict:
    return {
        "beta": q(cover.beta),
        "bound": cover.bound,
        "elements": [
            {"vertices": list(el), "decomposition": decomposition_to_json(td)}
            for el, td in zip(cover.elements, cover.decomps)
        ],
    }


def cover_from_json(data: dict) -> GeneralCover:
    els, tds = [], []
    for rec in data["elements"]:
        els.append(tuple(rec["vertices"]))
        tds.append(decomposition_from_json(rec["decomposition"])[0])
    return GeneralCover(tuple(els), tuple(tds), unq(data["beta"]), data.get("bound"))


def _object_to_json(o) -> dict:
    if isinstance(o, Ball):
        return {"center": [q(c) for c in o.center], "radius": q(o.radius)}
    if isinstance(o, Box):
        return {"lo": [q(a) for a in o.lo], "hi": [q(b) for b in o.hi]}
    return {"points": [list(p) for p in o.points]}


def instance_to_json(inst: GeometricInstance) -> dict:
    out: dict[str, Any] = {"kind": inst.kind, "d": inst.d}
    if inst.kind == "unit_disks":
        out["radius"] = q(inst.radius)
        out["objects"] = [{"center": [q(c) for c in o.center]} for o in inst.objects]
    else:
        out["objects"] = [_object_to_json(o) for o in inst.objects]
    if inst.mode is not None:
        out["mode"] = inst.mode
    if inst.weights is not None:
        out["weights"] = [q(w) for w in inst.weights]
    return out


def instance_from_json(data: dict) -> GeometricInstance:
    kind = data["kind"]
    d = int(data.get("d", 2))
    recs = data["objects"]
    radius = None
    if kind == "unit_disks":
        radius = unq(data["radius"])
        objs = tuple(Ball(tuple(unq(c) for c in r["center"]), radius) for r in recs)
    elif kind == "disks":
        objs = tuple(Ball(tuple(unq(c) for c in r["center"]), unq(r["radius"])) for r in recs)
    elif kind in ("rectangles", "boxes_d"):
        objs = tuple(Box(tuple(unq(a) for a in r["lo"]), tuple(unq(b) for b in r["hi"])) for r in recs)
    elif kind == "grid_paths":
        objs = tuple(GridPath(tuple((int(x), int(y)) for x, y in r["points"])) for r in recs)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    w = data.get("weights")
    return GeometricInstance(
        kind,
        objs,
        d,
        radius=radius,
        mode=data.get("mode"),
        weights=None if w is None else tuple(unq(x) for x in w),
    )


def solution_to_json(sol: PackingSolution, *, timing: bool = True) -> dict:
    out: dict[str, Any] = {
        "weight": q(sol.weight),
        "chosen": list(sol.chosen),
        "verified": bool(sol.verified),
    }
    if timing:
        out["elapsed_ms"] = int(sol.elapsed_ms)
    return out


def solution_from_json(data: dict) -> PackingSolution:
    return PackingSolution(
        tuple(int(j) for j in data["chosen"]),
        unq(data["weight"]),
        bool(data.get("verified", False)),
        int(data.get("elapsed_ms", 0)),
    )


def approx_to_json(res: ApproxResult, *, timing: bool = True) -> dict:
    out = solution_to_json(res.solution, timing=timing)
    out["guarantee"] = q(res.guarantee)
    out["winner"] = res.winner
    out["per_element"] = [{"index": i, "weight": q(w)} for i, w in res.per_element]
    return out
