"""Command-line front end: ``python -m treealpha <command> ...``.

Commands
--------
``decompose``  build a decomposition, layering or cover and print its measured quality
``solve``      exact or approximate maximum-weight packing, always re-verified
``bench``      sweep generators x modes x parameters into a CSV / markdown table
``generate``   write a seeded random instance
``fixtures``   list or export the curated fixtures

Inputs are graph JSON (``{"n", "edges"}``), instance JSON (``{"kind", ...}``)
or ``fixture:<name>``. Solve output holds a deterministic ``result`` payload
and a ``report`` carrying timings and verification verdicts. The exit status
is 0 exactly when every verdict holds; odd packing distances exit with 2.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io as _io
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import io
from .constructions import (
    GeneralCover,
    cover_from_layering,
    fat_cover,
    grid_layered_bound,
    grid_path_layered_decomposition,
    narrow_strip_bound,
    narrow_strip_decomposition,
    power_decomposition,
    unit_disk_layered_decomposition,
)
from .generators import GenSpec, fixture, fixture_names, generate
from .geometry import (
    GeometricInstance,
    fatness_constant,
    intersection_graph,
    max_aspect_ratio,
    projection,
)
from .graph import (
    Graph,
    SubgraphFamily,
    brute_force_packing,
    enumerate_family,
    build_graph,
    make_family,
    singleton_family,
    verify_distance_packing,
    verify_packing,
)
from .ptas import ApproxResult, OddDistanceError, ptas_distance_d, ptas_over_cover, shifting_ptas
from .solver import PackingInstance, solve_packing
from .treedec import (
    Layering,
    TreeDecomposition,
    independence_number,
    layered_independence_number,
    layering_violations,
    trivial_decomposition,
    validate_decomposition,
)

CONSTRUCTIONS = ("unit_disk_layered", "grid_layered", "narrow_strip", "fat_cover", "layer_cover", "power")
MODES = ("exact", "ptas-cover", "ptas-shift", "ptas-distance")
CSV_COLUMNS = ("instance", "n", "mode", "param", "weight", "exact", "ratio", "ms")


class CliError(Exception):
    def __init__(self, msg: str, code: int = 1):
        super().__init__(msg)
        self.code = code


# --------------------------------------------------------------------------
# loading


@dataclass
class Loaded:
    """A host graph with optional geometry, weights and decomposition."""

    name: str
    graph: Graph
    inst: GeometricInstance | None = None
    weights: tuple[Fraction, ...] | None = None
    td: TreeDecomposition | None = None
    lay: Layering | None = None
    digest: str = ""
    raw: dict = field(default_factory=dict)


def _digest(data: Any) -> str:
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


def _from_instance(name: str, inst: GeometricInstance) -> Loaded:
    data = io.instance_to_json(inst)
    return Loaded(name, intersection_graph(inst), inst, inst.weights, digest=_digest(data), raw=data)


def load_input(spec: str, decomposition: str | None = None) -> Loaded:
    if spec.startswith("fixture:"):
        fx = fixture(spec.split(":", 1)[1])
        if isinstance(fx.payload, GeometricInstance):
            out = _from_instance(spec, fx.payload)
        else:
            data = io.graph_to_json(fx.payload)
            out = Loaded(spec, fx.payload, td=trivial_decomposition(fx.payload), digest=_digest(data), raw=data)
    else:
        try:
            data = json.loads(Path(spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read {spec}: {exc}")
        try:
            if "kind" in data:
                out = _from_instance(spec, io.instance_from_json(data))
            elif "n" in data:
                g, w = io.graph_from_json(data)
                out = Loaded(spec, g, weights=w, digest=_digest(data), raw=data)
            else:
                raise CliError(f"{spec} is neither a graph nor an instance file")
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"invalid input {spec}: {exc}")
    if decomposition:
        try:
            td, lay = io.decomposition_from_json(json.loads(Path(decomposition).read_text()))
        except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read decomposition {decomposition}: {exc}")
        out.td, out.lay = td, lay
    return out


def load_family(spec: str, g: Graph) -> SubgraphFamily:
    from .graph import build_graph as _bg

    if spec == "k1":
        return singleton_family(g.n)
    k1, k2 = _bg(1, []), _bg(2, [(0, 1)])
    if spec == "k2":
        return enumerate_family(g, [k2], 2)
    if spec == "k1k2":
        return enumerate_family(g, [k1, k2], 2)
    if spec.startswith("explicit:"):
        path = spec.split(":", 1)[1]
        try:
            return make_family(g, json.loads(Path(path).read_text()))
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read family {path}: {exc}")
    raise CliError(f"unknown family {spec!r}; use k1, k2, k1k2 or explicit:<file>")


# --------------------------------------------------------------------------
# constructions


def _horizontal_ell(inst: GeometricInstance) -> int:
    widths = [projection(o, 0)[1] - projection(o, 0)[0] for o in inst.objects]
    return int(max(widths, default=0)) + 1


def layered_for(ld: Loaded) -> tuple[TreeDecomposition, Layering, int | None]:
    """Decomposition, layering and promised cell bound for the input."""
    if ld.td is not None and ld.lay is not None:
        return ld.td, ld.lay, None
    inst = ld.inst
    if inst is None:
        raise CliError("abstract graphs need --decomposition with a layering")
    if inst.kind == "unit_disks":
        td, lay = unit_disk_layered_decomposition(inst)
        return td, lay, 8
    if inst.kind in ("grid_paths", "rectangles"):
        ell = _horizontal_ell(inst)
        td, lay = grid_path_layered_decomposition(inst, ell, ld.graph)
        return td, lay, grid_layered_bound(inst, ell)
    raise CliError(f"no layered construction for {inst.kind}")


def _profile(inst: GeometricInstance):
    if inst.kind in ("disks", "unit_disks"):
        return fatness_constant("balls", inst.d)
    return fatness_constant("boxes", inst.d, max_aspect_ratio(inst))


def cmd_decompose(args) -> int:
    ld = load_input(args.input, args.decomposition)
    g, inst = ld.graph, ld.inst
    name = args.construction
    stats: dict[str, Any] = {"construction": name, "n": g.n, "edges": g.num_edges}
    out: dict[str, Any]
    if name in ("unit_disk_layered", "grid_layered"):
        want = "unit_disks" if name == "unit_disk_layered" else ("grid_paths", "rectangles")
        if inst is None or inst.kind not in (want if isinstance(want, tuple) else (want,)):
            raise CliError(f"{name} does not apply to {inst.kind if inst else 'abstract graphs'}")
        if name == "unit_disk_layered":
            td, lay = unit_disk_layered_decomposition(inst)
            bound = 8
        else:
            ell = args.ell or _horizontal_ell(inst)
            td, lay = grid_path_layered_decomposition(inst, ell, g)
            bound = grid_layered_bound(inst, ell)
        stats.update(_td_stats(g, td, lay), bound=bound)
        out = io.decomposition_to_json(td, lay)
    elif name == "narrow_strip":
        if inst is None:
            raise CliError("narrow_strip needs a geometric instance")
        ell = args.ell or _columns_needed(inst)
        td = narrow_strip_decomposition(inst, ell, g)
        stats.update(_td_stats(g, td, None), bound=narrow_strip_bound(inst, ell), ell=ell)
        out = io.decomposition_to_json(td)
    elif name == "power":
        td, lay, cell = layered_for(ld)
        d = args.d or 1
        gp, tdp, layp = power_decomposition(g, td, lay, d)
        k = layered_independence_number(g, td, lay)
        stats.update(_td_stats(gp, tdp, layp), bound=(1 + 4 * d) * k, power=1 + 2 * d)
        out = io.decomposition_to_json(tdp, layp)
        out["graph"] = io.graph_to_json(gp)
    elif name in ("layer_cover", "fat_cover"):
        r = args.r or 2
        if name == "layer_cover":
            td, lay, cell = layered_for(ld)
            ell = cell if cell is not None else layered_independence_number(g, td, lay)
            cover = cover_from_layering(g, td, lay, r, ell)
        else:
            if inst is None:
                raise CliError("fat_cover needs a geometric instance")
            cover = fat_cover(inst, _profile(inst), r)
        stats.update(_cover_stats(g, cover))
        out = io.cover_to_json(cover)
    else:
        raise CliError(f"unknown construction {name!r}")
    _emit(out, args.out)
    print(json.dumps(stats, sort_keys=True), file=sys.stderr if args.out is None else sys.stdout)
    return 0 if stats.get("valid", False) else 1


def _columns_needed(inst: GeometricInstance) -> int:
    lo = min(projection(o, 0)[0] for o in inst.objects)
    hi = max(projection(o, 0)[1] for o in inst.objects)
    if inst.kind == "unit_disks":
        return math.ceil(hi) - math.floor(lo) + 1
    return int(hi - lo) + 1


def _td_stats(g: Graph, td: TreeDecomposition, lay: Layering | None) -> dict:
    rep = validate_decomposition(g, td)
    s = {"nodes": td.num_nodes, "width": td.width, "valid": rep.ok}
    if rep.ok:
        s["independence_number"] = independence_number(g, td, check=False)
    if lay is not None:
        s["layers"] = lay.num_layers
        s["layering_valid"] = not layering_violations(g, lay)
        s["valid"] = s["valid"] and s["layering_valid"]
        if s["valid"]:
            s["layered_independence_number"] = layered_independence_number(g, td, lay, check=False)
    return s


def _cover_stats(g: Graph, cover: GeneralCover) -> dict:
    problems = cover.problems(g)
    s = {
        "elements": len(cover),
        "beta": str(cover.beta),
        "min_coverage": str(cover.min_coverage(g.n)),
        "bound": cover.bound,
        "valid": not problems,
    }
    if not problems:
        s["independence_number"] = max(
            (independence_number(g, td, check=False, vertices=el) for el, td in zip(cover.elements, cover.decomps)),
            default=0,
        )
    return s


# --------------------------------------------------------------------------
# solving


@dataclass
class SolveOutcome:
    payload: dict
    verdicts: dict[str, bool]
    guarantee: Fraction
    weight: Fraction
    stages: dict[str, int]


def _weights(ld: Loaded, fam: SubgraphFamily) -> tuple[Fraction, ...]:
    if ld.weights is None:
        return tuple(Fraction(1) for _ in fam.members)
    if all(len(m) == 1 for m in fam.members) and len(fam) == ld.graph.n:
        return tuple(ld.weights[m[0]] for m in fam.members)
    return tuple(sum((ld.weights[v] for v in m), Fraction(0)) for m in fam.members)


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


def run_solve(ld: Loaded, mode: str, *, eps=None, r=None, d=None, family="k1", threads=1, verify=True) -> SolveOutcome:
    if mode not in MODES:
        raise CliError(f"unknown mode {mode!r}")
    g = ld.graph
    stages: dict[str, int] = {}
    t0 = time.perf_counter()
    fam = load_family(family, g)
    w = _weights(ld, fam)
    h = max(fam.h_max, 1)
    if r is None and eps is not None:
        r = math.ceil(1 / Fraction(eps)) * h
    stages["family_ms"] = _ms(t0)
    t0 = time.perf_counter()
    if mode == "exact":
        td = ld.td
        if td is None:
            if ld.inst is None:
                raise CliError("exact mode on an abstract graph needs --decomposition")
            td = layered_for(ld)[0] if ld.inst.kind in ("unit_disks", "grid_paths", "rectangles") else trivial_decomposition(g)
        sol = solve_packing(PackingInstance(g, fam, w), td)
        res = ApproxResult(sol, Fraction(1), 0, ((0, sol.weight),))
    elif mode == "ptas-cover":
        if r is None:
            raise CliError("ptas-cover needs --r or --eps")
        if ld.inst is not None and ld.inst.kind in ("disks", "boxes_d") and ld.td is None:
            cover = fat_cover(ld.inst, _profile(ld.inst), r)
        else:
            td, lay, cell = layered_for(ld)
            cover = cover_from_layering(g, td, lay, r, cell)
        stages["cover_ms"] = _ms(t0)
        res = ptas_over_cover(PackingInstance(g, fam, w), cover, r, threads=threads)
    elif mode == "ptas-distance":
        if d is None:
            raise CliError("ptas-distance needs --d")
        if d % 2:
            raise CliError(
                f"distance-{d} packing rejected: for odd d no PTAS exists unless P = NP", code=2
            )
        if r is None:
            raise CliError("ptas-distance needs --r or --eps")
        td, lay, cell = layered_for(ld)
        res = ptas_distance_d(PackingInstance(g, fam, w), td, lay, r, d, ell=cell, threads=threads)
    else:
        if ld.inst is None:
            raise CliError("ptas-shift needs a geometric instance")
        if family != "k1":
            raise CliError("ptas-shift solves weighted independent set only (family k1)")
        if eps is None:
            raise CliError("ptas-shift needs --eps")
        inst = ld.inst
        if inst.kind == "unit_disks" and inst.radius != 1:
            inst = _unit_radius(inst)
        res = shifting_ptas(inst, Fraction(eps), weights=w, threads=threads)
    stages["solve_ms"] = _ms(t0)
    t0 = time.perf_counter()
    verdicts: dict[str, bool] = {}
    chosen = res.solution.chosen
    if verify:
        verdicts["independent"] = verify_packing(g, fam, chosen)
        verdicts["weight_matches"] = res.solution.weight == sum((w[j] for j in chosen), Fraction(0))
        if mode == "ptas-distance":
            verdicts["distance"] = verify_distance_packing(g, fam, chosen, d)
    stages["verify_ms"] = _ms(t0)
    payload = io.approx_to_json(res, timing=False)
    payload["mode"] = mode
    return SolveOutcome(payload, verdicts, res.guarantee, res.solution.weight, stages)


def _unit_radius(inst: GeometricInstance) -> GeometricInstance:
    from .geometry import Ball

    s = 1 / inst.radius
    objs = tuple(Ball(tuple(c * s for c in o.center), Fraction(1)) for o in inst.objects)
    return replace(inst, objects=objs, radius=Fraction(1))


def cmd_solve(args) -> int:
    ld = load_input(args.input, args.decomposition)
    t0 = time.perf_counter()
    out = run_solve(
        ld,
        args.mode,
        eps=args.eps,
        r=args.r,
        d=args.d,
        family=args.family,
        threads=args.threads,
        verify=not args.no_verify,
    )
    result = out.payload
    report = {
        "command": _echo(args),
        "instance_digest": ld.digest,
        "result_digest": _digest(result),
        "timings_ms": dict(out.stages, total_ms=_ms(t0)),
        "verification": out.verdicts,
        "verification_skipped": bool(args.no_verify),
    }
    if args.no_verify:
        report["warning"] = "VERIFICATION DISABLED (--no-verify): timing run only"
    _emit({"result": result, "report": report}, args.out)
    ok = (not args.no_verify) and all(out.verdicts.values())
    return 0 if ok else 1


def _echo(args) -> list[str]:
    return [a for a in sys.argv[1:]] if getattr(args, "_argv", None) is None else args._argv


# --------------------------------------------------------------------------
# bench


def _param_label(p: dict) -> str:
    return ",".join(f"{k}={p[k]}" for k in sorted(p))


def cmd_bench(args) -> int:
    try:
        spec = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read bench spec {args.input}: {exc}")
    cap = int(spec.get("exact_cap", args.exact_cap))
    rows: list[dict] = []
    all_ok = True
    for cell in spec.get("cells", []):
        gen = dict(cell["generator"])
        seeds = cell.get("seeds", [gen.get("seed", 0)])
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        for seed in seeds:
            inst = generate(GenSpec.from_dict(dict(gen, seed=seed)))
            ld = _from_instance(f"{gen['kind']}-n{inst.n}-s{seed}", inst)
            exact = None
            if inst.n <= cap:
                fam = load_family(cell.get("family", "k1"), ld.graph)
                exact = brute_force_packing(ld.graph, fam, _weights(ld, fam), allow_large=True).weight
            for params in cell.get("params", [{}]):
                t0 = time.perf_counter()
                out = run_solve(
                    ld,
                    cell["mode"],
                    eps=params.get("eps"),
                    r=params.get("r"),
                    d=params.get("d"),
                    family=cell.get("family", "k1"),
                    threads=args.threads,
                )
                ms = _ms(t0)
                ratio = None
                if exact is not None:
                    ratio = Fraction(1) if exact == 0 else out.weight / exact
                    out.verdicts["ratio"] = ratio >= out.guarantee
                ok = all(out.verdicts.values())
                all_ok &= ok
                rows.append(
                    {
                        "instance": ld.name,
                        "n": inst.n,
                        "mode": cell["mode"],
                        "param": _param_label(params),
                        "weight": str(out.weight),
                        "exact": "" if exact is None else str(exact),
                        "ratio": "" if ratio is None else f"{float(ratio):.4f}",
                        "ms": ms,
                    }
                )
    csv_text, md_text = _tables(rows)
    if args.out:
        base = Path(args.out)
        base.with_suffix(".csv").write_text(csv_text)
        base.with_suffix(".md").write_text(md_text)
    else:
        sys.stdout.write(csv_text + "\n" + md_text)
    return 0 if all_ok else 1


def _tables(rows: list[dict]) -> tuple[str, str]:
    buf = _io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    wr.writeheader()
    wr.writerows(rows)
    md = ["| " + " | ".join(CSV_COLUMNS) + " |", "|" + "---|" * len(CSV_COLUMNS)]
    md += ["| " + " | ".join(str(r[c]) for c in CSV_COLUMNS) + " |" for r in rows]
    return buf.getvalue(), "\n".join(md) + "\n"


# --------------------------------------------------------------------------
# generate / fixtures


def cmd_generate(args) -> int:
    if args.input:
        try:
            data = json.loads(Path(args.input).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read generator spec {args.input}: {exc}")
    else:
        data = {}
    if args.kind:
        data["kind"] = args.kind
    if args.n is not None:
        data["n"] = args.n
    if args.seed is not None:
        data["seed"] = args.seed
    if "kind" not in data or "n" not in data:
        raise CliError("generate needs a kind and n (spec file or --kind/--n)")
    try:
        inst = generate(GenSpec.from_dict(data))
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid generator spec: {exc}")
    _emit(io.instance_to_json(inst), args.out)
    return 0


def cmd_fixtures(args) -> int:
    if not args.name:
        print("\n".join(fixture_names()))
        return 0
    fx = fixture(args.name)
    if isinstance(fx.payload, GeometricInstance):
        data = io.instance_to_json(fx.payload)
    else:
        data = io.graph_to_json(fx.payload)
    _emit({"name": fx.name, "facts": fx.facts, "payload": data} if args.with_facts else data, args.out)
    return 0


def _emit(data: Any, out: str | None) -> None:
    text = io.dumps(data)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treealpha", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_input=True):
        sp.add_argument("--input", required=need_input, help="graph/instance JSON or fixture:<name>")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, help="seed (echoed; used by generate)")
        sp.add_argument("--threads", type=int, default=1)

    dp = sub.add_parser("decompose", help="build and measure a decomposition or cover")
    common(dp)
    dp.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    dp.add_argument("--decomposition", help="decomposition JSON for abstract graphs")
    dp.add_argument("--ell", type=int, help="width parameter (grid_layered, narrow_strip)")
    dp.add_argument("--r", type=int, help="cover parameter (layer_cover r, fat_cover r0)")
    dp.add_argument("--d", type=int, help="power radius for the power construction")
    dp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("solve", help="exact or approximate packing")
    common(sp)
    sp.add_argument("--mode", required=True, choices=MODES)
    sp.add_argument("--eps", type=Fraction)
    sp.add_argument("--r", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--family", default="k1", help="k1, k2, k1k2 or explicit:<file>")
    sp.add_argument("--construction", choices=CONSTRUCTIONS, help="accepted for symmetry; solve picks per kind")
    sp.add_argument("--decomposition", help="decomposition JSON (with layering for PTAS modes)")
    sp.add_argument("--exact-cap", type=int, default=40)
    sp.add_argument("--no-verify", action="store_true", help="skip verification (timing runs only)")
    sp.set_defaults(func=cmd_solve)

    bp = sub.add_parser("bench", help="run a benchmark matrix")
    common(bp)
    bp.add_argument("--exact-cap", type=int, default=40)
    bp.set_defaults(func=cmd_bench)

    gp = sub.add_parser("generate", help="write a seeded random instance")
    common(gp, need_input=False)
    gp.add_argument("--kind")
    gp.add_argument("--n", type=int)
    gp.set_defaults(func=cmd_generate)

    fp = sub.add_parser("fixtures", help="list fixtures, or export one with --name")
    fp.add_argument("--name")
    fp.add_argument("--out")
    fp.add_argument("--with-facts", action="store_true")
    fp.set_defaults(func=cmd_fixtures)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args._argv = argv
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except OddDistanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
