"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are written
straight to the terminal regardless of output capture.
"""
from __future__ import annotations

import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

from treealpha import (
    GenSpec,
    OddDistanceError,
    PackingInstance,
    brute_force_packing,
    build_graph,
    cover_from_layering,
    enumerate_family,
    fat_cover,
    fat_cover_ratio,
    fatness_constant,
    generate,
    grid_layered_bound,
    grid_path_layered_decomposition,
    grid_paths,
    independence_number,
    intersection_graph,
    layered_independence_number,
    layering_violations,
    make_family,
    narrow_strip_bound,
    narrow_strip_decomposition,
    power_decomposition,
    ptas_distance_d,
    ptas_over_cover,
    rectangles,
    shifting_ptas,
    singleton_family,
    solve_packing,
    unit_disk_layered_decomposition,
    unit_disks,
    validate_decomposition,
    verify_distance_packing,
    verify_packing,
    verify_power_identity,
)
from treealpha import io

from conftest import oracle_packing, random_decomposition, random_graph

SEEDS = 100
EPSILONS = (F(1, 2), F(1, 3), F(1, 4))
K1, K2 = build_graph(1, []), build_graph(2, [(0, 1)])


@pytest.fixture
def report(capsys):
    def emit(num: int, title: str, failures: list, detail: str, t0: float) -> None:
        verdict = "PASS" if not failures else "FAIL"
        line = f"[criterion {num}] {verdict} {title}: {detail} ({time.perf_counter() - t0:.1f}s)"
        with capsys.disabled():
            print("\n" + line)
            for f in failures[:10]:
                print(f"    - {f}")
        assert not failures, line

    return emit


def _weights(rng: random.Random, m: int) -> list[F]:
    return [F(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(m)]


# --------------------------------------------------------------------------
# 1. exact solver vs brute force


def test_criterion_1_exact_solver_oracle(report):
    t0 = time.perf_counter()
    failures, count = [], 0
    for seed in range(200):
        rng = random.Random(seed)
        g = random_graph(rng, rng.randint(1, 14), rng.uniform(0.1, 0.5))
        fam = enumerate_family(g, rng.choice([[K1], [K2], [K1, K2]]), 2)
        if len(fam) == 0:
            fam = singleton_family(g.n)
        if len(fam) > 25:
            fam = make_family(g, rng.sample(list(fam.members), 25))
        w = _weights(rng, len(fam))
        td = random_decomposition(g, rng, pad=rng.random() * 0.4)
        if not validate_decomposition(g, td).ok:
            failures.append(f"seed {seed}: generated decomposition invalid")
            continue
        got = solve_packing(PackingInstance(g, fam, w), td, debug=True)
        ref = brute_force_packing(g, fam, w)
        count += 1
        if got.weight != ref.weight or not verify_packing(g, fam, got.chosen):
            failures.append(f"seed {seed}: dp {got.weight} vs brute force {ref.weight}")
    report(1, "solve_packing == brute_force_packing", failures, f"{count} instances, n<=14, h<=2", t0)


# --------------------------------------------------------------------------
# shared construction runs for criteria 2-4


def _confined_paths(seed: int, ell: int, mode: str, n: int):
    """Paths translated so that each starts in column 0: they use at most ell columns."""
    spec = GenSpec(
        "grid_paths", n, seed=seed, extent=F(12), size_min=F(0), size_max=F(ell - 1),
        bends=2 if ell > 1 else 0, mode=mode,
    )
    inst = generate(spec)
    moved = []
    for p in inst.objects:
        x0 = min(x for x, _ in p.points)
        moved.append([(x - x0, y) for x, y in p.points])
    return grid_paths(moved, mode)


def _check_td(g, td, lay, where, failures):
    rep = validate_decomposition(g, td)
    if not rep.ok:
        failures.append(f"{where}: {rep.summary()}")
        return False
    if lay is not None and layering_violations(g, lay):
        failures.append(f"{where}: layering edge condition violated")
        return False
    return True


def _run_constructions():
    """Every construction on >= 100 seeds; returns (validity, bound, coverage) failures and stats."""
    validity, bounds, coverage = [], [], []
    stats: dict[str, tuple[int, int]] = {}

    def note(key, measured, bound):
        # keep the pair closest to its bound
        best, b = stats.get(key, (0, bound))
        if F(measured, bound) > F(best, b):
            stats[key] = (measured, bound)
        else:
            stats[key] = (best, b)
        if measured > bound:
            bounds.append(f"{key}: measured {measured} > bound {bound}")

    for seed in range(SEEDS):
        rng = random.Random(10_000 + seed)
        # unit disks
        n = rng.randint(1, 100)
        inst = generate(GenSpec("unit_disks", n, seed=seed, extent=F(rng.randint(3, 12))))
        g = intersection_graph(inst)
        td, lay = unit_disk_layered_decomposition(inst)
        if _check_td(g, td, lay, f"unit disks seed {seed}", validity):
            k = layered_independence_number(g, td, lay, check=False)
            note("unit_disk_layered", k, 8)
            # powers
            for d in (1, 2):
                gp, tdp, layp = power_decomposition(g, td, lay, d)
                if _check_td(gp, tdp, layp, f"power d={d} seed {seed}", validity):
                    note(f"power d={d}", layered_independence_number(gp, tdp, layp, check=False), (1 + 4 * d) * k)
            # layer covers
            for r in range(2, 7):
                cover = cover_from_layering(g, td, lay, r, ell=k)
                probs = cover.problems(g)
                if probs:
                    validity.append(f"layer cover r={r} seed {seed}: {probs[0]}")
                    continue
                if len(cover) != r or cover.coverage_counts(g.n) != [r - 1] * g.n:
                    coverage.append(f"layer cover r={r} seed {seed}: coverage not exactly {r - 1}/{r}")
                worst = max(
                    independence_number(g, etd, check=False, vertices=el)
                    for el, etd in zip(cover.elements, cover.decomps)
                )
                note(f"cover_from_layering r={r}", worst, k * (r - 1))

        # grid paths, both contact modes, ell = 1, 2, 3
        for ell in (1, 2, 3):
            for mode in ("v", "e"):
                spec = GenSpec(
                    "grid_paths", rng.randint(1, 100), seed=seed, extent=F(rng.randint(4, 12)),
                    size_min=F(0), size_max=F(ell - 1), bends=2 if ell > 1 else 0, mode=mode,
                )
                inst = generate(spec)
                g = intersection_graph(inst)
                td, lay = grid_path_layered_decomposition(inst, ell, g)
                if _check_td(g, td, lay, f"grid {mode} ell={ell} seed {seed}", validity):
                    note(f"grid_layered {mode} ell={ell}", layered_independence_number(g, td, lay, check=False), 4 * ell - 1)

        # narrow strips: paths (both modes), rectangles, disks
        ell = rng.randint(1, 5)
        for mode in ("v", "e"):
            inst = _confined_paths(seed, ell, mode, rng.randint(1, 100))
            g = intersection_graph(inst)
            td = narrow_strip_decomposition(inst, ell, g)
            if _check_td(g, td, None, f"narrow {mode} seed {seed}", validity):
                bound = ell if mode == "v" else 3 * ell - 1
                assert narrow_strip_bound(inst, ell) == bound
                note(f"narrow_strip paths {mode}", independence_number(g, td, check=False), bound)
        ell_r = rng.randint(2, 7)
        rects = []
        for _ in range(rng.randint(1, 100)):
            x1 = rng.randint(0, ell_r - 2)
            x2 = rng.randint(x1 + 1, ell_r - 1)
            y1 = rng.randint(0, 30)
            rects.append((x1, y1, x2, y1 + rng.randint(0, 3)))
        inst = rectangles(rects)
        g = intersection_graph(inst)
        td = narrow_strip_decomposition(inst, ell_r, g)
        if _check_td(g, td, None, f"narrow rectangles seed {seed}", validity):
            note("narrow_strip rectangles", independence_number(g, td, check=False), ell_r // 2)
        c = rng.randint(1, 3)
        ell_d = 2 * c + 1 + rng.randint(0, 6)
        ctrs = [
            (F(rng.randint(16 * c, 16 * (ell_d - 1 - c)), 16), F(rng.randint(0, 16 * 30), 16))
            for _ in range(rng.randint(1, 100))
        ]
        inst = unit_disks(ctrs, radius=c)
        g = intersection_graph(inst)
        td = narrow_strip_decomposition(inst, ell_d, g)
        if _check_td(g, td, None, f"narrow disks seed {seed}", validity):
            note("narrow_strip disks", independence_number(g, td, check=False), 2 * math.ceil(F(ell_d, c)))

        # fat covers, r0 in {2, 3}, d = 2
        for r0 in (2, 3):
            inst = generate(
                GenSpec("disks", rng.randint(1, 60), seed=seed, extent=F(10), size_min=F(1, 16), size_max=F(3))
            )
            g = intersection_graph(inst)
            prof = fatness_constant("balls", 2)
            cover = fat_cover(inst, prof, r0)
            probs = cover.problems(g)
            if probs:
                validity.append(f"fat cover r0={r0} seed {seed}: {probs[0]}")
                continue
            r = fat_cover_ratio(r0, 2)
            if any(F(cnt, len(cover)) < 1 - F(1, r0) for cnt in cover.coverage_counts(g.n)):
                coverage.append(f"fat cover r0={r0} seed {seed}: coverage below {1 - F(1, r0)}")
            worst = max(
                independence_number(g, etd, check=False, vertices=el)
                for el, etd in zip(cover.elements, cover.decomps)
            )
            note(f"fat_cover r0={r0}", worst, prof.c * r ** 4)
    return validity, bounds, coverage, stats


@pytest.fixture(scope="module")
def construction_runs():
    t0 = time.perf_counter()
    out = _run_constructions()
    return out, t0


def test_criterion_2_construction_validity(construction_runs, report):
    (validity, _, _, stats), t0 = construction_runs
    report(2, "T1/T2/T3 and layering validity", validity, f"{len(stats)} construction cells x {SEEDS} seeds", t0)


def test_criterion_3_bounds(construction_runs, report):
    (_, bounds, _, stats), t0 = construction_runs
    detail = "; ".join(f"{k} {m}<={b}" for k, (m, b) in sorted(stats.items()))
    report(3, "measured bounds", bounds, detail, t0)


def test_criterion_4_coverage(construction_runs, report):
    (_, _, coverage, _), t0 = construction_runs
    report(4, "cover fractions", coverage, f"layer covers exact (r-1)/r for r=2..6; fat covers >= 1-1/r0", t0)


# --------------------------------------------------------------------------
# 5. PTAS ratios


def _ptas_instance(kind: str, seed: int):
    rng = random.Random(20_000 + seed)
    n = rng.randint(20, 40)
    if kind == "unit_disks":
        return generate(GenSpec(kind, n, seed=seed, extent=F(rng.randint(8, 16)), radius=F(1), weighted=True))
    if kind == "rectangles":
        return generate(
            GenSpec(kind, n, seed=seed, extent=F(rng.randint(6, 12)), size_min=F(0), size_max=F(2),
                    height_max=2, weighted=True)
        )
    return generate(
        GenSpec(kind, n, seed=seed, extent=F(rng.randint(6, 12)), size_min=F(0), size_max=F(2),
                mode="v" if seed % 2 == 0 else "e", weighted=True)
    )


def _layered(inst, g):
    if inst.kind == "unit_disks":
        td, lay = unit_disk_layered_decomposition(inst)
        return td, lay, 8
    td, lay = grid_path_layered_decomposition(inst, 3, g)
    return td, lay, grid_layered_bound(inst, 3)


def test_criterion_5_ptas_ratio(report):
    t0 = time.perf_counter()
    failures, runs, worst = [], 0, {}
    for kind in ("unit_disks", "rectangles", "grid_paths"):
        for seed in range(SEEDS):
            inst = _ptas_instance(kind, seed)
            g = intersection_graph(inst)
            w = inst.vertex_weights()
            fam = singleton_family(g.n)
            opt = brute_force_packing(g, fam, w, allow_large=True).weight
            td, lay, ell = _layered(inst, g)
            for eps in EPSILONS:
                r = math.ceil(1 / eps)  # h = 1
                pi = PackingInstance(g, fam, w)
                results = {
                    "cover": ptas_over_cover(pi, cover_from_layering(g, td, lay, r, ell), r),
                    "shift": shifting_ptas(inst, eps),
                    "distance2": ptas_distance_d(pi, td, lay, r, 2, ell=ell),
                }
                for name, res in results.items():
                    runs += 1
                    got = res.solution.weight
                    ratio = got / opt if opt else F(1)
                    key = (kind, name)
                    worst[key] = min(worst.get(key, F(1)), ratio)
                    if not verify_packing(g, fam, res.solution.chosen) or got != sum(w[v] for v in res.solution.chosen):
                        failures.append(f"{kind} seed {seed} eps {eps} {name}: infeasible solution")
                    if got < (1 - eps) * opt:
                        failures.append(f"{kind} seed {seed} eps {eps} {name}: {got} < (1-{eps})*{opt}")
                    if got != max(x for _, x in res.per_element):
                        failures.append(f"{kind} seed {seed} eps {eps} {name}: not best of elements")
    detail = f"{runs} runs; worst ratios " + ", ".join(
        f"{k}/{p}={float(v):.3f}" for (k, p), v in sorted(worst.items())
    )
    report(5, "PTAS weight >= (1-eps) OPT", failures, detail, t0)


# --------------------------------------------------------------------------
# 6. power identity


def test_criterion_6_power_identity(report):
    t0 = time.perf_counter()
    failures = []
    for seed in range(SEEDS):
        rng = random.Random(30_000 + seed)
        g = random_graph(rng, rng.randint(1, 12), rng.uniform(0.1, 0.5))
        k, d = rng.choice((1, 2)), rng.choice((1, 2))
        if not verify_power_identity(g, k, d):
            failures.append(f"seed {seed}: identity fails for k={k}, d={d}")
    report(6, "G^(k+2d) equals G^k of the ball family", failures, f"{SEEDS} graphs, n<=12, k,d in {{1,2}}", t0)


# --------------------------------------------------------------------------
# 7. distance-4 end to end


def test_criterion_7_distance_four(report):
    t0 = time.perf_counter()
    failures, worst = [], F(1)
    for seed in range(SEEDS):
        rng = random.Random(40_000 + seed)
        n = rng.randint(5, 25)
        inst = generate(GenSpec("unit_disks", n, seed=seed, extent=F(rng.randint(4, 12)), weighted=True))
        g = intersection_graph(inst)
        w = list(inst.vertex_weights())
        fam = singleton_family(n)
        td, lay = unit_disk_layered_decomposition(inst)
        res = ptas_distance_d(PackingInstance(g, fam, w), td, lay, 5, 4, ell=8)
        opt = oracle_packing(g, fam.members, w, d=4)
        got = res.solution.weight
        worst = min(worst, got / opt if opt else F(1))
        if not (res.solution.verified and verify_distance_packing(g, fam, res.solution.chosen, 4)):
            failures.append(f"seed {seed}: not a verified distance-4 packing")
        if got < F(4, 5) * opt:
            failures.append(f"seed {seed}: {got} < 4/5 * {opt}")
    try:
        ptas_distance_d(PackingInstance(g, fam, w), td, lay, 5, 3, ell=8)
        failures.append("d = 3 was not rejected")
    except OddDistanceError:
        pass
    report(7, "distance-4 PTAS >= 4/5 OPT, d=3 rejected", failures, f"{SEEDS} instances, worst ratio {float(worst):.3f}", t0)


# --------------------------------------------------------------------------
# 8. determinism of every command


def _cli(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "treealpha", *args], cwd=cwd, capture_output=True, text=True, timeout=600
    )


def _payload(command: str, out: Path, stdout: str) -> str:
    if command == "solve":
        return io.dumps(json.loads(out.read_text())["result"])
    if command == "bench":
        rows = out.with_suffix(".csv").read_text().splitlines()
        return "\n".join(",".join(r.split(",")[:-1]) for r in rows)
    if command == "fixtures-list":
        return stdout
    return out.read_text()


def test_criterion_8_determinism(tmp_path, report):
    t0 = time.perf_counter()
    ud = tmp_path / "ud.json"
    ud.write_text(io.dumps(io.instance_to_json(generate(GenSpec("unit_disks", 30, seed=5, extent=F(8))))))
    gp = tmp_path / "gp.json"
    gp.write_text(io.dumps(io.instance_to_json(
        generate(GenSpec("grid_paths", 30, seed=5, size_min=F(0), size_max=F(2), mode="e")))))
    dk = tmp_path / "dk.json"
    dk.write_text(io.dumps(io.instance_to_json(generate(GenSpec("disks", 25, seed=5)))))
    bench = tmp_path / "bench.json"
    bench.write_text(json.dumps({"cells": [
        {"generator": {"kind": "unit_disks", "n": 15, "extent": "6"}, "seeds": 2, "mode": "ptas-cover",
         "params": [{"r": 2}, {"r": 4}]},
        {"generator": {"kind": "rectangles", "n": 15, "size_min": "0", "size_max": "2"}, "seeds": 2,
         "mode": "ptas-shift", "params": [{"eps": "1/3"}]},
    ]}))
    commands = [
        ("generate", ["generate", "--kind", "unit_disks", "--n", "20", "--seed", "3"]),
        ("fixtures", ["fixtures", "--name", "k44_vpg", "--with-facts"]),
        ("fixtures-list", ["fixtures"]),
        ("decompose", ["decompose", "--input", str(ud), "--construction", "unit_disk_layered"]),
        ("decompose", ["decompose", "--input", str(gp), "--construction", "grid_layered"]),
        ("decompose", ["decompose", "--input", str(gp), "--construction", "narrow_strip"]),
        ("decompose", ["decompose", "--input", str(ud), "--construction", "power", "--d", "1"]),
        ("decompose", ["decompose", "--input", str(ud), "--construction", "layer_cover", "--r", "3"]),
        ("decompose", ["decompose", "--input", str(dk), "--construction", "fat_cover", "--r", "2"]),
        ("solve", ["solve", "--input", "fixture:c5", "--mode", "exact"]),
        ("solve", ["solve", "--input", str(ud), "--mode", "exact"]),
        ("solve", ["solve", "--input", str(ud), "--mode", "ptas-cover", "--eps", "1/3"]),
        ("solve", ["solve", "--input", str(ud), "--mode", "ptas-shift", "--eps", "1/2", "--threads", "RUN"]),
        ("solve", ["solve", "--input", str(ud), "--mode", "ptas-distance", "--d", "4", "--r", "5"]),
        ("solve", ["solve", "--input", str(gp), "--mode", "ptas-cover", "--eps", "1/2", "--family", "k1k2"]),
        ("solve", ["solve", "--input", str(dk), "--mode", "ptas-cover", "--r", "2"]),
        ("bench", ["bench", "--input", str(bench)]),
    ]
    failures = []
    for idx, (command, args) in enumerate(commands):
        seen = []
        for run in (1, 2):
            out = tmp_path / f"out{idx}_{run}.json"
            argv = [a if a != "RUN" else str(run * 2) for a in args]
            if command != "fixtures-list":
                argv += ["--out", str(out.with_suffix("") if command == "bench" else out)]
            res = _cli(*argv, cwd=tmp_path)
            if res.returncode != 0:
                failures.append(f"{' '.join(args)}: exit {res.returncode}: {res.stderr.strip()[:200]}")
                break
            seen.append(_payload(command, out.with_suffix(".csv") if command == "bench" else out, res.stdout))
        if len(seen) == 2 and seen[0] != seen[1]:
            failures.append(f"{' '.join(args)}: payloads differ between runs")
    report(8, "byte-identical payloads on re-run", failures, f"{len(commands)} commands run twice", t0)
