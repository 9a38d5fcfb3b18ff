import math
import random
from fractions import Fraction as F

import pytest

from treealpha import (
    GeneralCover,
    GenSpec,
    OddDistanceError,
    PackingInstance,
    brute_force_packing,
    build_graph,
    cover_from_layering,
    enumerate_family,
    generate,
    grid_paths,
    intersection_graph,
    make_layering,
    path_decomposition,
    ptas_distance_d,
    ptas_over_cover,
    rectangles,
    shift_parameters,
    shifting_ptas,
    singleton_family,
    solve_packing,
    trivial_decomposition,
    unit_disk_layered_decomposition,
    unit_disks,
    verify_distance_packing,
    verify_packing,
)

from conftest import oracle_packing, random_graph

K2 = build_graph(2, [(0, 1)])


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def mwis(g, w):
    return brute_force_packing(g, singleton_family(g.n), w, allow_large=True).weight


def test_full_element_cover_is_exact():
    rng = random.Random(1)
    for _ in range(20):
        g = random_graph(rng, 10, 0.3)
        w = [F(rng.randint(1, 5)) for _ in range(g.n)]
        cover = GeneralCover((tuple(range(g.n)),), (trivial_decomposition(g),), F(1))
        res = ptas_over_cover(PackingInstance(g, singleton_family(g.n), w), cover, 1)
        assert res.solution.weight == mwis(g, w)
        assert res.guarantee == 0


def test_cover_pipeline_unit_disks_r4():
    for seed in range(15):
        inst = generate(GenSpec("unit_disks", 30, seed=seed, extent=F(8), weighted=True))
        g = intersection_graph(inst)
        td, lay = unit_disk_layered_decomposition(inst)
        cover = cover_from_layering(g, td, lay, 4, ell=8)
        w = inst.vertex_weights()
        res = ptas_over_cover(PackingInstance(g, singleton_family(g.n), w), cover, 4)
        assert res.guarantee == F(3, 4)
        assert res.solution.verified
        assert res.solution.weight >= F(3, 4) * mwis(g, w)
        assert res.solution.weight == max(x for _, x in res.per_element)


def test_cover_pipeline_induced_matching():
    for seed in range(15):
        inst = generate(GenSpec("unit_disks", 12, seed=seed, extent=F(5)))
        g = intersection_graph(inst)
        fam = enumerate_family(g, [K2], 2)
        if not len(fam):
            continue
        td, lay = unit_disk_layered_decomposition(inst)
        cover = cover_from_layering(g, td, lay, 8, ell=8)
        w = [F(1)] * len(fam)
        res = ptas_over_cover(PackingInstance(g, fam, w), cover, 8)
        assert res.guarantee == F(3, 4)
        assert verify_packing(g, fam, res.solution.chosen)
        assert res.solution.weight >= F(3, 4) * oracle_packing(g, fam.members, w)


def test_cover_checks_generality():
    g = path(4)
    bad = GeneralCover(((0, 1),), (path_decomposition([[0, 1]]),), F(1, 2))
    with pytest.raises(ValueError):
        ptas_over_cover(PackingInstance(g, singleton_family(4), [1] * 4), bad, 2)


def test_distance_two_equals_cover_run():
    for seed in range(10):
        inst = generate(GenSpec("unit_disks", 25, seed=seed, extent=F(6)))
        g = intersection_graph(inst)
        td, lay = unit_disk_layered_decomposition(inst)
        pi = PackingInstance(g, singleton_family(g.n), [1] * g.n)
        a = ptas_distance_d(pi, td, lay, 3, 2, ell=8)
        b = ptas_over_cover(pi, cover_from_layering(g, td, lay, 3, ell=8), 3)
        assert a == b


def test_distance_four_on_p10():
    g = path(10)
    td = path_decomposition([[i, i + 1] for i in range(9)])
    lay = make_layering(range(10))
    fam = singleton_family(10)
    w = [F(1)] * 10
    res = ptas_distance_d(PackingInstance(g, fam, w), td, lay, 5, 4)
    assert verify_distance_packing(g, fam, res.solution.chosen, 4)
    assert res.solution.weight >= F(4, 5) * oracle_packing(g, fam.members, w, d=4)


@pytest.mark.parametrize("d", [1, 3, 5])
def test_odd_distance_rejected(d):
    g = path(4)
    pi = PackingInstance(g, singleton_family(4), [1] * 4)
    with pytest.raises(OddDistanceError):
        ptas_distance_d(pi, path_decomposition([[0, 1], [1, 2], [2, 3]]), make_layering(range(4)), 3, d)


def test_shift_parameters():
    assert shift_parameters(unit_disks([(0, 0)], radius=1), F(1, 2)) == (4, 1, 4)
    assert shift_parameters(rectangles([(0, 0, 2, 1)]), F(1, 3)) == (3, 2, 6)
    with pytest.raises(ValueError):
        shift_parameters(unit_disks([(0, 0)]), F(1, 2))
    with pytest.raises(ValueError):
        shift_parameters(rectangles([(0, 0, 2, 1)]), F(1))


def test_shifting_single_window_is_exact():
    # everything fits strictly between two cutting lines for some shift
    inst = rectangles([(0, 0, 1, 1), (0, 2, 1, 3), (1, 1, 1, 2), (0, 4, 0, 5)])
    g = intersection_graph(inst)
    res = shifting_ptas(inst, F(1, 4))
    assert res.solution.weight == mwis(g, [1] * g.n)


@pytest.mark.parametrize("kind", ["unit_disks", "rectangles", "grid_paths"])
def test_shifting_ratio_and_dominance(kind):
    for seed in range(12):
        if kind == "unit_disks":
            spec = GenSpec(kind, 30, seed=seed, extent=F(10), radius=F(1), weighted=True)
        elif kind == "rectangles":
            spec = GenSpec(kind, 30, seed=seed, size_min=F(0), size_max=F(2), height_max=1, weighted=True)
        else:
            spec = GenSpec(kind, 30, seed=seed, size_min=F(0), size_max=F(2), weighted=True)
        inst = generate(spec)
        g = intersection_graph(inst)
        eps = F(1, 2) if kind == "unit_disks" else F(1, 3)
        res = shifting_ptas(inst, eps, debug=True)
        assert res.solution.verified
        assert res.solution.weight == max(x for _, x in res.per_element)
        assert res.solution.weight >= (1 - eps) * mwis(g, inst.vertex_weights())
        assert len(res.per_element) == shift_parameters(inst, eps)[2]


def test_threads_do_not_change_results():
    inst = generate(GenSpec("unit_disks", 35, seed=3, extent=F(9)))
    g = intersection_graph(inst)
    td, lay = unit_disk_layered_decomposition(inst)
    pi = PackingInstance(g, singleton_family(g.n), [1] * g.n)
    cover = cover_from_layering(g, td, lay, 4, ell=8)
    assert ptas_over_cover(pi, cover, 4, threads=1) == ptas_over_cover(pi, cover, 4, threads=4)
    big = generate(GenSpec("unit_disks", 35, seed=3, extent=F(9), radius=F(1)))
    assert shifting_ptas(big, F(1, 2), threads=1) == shifting_ptas(big, F(1, 2), threads=3)
