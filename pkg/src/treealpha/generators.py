"""Seeded random instances and curated fixtures.

Randomness comes from Python's :class:`random.Random`, i.e. the MT19937
Mersenne Twister seeded with the integer ``seed``. Every coordinate is an
integer multiple of ``1/denominator`` (default ``1/256``), so instances are
exact and reproducible across platforms.
"""
from __future__ import annotations

import random
import re
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Any

from .geometry import (
    GeometricInstance,
    boxes,
    disks,
    grid_paths,
    rectangles,
    unit_disks,
)
from .graph import Graph, build_graph

__all__ = ["PRNG_NAME", "GenSpec", "generate", "Fixture", "fixture", "fixture_names"]

PRNG_NAME = "MT19937 (Python random.Random)"
MAX_DENOMINATOR = 2 ** 16


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one random instance.

    ``extent`` is the side of the square (cube) holding centres or anchors.
    ``size_min``/``size_max`` bound radii (disks), side lengths (boxes),
    rectangle widths or the horizontal part of grid paths; ``height_max``
    bounds rectangle heights and vertical path segments. ``radius`` is the
    common radius of unit disks. ``bends`` caps bend-points per path.
    """

    kind: str
    n: int
    seed: int = 0
    extent: Fraction = Fraction(10)
    size_min: Fraction = Fraction(1)
    size_max: Fraction = Fraction(2)
    height_max: int = 4
    radius: Fraction = Fraction(1)
    bends: int = 2
    mode: str = "v"
    d: int = 2
    aspect: Fraction = Fraction(2)
    denominator: int = 256
    weighted: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GenSpec":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown GenSpec fields {sorted(unknown)}")
        kw = dict(data)
        for name in ("extent", "size_min", "size_max", "radius", "aspect"):
            if name in kw:
                kw[name] = Fraction(kw[name])
        return cls(**kw)


def _check(spec: GenSpec) -> None:
    if spec.n < 1:
        raise ValueError("n must be at least 1")
    if not 1 <= spec.denominator <= MAX_DENOMINATOR:
        raise ValueError(f"denominator must lie in 1..{MAX_DENOMINATOR}")
    if spec.extent < 0:
        raise ValueError("extent must be non-negative")
    if spec.size_min < 0 or spec.size_min > spec.size_max:
        raise ValueError("need 0 <= size_min <= size_max")
    if spec.kind == "grid_paths":
        if spec.mode not in ("e", "v"):
            raise ValueError("mode must be 'e' or 'v'")
        if spec.bends < 0:
            raise ValueError("bends must be non-negative")
        if spec.size_max < 1 and spec.bends > 0:
            raise ValueError("bends need horizontal room: size_max is 0")
        if spec.size_max < 1 and spec.height_max < 1:
            raise ValueError("paths need room to move in some direction")


def _rat(rng: random.Random, lo: Fraction, hi: Fraction, den: int) -> Fraction:
    a = -((-lo * den) // 1)
    b = (hi * den) // 1
    if b < a:
        raise ValueError(f"no multiple of 1/{den} in [{lo}, {hi}]")
    return Fraction(rng.randint(int(a), int(b)), den)


def _path(rng: random.Random, spec: GenSpec) -> list[tuple[int, int]]:
    hmax = int(spec.size_max)
    span = int(spec.extent)
    x0, y = rng.randint(0, span), rng.randint(0, span)
    x = x0
    pts = [(x, y)]
    segments = rng.randint(1, spec.bends + 1)
    horizontal = hmax >= 1 and (spec.height_max < 1 or rng.random() < 0.5)
    for _ in range(segments):
        if horizontal:
            nx = rng.choice([v for v in range(x0, x0 + hmax + 1) if v != x])
            x = nx
        else:
            y += rng.choice((-1, 1)) * rng.randint(1, spec.height_max)
        pts.append((x, y))
        if hmax >= 1 and spec.height_max >= 1:
            horizontal = not horizontal
    return pts


def generate(spec: GenSpec) -> GeometricInstance:
    """Deterministic instance for ``spec``."""
    _check(spec)
    rng = random.Random(spec.seed)
    den = spec.denominator
    n = spec.n
    zero, ext = Fraction(0), spec.extent
    if spec.kind == "unit_disks":
        pts = [(_rat(rng, zero, ext, den), _rat(rng, zero, ext, den)) for _ in range(n)]
        inst = unit_disks(pts, spec.radius)
    elif spec.kind == "disks":
        ctrs, radii = [], []
        for _ in range(n):
            ctrs.append(tuple(_rat(rng, zero, ext, den) for _ in range(spec.d)))
            radii.append(_rat(rng, spec.size_min, spec.size_max, den))
        inst = disks(ctrs, radii)
    elif spec.kind == "rectangles":
        span, wmin, wmax = int(ext), int(spec.size_min), int(spec.size_max)
        rects = []
        for _ in range(n):
            x, y = rng.randint(0, span), rng.randint(0, span)
            rects.append((x, y, x + rng.randint(wmin, wmax), y + rng.randint(0, spec.height_max)))
        inst = rectangles(rects)
    elif spec.kind == "boxes_d":
        los, his = [], []
        for _ in range(n):
            lo = tuple(_rat(rng, zero, ext, den) for _ in range(spec.d))
            side = _rat(rng, max(spec.size_min, Fraction(1, den)), spec.size_max, den)
            short = side / spec.aspect
            sides = [_rat(rng, short, side, den) if j else side for j in range(spec.d)]
            rng.shuffle(sides)
            los.append(lo)
            his.append(tuple(a + s for a, s in zip(lo, sides)))
        inst = boxes(los, his)
    elif spec.kind == "grid_paths":
        inst = grid_paths([_path(rng, spec) for _ in range(n)], spec.mode)
    else:
        raise ValueError(f"unknown kind {spec.kind!r}")
    if spec.weighted:
        inst = replace(inst, weights=tuple(Fraction(rng.randint(1, 10)) for _ in range(n)))
    return inst


# --------------------------------------------------------------------------
# fixtures


@dataclass(frozen=True)
class Fixture:
    name: str
    payload: Any
    facts: dict = field(default_factory=dict)


def _cycle(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def _k44_vpg() -> GeometricInstance:
    rows = [[(0, y), (3, y)] for y in range(4)]
    cols = [[(x, -1), (x, 4)] for x in range(4)]
    return grid_paths(rows + cols, "v")


_STATIC = {
    "c5": lambda: Fixture("c5", _cycle(5), {"mwis": 2, "n": 5}),
    "k33": lambda: Fixture(
        "k33", build_graph(6, [(i, j) for i in range(3) for j in range(3, 6)]), {"mwis": 3, "n": 6}
    ),
    "k44_vpg": lambda: Fixture("k44_vpg", _k44_vpg(), {"mwis": 4, "n": 8, "biclique": 4}),
}


def fixture_names() -> list[str]:
    return sorted(_STATIC) + ["p<n>", "tangent_chain_<n>"]


def fixture(name: str) -> Fixture:
    """Curated instance plus hand-checked facts (``mwis`` is the unit-weight optimum)."""
    if name in _STATIC:
        return _STATIC[name]()
    m = re.fullmatch(r"p(\d+)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("paths need at least one vertex")
        return Fixture(name, build_graph(n, [(i, i + 1) for i in range(n - 1)]), {"mwis": (n + 1) // 2, "n": n})
    m = re.fullmatch(r"tangent_chain_(\d+)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("chains need at least one disk")
        inst = unit_disks([(i, 0) for i in range(n)], Fraction(1, 2))
        return Fixture(name, inst, {"mwis": (n + 1) // 2, "n": n})
    raise ValueError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
