"""Lifts of patterns to the universal cover, height functions, ranges and slopes."""

from __future__ import annotations

import csv
import io
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

from .cover import CoverVertex, cover_distance, step_toward
from .errors import InvalidInputError, PreconditionError, UnsupportedGraphError
from .graphcore import Graph, analyze_graph
from .pattern import Pattern, Region, Site, l1, validate_pattern

__all__ = [
    "LiftPattern",
    "SlopeEstimate",
    "require_four_cycle_free",
    "lift",
    "height",
    "range_",
    "sphere",
    "slope_period",
    "slope_estimate",
    "height_matrix_csv",
    "range_table",
    "range_table_csv",
]

_C4_FREE_CACHE: dict[Graph, bool] = {}


def require_four_cycle_free(g: Graph) -> None:
    ok = _C4_FREE_CACHE.get(g)
    if ok is None:
        ok = analyze_graph(g).four_cycle_free
        _C4_FREE_CACHE[g] = ok
    if not ok:
        raise UnsupportedGraphError("not four-cycle free")


def _tree_diameter(points: Sequence[tuple[str, ...]]) -> int:
    """Diameter of a finite set in a tree metric by double sweep."""
    if len(points) <= 1:
        return 0

    def dist(a, b):
        k = 0
        for x, y in zip(a, b):
            if x != y:
                break
            k += 1
        return len(a) + len(b) - 2 * k

    a = points[0]
    b = max(points, key=lambda q: dist(a, q))
    return max(dist(b, q) for q in points)


class LiftPattern:
    """A pattern together with its lift to the universal cover."""

    __slots__ = ("pattern", "anchor", "walks")

    def __init__(self, pattern: Pattern, anchor: tuple[Site, CoverVertex], walks: dict[Site, tuple[str, ...]]):
        self.pattern = pattern
        self.anchor = anchor
        self.walks = walks

    @property
    def base(self) -> str:
        return self.anchor[1].base

    def __getitem__(self, s: Site) -> CoverVertex:
        return CoverVertex(self.walks[self.pattern.region.normalize(s)])

    @property
    def cells(self) -> dict[Site, CoverVertex]:
        return {s: CoverVertex(w) for s, w in self.walks.items()}

    def height(self, i: Site, j: Site) -> int:
        return cover_distance(self[i], self[j])

    def range_(self, sites: Iterable[Site]) -> int:
        pts = [self.walks[self.pattern.region.normalize(s)] for s in sites]
        return _tree_diameter(pts)

    def image(self) -> set[CoverVertex]:
        return {CoverVertex(w) for w in self.walks.values()}

    def to_json(self) -> dict:
        return {
            "anchor": {"site": list(self.anchor[0]), "vertex": self.anchor[1].to_json()},
            "cells": [[list(s), list(w)] for s, w in self.walks.items()],
        }


def lift(
    p: Pattern,
    anchor_site: Site | None = None,
    anchor_vertex: CoverVertex | None = None,
    rng: random.Random | None = None,
) -> LiftPattern:
    """Lift ``p`` to the universal cover, extending the given anchor.

    Defaults: the first site of the region, lifted to the root of the cover
    based at its symbol. With ``rng`` the traversal order is shuffled; the
    result does not depend on it.
    """
    require_four_cycle_free(p.graph)
    region = p.region
    bad = validate_pattern(p)
    if bad:
        raise PreconditionError(f"pattern is not valid at sites {bad[0][0]} ~ {bad[0][1]}")
    if not region.is_connected():
        raise InvalidInputError("lift needs a connected region")
    if anchor_site is None:
        anchor_site = region.sites()[0]
    anchor_site = region.normalize(anchor_site)
    if anchor_site not in region:
        raise InvalidInputError(f"anchor site {anchor_site} is outside the region")
    if anchor_vertex is None:
        anchor_vertex = CoverVertex((p.cells[anchor_site],))
    if anchor_vertex.proj != p.cells[anchor_site]:
        raise InvalidInputError(
            f"anchor vertex projects to {anchor_vertex.proj!r}, pattern has {p.cells[anchor_site]!r}"
        )
    walks = {anchor_site: anchor_vertex.walk}
    cells = p.cells
    queue = deque([anchor_site])
    while queue:
        if rng is not None and len(queue) > 1:
            k = rng.randrange(len(queue))
            queue[0], queue[k] = queue[k], queue[0]
        s = queue.popleft()
        here = walks[s]
        nbrs = region.neighbors(s)
        if rng is not None:
            nbrs = list(nbrs)
            rng.shuffle(nbrs)
        for t in nbrs:
            want = step_toward(here, cells[t])
            have = walks.get(t)
            if have is None:
                walks[t] = want
                queue.append(t)
            elif have != want:
                raise PreconditionError(f"pattern has no lift: inconsistent values around site {t}")
    ordered = {s: walks[s] for s in region.sites()}
    return LiftPattern(p, (anchor_site, anchor_vertex), ordered)


def height(p: Pattern, i: Site, j: Site) -> int:
    return lift(p).height(i, j)


def range_(p: Pattern, sites: Iterable[Site]) -> int:
    """Largest height between two sites of ``sites``; the diameter of their lifted image."""
    sites = list(sites)
    for s in sites:
        if s not in p.region:
            raise InvalidInputError(f"site {s} is outside the pattern's region")
    return lift(p).range_(sites)


def sphere(radius: int, d: int, center: Site | None = None) -> list[Site]:
    """Sites at l1 distance exactly ``radius`` from ``center``."""
    center = center or (0,) * d
    return [s for s in Region.diamond(radius, d, center).sites() if l1(s, center) == radius]


# --- slopes ---------------------------------------------------------------------

@dataclass
class SlopeEstimate:
    direction: tuple[int, ...]
    period: int
    values: list[float]
    heights: list[int]
    upper_bound: float
    converged: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "direction": list(self.direction),
            "period": self.period,
            "values": self.values,
            "heights": self.heights,
            "upper_bound": self.upper_bound,
            "converged": self.converged,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, obj) -> "SlopeEstimate":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            direction=tuple(obj["direction"]),
            period=int(obj["period"]),
            values=list(obj["values"]),
            heights=list(obj["heights"]),
            upper_bound=obj["upper_bound"],
            converged=bool(obj["converged"]),
            note=obj.get("note", ""),
        )


def slope_period(extents: Sequence[int], direction: Sequence[int]) -> int:
    """Smallest N > 0 with N * direction = 0 on the torus."""
    per_axis = [e // math.gcd(e, abs(c)) for e, c in zip(extents, direction) if c != 0]
    return reduce(math.lcm, per_axis, 1)


def _path_walk(p: Pattern, target: Site) -> tuple[str, ...]:
    """Reduced label walk along an axis-by-axis lattice path from the origin to ``target``."""
    pos = [0] * len(target)
    walk: tuple[str, ...] = (p[tuple(pos)],)
    for k, c in enumerate(target):
        step = 1 if c > 0 else -1
        for _ in range(abs(c)):
            pos[k] += step
            walk = step_toward(walk, p[tuple(pos)])
    return walk


def slope_estimate(p: Pattern, direction: Sequence[int], depth: int = 8) -> SlopeEstimate:
    """Per-step height growth along ``direction`` for the periodic configuration on a torus.

    ``values[m-1] = h(0, m N direction) / (m N)`` with N the torus period of
    the direction. Heights along multiples of a period are subadditive, so the
    running minimum is an upper bound for the limiting slope.
    """
    direction = tuple(int(c) for c in direction)
    if p.region.kind != "torus":
        raise InvalidInputError("slope_estimate needs a torus pattern")
    if len(direction) != p.region.d:
        raise InvalidInputError("direction has the wrong dimension")
    if not any(direction):
        raise InvalidInputError("direction must be non-zero")
    if depth < 1:
        raise InvalidInputError("depth must be at least 1")
    require_four_cycle_free(p.graph)
    bad = validate_pattern(p)
    if bad:
        raise PreconditionError(f"pattern is not valid at sites {bad[0][0]} ~ {bad[0][1]}")
    N = slope_period(p.region.extents, direction)
    # height along a lattice path is path-independent, so walking the
    # unrolled torus axis by axis gives h(0, v) exactly
    values, heights = [], []
    for m in range(1, depth + 1):
        target = tuple(m * N * c for c in direction)
        h = len(_path_walk(p, target)) - 1
        heights.append(h)
        values.append(h / (m * N))
    converged = depth >= 2 and values[-1] == values[-2]
    note = "last two values agree" if converged else "not converged at this depth"
    return SlopeEstimate(direction, N, values, heights, min(values), converged, note)


# --- exports ----------------------------------------------------------------------

def height_matrix_csv(lp: LiftPattern, sites: Sequence[Site] | None = None) -> str:
    """Pairwise heights as CSV; the header row and column list sites as ``i;j;...``."""
    sites = list(sites) if sites is not None else list(lp.pattern.region.sites())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [";".join(map(str, s)) for s in sites]
    w.writerow(["site"] + names)
    for s, name in zip(sites, names):
        w.writerow([name] + [lp.height(s, t) for t in sites])
    return buf.getvalue()


def range_table(lp: LiftPattern, center: Site | None = None) -> list[tuple[int, int, int]]:
    """Rows ``(m, Range on D_m, Range on the sphere of radius m)`` for every m the region fully contains."""
    region = lp.pattern.region
    d = region.d
    center = center or (0,) * d
    rows = []
    m = 0
    while True:
        ball = Region.diamond(m, d, center).sites()
        if not all(s in region for s in ball):
            break
        rows.append((m, lp.range_(ball), lp.range_(sphere(m, d, center))))
        m += 1
    return rows


def range_table_csv(lp: LiftPattern, center: Site | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["radius", "range_ball", "range_sphere"])
    for row in range_table(lp, center):
        w.writerow(row)
    return buf.getvalue()
