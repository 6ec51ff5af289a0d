"""Pivot chains between patterns with a common frame, and a brute-force move-graph oracle."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cover import CoverVertex, cover_distance
from .errors import InvalidInputError, PreconditionError
from .graphcore import Graph
from .height import lift, require_four_cycle_free
from .pattern import Pattern, Region, Site, fill_array, l1, pattern_from_json, pattern_to_json, validate_pattern

__all__ = [
    "PivotChain",
    "ReconfigReport",
    "frame_sites",
    "pivot_chain",
    "lift_distance_sum",
    "pivot_components",
    "is_frozen_window",
]


@dataclass
class PivotChain:
    """``patterns[0]`` is the start; each later pattern changes one site of its predecessor."""

    patterns: list[Pattern]
    deltas: list[tuple[Site, str, str]]

    def __len__(self) -> int:
        return len(self.deltas)

    @property
    def start(self) -> Pattern:
        return self.patterns[0]

    @property
    def end(self) -> Pattern:
        return self.patterns[-1]

    def verify(self, frame: list[Site] | None = None) -> None:
        """Check the chain invariants; raises :class:`AssertionError` on failure."""
        for k, p in enumerate(self.patterns):
            if validate_pattern(p):
                raise AssertionError(f"pattern {k} of the chain is invalid")
            if k:
                diff = self.patterns[k - 1].differences(p)
                if len(diff) != 1 or diff[0] != self.deltas[k - 1][0]:
                    raise AssertionError(f"step {k} does not change exactly the recorded site")
            if frame is not None and any(p.cells[s] != self.start.cells[s] for s in frame):
                raise AssertionError(f"pattern {k} changes the frame")

    def to_json(self, graph_ref: str | None = None) -> dict:
        return {
            "initial": pattern_to_json(self.start, graph_ref),
            "deltas": [[list(s), old, new] for s, old, new in self.deltas],
        }

    @classmethod
    def from_json(cls, obj, base_dir=None, graph: Graph | None = None) -> "PivotChain":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            current = pattern_from_json(obj["initial"], base_dir=base_dir, graph=graph)
            deltas_in = obj["deltas"]
        except KeyError as exc:
            raise InvalidInputError(f"pivot chain JSON: missing field {exc.args[0]!r}") from None
        patterns, deltas = [current], []
        for k, item in enumerate(deltas_in):
            site, old, new = tuple(item[0]), item[1], item[2]
            if current.cells.get(site) != old:
                raise InvalidInputError(f"pivot chain JSON: delta {k} does not match the pattern")
            current = current.with_cells({site: new})
            patterns.append(current)
            deltas.append((site, old, new))
        return cls(patterns, deltas)


def frame_sites(region: Region, width: int = 2) -> list[Site]:
    """Sites of a box within ``width`` layers of its faces."""
    if region.kind != "box":
        raise InvalidInputError("frames are defined for box regions")
    lo = region.origin
    hi = [o + e - 1 for o, e in zip(lo, region.extents)]
    return [
        s for s in region.sites()
        if any(c - a < width or b - c < width for c, a, b in zip(s, lo, hi))
    ]


def _check_pair(x: Pattern, y: Pattern, frame_width: int) -> list[Site]:
    if x.graph != y.graph:
        raise InvalidInputError("x and y must use the same graph")
    if x.region != y.region:
        raise InvalidInputError("x and y must live on the same region")
    require_four_cycle_free(x.graph)
    for name, p in (("x", x), ("y", y)):
        bad = validate_pattern(p)
        if bad:
            raise PreconditionError(f"{name} is not valid at sites {bad[0][0]} ~ {bad[0][1]}")
    frame = frame_sites(x.region, frame_width)
    for s in frame:
        if x.cells[s] != y.cells[s]:
            raise InvalidInputError(f"x and y disagree on the boundary frame at site {s}")
    return frame


def _common_lifts(x: Pattern, y: Pattern, frame: list[Site]):
    anchor = frame[0] if frame else x.region.sites()[0]
    root = CoverVertex((x.cells[anchor],))
    return anchor, root, lift(x, anchor, root), lift(y, anchor, root)


def lift_distance_sum(x: Pattern, y: Pattern, frame_width: int = 2) -> int:
    """Sum over sites of the cover distance between the lifts of x and y (common frame anchor)."""
    frame = _check_pair(x, y, frame_width)
    _, _, lx, ly = _common_lifts(x, y, frame)
    return sum(cover_distance(lx[s], ly[s]) for s in x.region.sites())


def pivot_chain(x: Pattern, y: Pattern, frame_width: int = 2) -> PivotChain:
    """A chain of single-site changes from ``x`` to ``y`` that never touches the frame.

    Both patterns are lifted with a common anchor on the frame. While the
    lifts differ, the disagreeing site whose lifted value lies farthest from
    the anchor (on whichever side attains the larger maximum; x on ties,
    then the smallest site) moves two steps along the tree geodesic toward
    the other lift's value. Each move is a pivot and lowers the summed lift
    distance by 2.
    """
    frame = _check_pair(x, y, frame_width)
    anchor, root, lx, ly = _common_lifts(x, y, frame)
    X = dict(lx.walks)
    Y = dict(ly.walks)
    for s in frame:
        if X[s] != Y[s]:
            raise AssertionError("lifts disagree on the frame")
    x_moves: list[tuple[Site, tuple, tuple]] = []
    y_moves: list[tuple[Site, tuple, tuple]] = []
    B = {s for s in X if X[s] != Y[s]}
    while B:
        mx = max(len(X[s]) for s in B)
        my = max(len(Y[s]) for s in B)
        if mx >= my:
            mover, other, log, depth = X, Y, x_moves, mx
        else:
            mover, other, log, depth = Y, X, y_moves, my
        i0 = min(s for s in B if len(mover[s]) == depth)
        here, there = mover[i0], other[i0]
        k = 0
        for a, b in zip(here, there):
            if a != b:
                break
            k += 1
        # geodesic from here goes up to the common prefix, then down toward there
        path = [here[:m] for m in range(len(here), k - 1, -1)] + [there[:m] for m in range(k + 1, len(there) + 1)]
        new = path[2]
        log.append((i0, here, new))
        mover[i0] = new
        if new == other[i0]:
            B.discard(i0)

    patterns = [x]
    deltas = []
    cur = x
    for s, old, new in x_moves:
        cur = cur.with_cells({s: new[-1]})
        patterns.append(cur)
        deltas.append((s, old[-1], new[-1]))
    # the y-side moves, replayed backwards, lead from the meeting point to y
    for s, old, new in reversed(y_moves):
        cur = cur.with_cells({s: old[-1]})
        patterns.append(cur)
        deltas.append((s, new[-1], old[-1]))
    if cur.cells != y.cells:
        raise AssertionError("pivot chain does not end at y")
    return PivotChain(patterns, deltas)


# --- move-graph oracle ---------------------------------------------------------------

@dataclass
class ReconfigReport:
    component_count: int
    component_sizes: list[int]
    witness_pair: tuple[Pattern, Pattern] | None
    moves_radius: int
    total: int
    sites: tuple[Site, ...] = field(repr=False, default=())
    fillings: np.ndarray | None = field(repr=False, default=None)
    labels: np.ndarray | None = field(repr=False, default=None)
    graph: Graph | None = field(repr=False, default=None)

    def component_of(self, p: Pattern) -> int:
        """Index of the component containing the completion ``p``."""
        row = np.array([self.graph.index(p.cells[s]) for s in self.sites], dtype=self.fillings.dtype)
        hits = np.nonzero((self.fillings == row).all(axis=1))[0]
        if not len(hits):
            raise InvalidInputError("pattern is not one of the enumerated completions")
        return int(self.labels[hits[0]])

    def to_json(self, graph_ref: str | None = None) -> dict:
        return {
            "component_count": self.component_count,
            "component_sizes": self.component_sizes,
            "moves_radius": self.moves_radius,
            "total": self.total,
            "witness_pair": None if self.witness_pair is None
            else [pattern_to_json(p, graph_ref) for p in self.witness_pair],
        }


def _move_masks(region: Region, sites, moves_radius: int) -> list[np.ndarray]:
    index = {s: i for i, s in enumerate(sites)}
    if moves_radius <= 1:
        return [np.array([i]) for i in range(len(sites))]
    box = region.bounding_box() if region.kind != "torus" else region
    masks = {}
    for c in box.sites():
        ball = Region.diamond(moves_radius, region.d, c).sites()
        idx = tuple(sorted(index[region.normalize(s)] for s in ball if s in region))
        if idx:
            masks[idx] = None
    return [np.array(m) for m in masks]


def pivot_components(
    g: Graph,
    region: Region,
    boundary: Pattern | None,
    moves_radius: int = 1,
    limit: int = 2_000_000,
) -> ReconfigReport:
    """Connected components of the move graph on all valid completions.

    Two completions are joined when they differ only at one site
    (``moves_radius`` 0 or 1) or only inside a single translate of the
    diamond D_{moves_radius}.
    """
    if moves_radius < 0:
        raise InvalidInputError("moves_radius must be non-negative")
    sites, A = fill_array(g, region, boundary, limit=limit)
    N = len(A)
    if N == 0:
        return ReconfigReport(0, [], None, moves_radius, 0, sites, A, np.zeros(0, dtype=np.int64), g)
    q = len(g)
    # columns fixed across all completions never separate two rows
    free = np.nonzero((A != A[0]).any(axis=0))[0]
    col = np.full(len(sites), -1)
    col[free] = np.arange(len(free))
    F = A[:, free].astype(np.int64)
    packed = q ** len(free) < 2 ** 62
    if packed:
        weights = np.array([q ** (len(free) - 1 - i) for i in range(len(free))], dtype=np.int64)
        codes = F @ weights
    rows_i, rows_j = [np.arange(N)], [np.arange(N)]
    for mask in _move_masks(region, sites, moves_radius):
        mask = col[mask]
        mask = mask[mask >= 0]
        if not len(mask):
            continue
        # completions agreeing off the mask share a key; join each to its group's first row
        if packed:
            key = codes - F[:, mask] @ weights[mask]
            _, first, inv = np.unique(key, return_index=True, return_inverse=True)
        else:
            keep = np.setdiff1d(np.arange(len(free)), mask)
            _, first, inv = np.unique(F[:, keep], axis=0, return_index=True, return_inverse=True)
        rows_i.append(np.arange(N))
        rows_j.append(first[inv.reshape(-1)])
    ii = np.concatenate(rows_i)
    jj = np.concatenate(rows_j)
    graph = coo_matrix((np.ones(len(ii), dtype=np.int8), (ii, jj)), shape=(N, N))
    count, labels = connected_components(graph, directed=False)
    sizes = np.bincount(labels, minlength=count)
    order = sorted(range(count), key=lambda c: -sizes[c])
    witness = None
    if count > 1:
        a = int(np.nonzero(labels == order[0])[0][0])
        b = int(np.nonzero(labels == order[1])[0][0])
        witness = tuple(
            Pattern(g, region, {s: g.vertices[v] for s, v in zip(sites, A[row])}) for row in (a, b)
        )
    return ReconfigReport(
        component_count=int(count),
        component_sizes=[int(sizes[c]) for c in order],
        witness_pair=witness,
        moves_radius=moves_radius,
        total=N,
        sites=sites,
        fillings=A,
        labels=labels,
        graph=g,
    )


def is_frozen_window(p: Pattern) -> bool:
    """True iff no interior site can take another symbol while keeping its neighbours satisfied."""
    g = p.graph
    region = p.region
    for s in region.interior():
        nbrs = [p.cells[t] for t in region.neighbors(s)]
        for v in g.vertices:
            if v != p.cells[s] and all(g.adjacent(v, u) for u in nbrs):
                if s in region.neighbors(s) and not g.has_loop(v):
                    continue
                return False
    return True
