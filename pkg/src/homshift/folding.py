"""Graph folds, full folds down to a stiff graph, fixing maps and patching.

A vertex ``v`` folds into ``w`` when ``N(v)`` is contained in ``N(w)``; every
occurrence of ``v`` in a valid pattern can then be replaced by ``w``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cover import CoverVertex, cover_subgraph, step_toward
from .errors import (
    InvalidInputError,
    InvalidParameterError,
    NothingToFoldError,
    ParityError,
    PreconditionError,
    RangeTooLargeError,
    UnsupportedGraphError,
)
from .graphcore import Graph, analyze_graph, bfs_distances, graph_from_json, graph_to_json, shortest_path
from .height import lift, require_four_cycle_free
from .pattern import Pattern, Region, Site, _reflect, l1, validate_pattern

__all__ = [
    "FoldStep",
    "FoldSequence",
    "fold_candidates",
    "full_config_fold",
    "fold_to_stiff",
    "apply_fold_outside",
    "onion_fix",
    "retract_tree",
    "parity_walk",
    "PatchResult",
    "patch",
]


@dataclass(frozen=True)
class FoldStep:
    """One full fold: ``removed`` vertices are sent to ``target`` inside ``remaining``.

    ``source`` is the graph before the fold.
    """

    removed: tuple[str, ...]
    target: Mapping[str, str]
    remaining: Graph
    source: Graph

    def apply(self, v: str) -> str:
        return self.target.get(v, v)

    def to_json(self) -> dict:
        return {
            "removed": list(self.removed),
            "target": dict(self.target),
            "remaining": graph_to_json(self.remaining),
        }


@dataclass(frozen=True)
class FoldSequence:
    steps: tuple[FoldStep, ...]
    stiff: Graph
    fold_radius: int
    classification: str

    def collapse(self, v: str) -> str:
        """Image of ``v`` under the composition of all steps."""
        for step in self.steps:
            v = step.apply(v)
        return v

    def to_json(self) -> dict:
        return {
            "source": graph_to_json(self.steps[0].source) if self.steps else graph_to_json(self.stiff),
            "steps": [s.to_json() for s in self.steps],
            "stiff": graph_to_json(self.stiff),
            "fold_radius": self.fold_radius,
            "classification": self.classification,
        }

    @classmethod
    def from_json(cls, obj) -> "FoldSequence":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            current = graph_from_json(obj["source"])
            steps = []
            for item in obj["steps"]:
                remaining = graph_from_json(item["remaining"])
                steps.append(FoldStep(tuple(item["removed"]), dict(item["target"]), remaining, current))
                current = remaining
            return cls(tuple(steps), graph_from_json(obj["stiff"]), int(obj["fold_radius"]), obj["classification"])
        except KeyError as exc:
            raise InvalidInputError(f"fold sequence JSON: missing field {exc.args[0]!r}") from None

    def trace(self) -> str:
        lines = []
        for i, step in enumerate(self.steps, 1):
            moves = ", ".join(f"{v}->{step.target[v]}" for v in step.removed)
            lines.append(f"step {i}: {moves}; {len(step.remaining)} vertices remain")
        lines.append(f"stiff graph: vertices {list(self.stiff.vertices)}, edges {self.stiff.edge_list()}")
        lines.append(f"fold radius {self.fold_radius}, classification {self.classification}")
        return "\n".join(lines)


def _folds_into(g: Graph, v: str, w: str) -> bool:
    return g.neighbors(v) <= g.neighbors(w)


def fold_candidates(g: Graph) -> list[tuple[str, str]]:
    """All ordered pairs ``(v, w)``, ``v != w``, with ``N(v) <= N(w)``."""
    return [(v, w) for v in g.vertices for w in g.vertices if v != w and _folds_into(g, v, w)]


def full_config_fold(g: Graph) -> FoldStep:
    """A maximal disjoint fold, chosen canonically.

    M holds the vertices that only fold into vertices folding back; within M
    the mutual-fold classes keep their first member. Everything else is
    removed, and vertices outside M go to the first kept vertex that
    dominates them.
    """
    cands = fold_candidates(g)
    if not cands:
        raise NothingToFoldError("graph is stiff: no vertex folds into another")
    out: dict[str, list[str]] = {v: [] for v in g.vertices}
    for v, w in cands:
        out[v].append(w)
    M = [v for v in g.vertices if all(_folds_into(g, w, v) for w in out[v])]
    in_m = set(M)
    rep: dict[str, str] = {}
    for v in M:
        if v in rep:
            continue
        rep[v] = v
        for w in out[v]:
            if w in in_m and w not in rep:
                rep[w] = v
    kept = [v for v in M if rep[v] == v]
    target: dict[str, str] = {}
    for v in g.vertices:
        if v in in_m:
            if rep[v] != v:
                target[v] = rep[v]
        else:
            target[v] = next(w for w in kept if _folds_into(g, v, w))
    removed = tuple(v for v in g.vertices if v in target)
    return FoldStep(removed, target, g.remove(removed), g)


def _classify(g: Graph) -> str:
    if len(g) == 2 and len(g.edges) == 1 and not any(g.has_loop(v) for v in g.vertices):
        return "edge"
    if len(g) == 1 and g.has_loop(g.vertices[0]):
        return "looped-vertex"
    return "other"


def fold_to_stiff(g: Graph) -> FoldSequence:
    steps = []
    current = g
    while fold_candidates(current):
        step = full_config_fold(current)
        steps.append(step)
        current = step.remaining
    return FoldSequence(tuple(steps), current, len(steps), _classify(current))


# --- fixing maps -------------------------------------------------------------------

def _outer_shell(region: Region, sites: set[Site]) -> set[Site]:
    """``sites`` together with their neighbours inside the region."""
    out = set(sites)
    for s in sites:
        out.update(region.neighbors(s))
    return out


def apply_fold_outside(p: Pattern, step: FoldStep, fixed: Iterable[Site]) -> Pattern:
    """Keep ``p`` on ``fixed`` and apply the fold everywhere else in the region.

    The pattern may live over a larger graph than the fold's source, but the
    cells off ``fixed`` and their neighbours must use source symbols.
    """
    fixed = {p.region.normalize(s) for s in fixed}
    moving = {s for s in p.region.sites() if s not in fixed}
    bad = validate_pattern(p)
    if bad:
        raise PreconditionError(f"pattern is not valid at sites {bad[0][0]} ~ {bad[0][1]}")
    src = step.source
    for s in _outer_shell(p.region, moving):
        if p.cells[s] not in src:
            raise PreconditionError(
                f"symbol {p.cells[s]!r} at site {s} is not in the graph being folded"
            )
    out = Pattern(p.graph, p.region, {s: (v if s in fixed else step.apply(v)) for s, v in p.cells.items()})
    bad = validate_pattern(out)
    if bad:
        raise PreconditionError(f"fold output invalid at sites {bad[0][0]} ~ {bad[0][1]}")
    return out


def onion_fix(
    p: Pattern,
    n: int,
    direction: str = "inward",
    sequence: FoldSequence | None = None,
    center: Site | None = None,
) -> Pattern:
    """Compose fold steps on nested diamonds around ``center``.

    inward: step i applies outside D_{n+i}, so D_n is untouched.
    outward: step i applies on D_{n-i}, so everything outside D_n is untouched; needs n > r.
    ``sequence`` defaults to :func:`fold_to_stiff` of the pattern's graph.
    """
    if direction not in ("inward", "outward"):
        raise InvalidParameterError(f"direction must be 'inward' or 'outward', not {direction!r}")
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    seq = sequence if sequence is not None else fold_to_stiff(p.graph)
    r = seq.fold_radius
    if direction == "outward" and n <= r:
        raise InvalidParameterError(f"outward fixing needs n > fold radius ({n} <= {r})")
    center = tuple(center) if center is not None else (0,) * p.region.d
    dist = {s: l1(s, center) for s in p.region.sites()}
    out = p
    for i, step in enumerate(seq.steps):
        if direction == "inward":
            fixed = [s for s, m in dist.items() if m <= n + i]
        else:
            fixed = [s for s, m in dist.items() if m > n - i]
        out = apply_fold_outside(out, step, fixed)
    return out


# --- patching -----------------------------------------------------------------------

def retract_tree(tree: Graph, keep: Iterable[str]) -> dict[str, str]:
    """A retraction of a finite tree onto the subtree spanned by ``keep``.

    Leaves outside the subtree are folded one at a time (lexicographically
    first leaf, into its parent's first other neighbour). Returns a map on
    all vertices that is the identity on the subtree and a homomorphism.
    """
    keep = set(keep)
    alive = set(tree.vertices)
    image = {v: v for v in tree.vertices}
    while True:
        leaves = sorted(
            (v for v in alive if v not in keep and len(tree.neighbors(v) & alive) == 1),
            key=tree.index,
        )
        if not leaves:
            break
        leaf = leaves[0]
        (parent,) = tuple(tree.neighbors(leaf) & alive)
        other = next(w for w in tree.sorted_neighbors(parent) if w in alive and w != leaf)
        alive.discard(leaf)
        for v, img in image.items():
            if img == leaf:
                image[v] = other
    return image


def _spanning_subtree(tree: Graph, points: set[str]) -> set[str]:
    """Minimal subtree of ``tree`` containing ``points``: prune non-point leaves."""
    alive = set(tree.vertices)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if v not in points and len(tree.neighbors(v) & alive) <= 1:
                alive.discard(v)
                changed = True
    return alive


def _odd_closed_walk(g: Graph, v: str) -> list[str] | None:
    """Shortest closed walk of odd length through ``v`` (BFS on the bipartite double cover)."""
    start, goal = (v, 0), (v, 1)
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for w in g.sorted_neighbors(u[0]):
            nxt = (w, 1 - u[1])
            if nxt not in prev:
                prev[nxt] = u
                queue.append(nxt)
    if goal not in prev:
        return None
    path = []
    u = goal
    while u is not None:
        path.append(u[0])
        u = prev[u]
    return path[::-1]


def parity_walk(g: Graph, start: str, end: str, length: int) -> list[str]:
    """A walk with exactly ``length`` edges from ``start`` to ``end`` in a connected graph.

    Built as shortest path to a vertex on a shortest odd cycle, that cycle
    when parity requires it, shortest path on to ``end``, then back-and-forth
    padding at ``end``.
    """
    report = analyze_graph(g)
    if not report.connected:
        raise UnsupportedGraphError("patching needs a connected graph")
    dist_start = bfs_distances(g, start)
    pad_to = g.sorted_neighbors(end)[0]
    if report.bipartite:
        base = shortest_path(g, start, end)
        if (length - (len(base) - 1)) % 2:
            raise ParityError(f"no walk of length {length} from {start!r} to {end!r}: wrong partite classes")
        cycle = None
    else:
        walks = {v: _odd_closed_walk(g, v) for v in g.vertices}
        girth = min(len(w) - 1 for w in walks.values())
        pivot_v = min(
            (v for v in g.vertices if len(walks[v]) - 1 == girth),
            key=lambda v: (dist_start[v], g.index(v)),
        )
        cycle = walks[pivot_v]
        p2 = shortest_path(g, start, pivot_v)
        p3 = shortest_path(g, pivot_v, end)
        base = p2 + p3[1:]
        if (length - (len(base) - 1)) % 2:
            base = p2 + cycle[1:] + p3[1:]
    slack = length - (len(base) - 1)
    if slack < 0:
        raise PreconditionError(f"walk of length {length} too short to join {start!r} and {end!r}")
    walk = list(base)
    for _ in range(slack // 2):
        walk += [pad_to, end]
    return walk


@dataclass
class PatchResult:
    z: Pattern
    shifted: bool
    v1: str
    w1: str
    walk: list[str]
    radii: dict[str, int]


def _require_window(p: Pattern, radius: int, label: str) -> None:
    if p.region.kind != "box":
        raise InvalidInputError(f"{label} must be a box pattern")
    lo = p.region.origin
    hi = [o + e - 1 for o, e in zip(lo, p.region.extents)]
    if any(a > -radius or b < radius for a, b in zip(lo, hi)):
        raise PreconditionError(f"{label} must be given on a box containing [-{radius}, {radius}]^d")


def _cover_pattern(graph: Graph, labels: dict[tuple, str], region: Region, walks: Mapping[Site, tuple]) -> Pattern:
    return Pattern(graph, region, {s: labels[walks[s]] for s in region.sites()})


def patch(x: Pattern, y: Pattern, n: int, k: int, allow_shift: bool = False, full: bool = False):
    """A valid pattern agreeing with ``x`` on D_n and with ``y`` outside D_R, R = (d+1)n + 3|H| + k.

    ``y`` must have range at most 2k on the sphere of radius R+1 and live on a
    box containing D_{R+1}; ``x`` must contain [-n, n]^d (shifted by e_1 when
    the shift is used). For bipartite graphs with x_0 and y_0 in different
    partite classes the construction uses ``x`` shifted by e_1 when
    ``allow_shift`` is set and raises :class:`ParityError` otherwise.

    Returns the pattern on y's region, or a :class:`PatchResult` with ``full``.
    """
    g = x.graph
    if y.graph != g:
        raise InvalidInputError("x and y must use the same graph")
    require_four_cycle_free(g)
    if not analyze_graph(g).connected:
        raise UnsupportedGraphError("patching needs a connected graph")
    if n < 1:
        raise InvalidParameterError("n must be at least 1")
    if k < 0:
        raise InvalidParameterError("k must be non-negative")
    d = x.region.d
    if y.region.d != d:
        raise InvalidInputError("x and y have different dimensions")
    r = len(g)
    R = (d + 1) * n + 3 * r + k
    _require_window(y, R + 1, "y")
    origin = (0,) * d

    # step 1: lift y, retract its image near D_{R+1} onto the subtree spanned by the boundary ring
    ly = lift(y, origin)
    inner_ring = {s for s in y.region.sites() if l1(s) == R + 1}
    ball = [s for s in y.region.sites() if l1(s) <= R + 1]
    ring_walks = {ly.walks[s] for s in inner_ring}
    rng = ly.range_(inner_ring)
    if rng > 2 * k:
        raise RangeTooLargeError(f"range of y on the sphere of radius {R + 1} is {rng} > 2k = {2 * k}")
    tree_prime, label_map = cover_subgraph(CoverVertex(ly.walks[s]) for s in ball)
    walk_label = {v.walk: lab for lab, v in label_map.items()}
    points = {walk_label[w] for w in ring_walks}
    span = _spanning_subtree(tree_prime, points)
    if len(span) == 1:
        (only,) = span
        span.add(tree_prime.sorted_neighbors(only)[0])
    retraction = retract_tree(tree_prime, span)
    tree = tree_prime.induced(span)
    ball_region = Region.diamond(R + 1, d)
    y1 = Pattern(tree, ball_region, {s: retraction[walk_label[ly.walks[s]]] for s in ball_region.sites()})
    y1 = onion_fix(y1, R, "outward")
    v_ring = {y1.cells[s] for s in ball_region.sites() if l1(s) == (d + 1) * n + 3 * r + 1}
    if len(v_ring) != 1:
        raise AssertionError("outward fixing did not produce a constant ring")
    v1_lab = v_ring.pop()
    y_prime = {s: label_map[y1.cells[s]].proj for s in ball_region.sites()}

    # step 2: periodic reflection of x's lift on B_n, inward fixing to a constant ring
    def constant_extension(shift: bool):
        off = (1,) + (0,) * (d - 1) if shift else origin
        core = [tuple(c + o for c, o in zip(s, off)) for s in Region.centered_box(n, d).sites()]
        for s in core:
            if s not in x.region:
                raise PreconditionError(f"x must be given on [-{n}, {n}]^d" + (" shifted by e_1" if shift else ""))
        xs = Pattern(g, Region.centered_box(n, d), {
            tuple(c - o for c, o in zip(s, off)): x.cells[s] for s in core
        })
        lx = lift(xs, origin)
        tree_t, lab_t = cover_subgraph(CoverVertex(w) for w in lx.walks.values())
        inv = {v.walk: lab for lab, v in lab_t.items()}
        outer = Region.diamond((d + 1) * n, d)
        ext = Pattern(tree_t, outer, {
            s: inv[lx.walks[tuple(_reflect(c, -n, n) for c in s)]] for s in outer.sites()
        })
        ext = onion_fix(ext, n, "inward")
        w_ring = {ext.cells[s] for s in outer.sites() if l1(s) == (d + 1) * n}
        if len(w_ring) != 1:
            raise AssertionError("inward fixing did not produce a constant ring")
        w_lab = w_ring.pop()
        return {s: lab_t[ext.cells[s]].proj for s in outer.sites()}, lab_t[w_lab].proj

    v1 = label_map[v1_lab].proj
    shifted = False
    x_prime, w1 = constant_extension(False)
    try:
        walk = parity_walk(g, w1, v1, 3 * r + 1)
    except ParityError:
        if not allow_shift:
            raise ParityError("x_0 and y_0 lie in different partite classes; request the e_1 shift") from None
        shifted = True
        x_prime, w1 = constant_extension(True)
        walk = parity_walk(g, w1, v1, 3 * r + 1)

    # step 3: constant rings along the walk between the two constructions
    inner = (d + 1) * n
    cells = {}
    for s in y.region.sites():
        m = l1(s)
        if m <= inner:
            cells[s] = x_prime[s]
        elif m <= inner + 3 * r + 1:
            cells[s] = walk[m - inner]
        elif m <= R + 1:
            cells[s] = y_prime[s]
        else:
            cells[s] = y.cells[s]
    z = Pattern(g, y.region, cells)
    bad = validate_pattern(z)
    if bad:
        raise AssertionError(f"patched pattern invalid at {bad[0]}")
    if not full:
        return z
    return PatchResult(z, shifted, v1, w1, walk, {"R": R, "inner": inner})
