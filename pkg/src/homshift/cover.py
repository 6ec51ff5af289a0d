"""The universal cover of a graph as a lazy tree of reduced walks.

A cover vertex is a non-backtracking walk starting at a fixed base vertex;
its projection is the walk's last entry. Two cover vertices are adjacent
when one walk extends the other by a single step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInputError
from .graphcore import Graph, analyze_graph

__all__ = [
    "CoverVertex",
    "make_vertex",
    "root",
    "step_toward",
    "cover_neighbors",
    "reduce_walk",
    "reduce_concat",
    "cover_distance",
    "cover_geodesic",
    "deck_transform",
    "cover_ball",
    "cover_is_finite",
    "cover_subgraph",
]

Walk = tuple[str, ...]


@dataclass(frozen=True, order=True)
class CoverVertex:
    """A reduced walk ``(base, ..., end)``; the projection is ``walk[-1]``."""

    walk: Walk

    def __post_init__(self):
        w = tuple(self.walk)
        if not w:
            raise InvalidInputError("a cover vertex needs a non-empty walk")
        object.__setattr__(self, "walk", w)

    @property
    def base(self) -> str:
        return self.walk[0]

    @property
    def proj(self) -> str:
        return self.walk[-1]

    @property
    def depth(self) -> int:
        """Distance from the root, in edges."""
        return len(self.walk) - 1

    def parent(self) -> "CoverVertex | None":
        return CoverVertex(self.walk[:-1]) if len(self.walk) > 1 else None

    def to_json(self) -> list[str]:
        return list(self.walk)

    def __repr__(self) -> str:
        return "CoverVertex(" + ",".join(self.walk) + ")"


def make_vertex(g: Graph, walk: Iterable[str]) -> CoverVertex:
    """Validate ``walk`` as a non-backtracking walk in ``g`` and wrap it."""
    w = tuple(walk)
    if not w:
        raise InvalidInputError("a cover vertex needs a non-empty walk")
    for v in w:
        g.index(v)
    for i in range(1, len(w)):
        if not g.adjacent(w[i - 1], w[i]):
            raise InvalidInputError(f"walk step {w[i - 1]!r} -> {w[i]!r} is not an edge")
        if i >= 2 and w[i] == w[i - 2]:
            raise InvalidInputError(f"walk backtracks at position {i}")
    return CoverVertex(w)


def root(g: Graph, base: str | None = None) -> CoverVertex:
    base = g.vertices[0] if base is None else base
    g.index(base)
    return CoverVertex((base,))


def step_toward(walk: Walk, label: str) -> Walk:
    """The unique cover neighbour of ``walk`` projecting to ``label``.

    The caller guarantees ``label`` is adjacent to ``walk[-1]``.
    """
    if len(walk) >= 2 and walk[-2] == label:
        return walk[:-1]
    return walk + (label,)


def cover_neighbors(g: Graph, v: CoverVertex) -> list[CoverVertex]:
    """Parent (if any) followed by the one-step extensions in canonical order."""
    out = []
    w = v.walk
    prev = w[-2] if len(w) >= 2 else None
    if prev is not None:
        out.append(CoverVertex(w[:-1]))
    for u in g.sorted_neighbors(w[-1]):
        if u != prev:
            out.append(CoverVertex(w + (u,)))
    return out


def reduce_walk(walk: Sequence[str]) -> Walk:
    """Erase backtracking segments ``u, v, u -> u`` until none remain."""
    stack: list[str] = []
    for x in walk:
        if len(stack) >= 2 and stack[-2] == x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def reduce_concat(p: Sequence[str], q: Sequence[str]) -> Walk:
    """Reduction of the concatenation ``p * q``; ``p`` must end where ``q`` starts."""
    if not p or not q:
        raise InvalidInputError("walks must be non-empty")
    if p[-1] != q[0]:
        raise InvalidInputError(f"walk ending at {p[-1]!r} cannot be joined to one starting at {q[0]!r}")
    return reduce_walk(tuple(p) + tuple(q[1:]))


def _lcp(a: Walk, b: Walk) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def cover_distance(p: CoverVertex, q: CoverVertex) -> int:
    if p.base != q.base:
        raise InvalidInputError(f"cover vertices have different bases {p.base!r} and {q.base!r}")
    common = _lcp(p.walk, q.walk) - 1
    return p.depth + q.depth - 2 * common


def cover_geodesic(p: CoverVertex, q: CoverVertex) -> list[CoverVertex]:
    """Vertices on the tree geodesic from ``p`` to ``q``, both ends included."""
    if p.base != q.base:
        raise InvalidInputError("cover vertices have different bases")
    k = _lcp(p.walk, q.walk)
    up = [CoverVertex(p.walk[:m]) for m in range(len(p.walk), k - 1, -1)]
    down = [CoverVertex(q.walk[:m]) for m in range(k + 1, len(q.walk) + 1)]
    return up + down


def deck_transform(c: Sequence[str], v: CoverVertex) -> CoverVertex:
    """Apply the deck transformation determined by the closed walk ``c`` at the base."""
    c = tuple(c)
    if not c or c[0] != c[-1]:
        raise InvalidInputError("deck transformation needs a closed walk")
    if c[0] != v.base:
        raise InvalidInputError(f"closed walk starts at {c[0]!r}, cover base is {v.base!r}")
    return CoverVertex(reduce_concat(c, v.walk))


def cover_ball(g: Graph, radius: int, base: str | None = None) -> list[CoverVertex]:
    """All cover vertices within ``radius`` of the root, in shortlex order."""
    start = root(g, base)
    out = [start]
    frontier = [start]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            prev = v.walk[-2] if len(v.walk) >= 2 else None
            for u in g.sorted_neighbors(v.proj):
                if u != prev:
                    nxt.append(CoverVertex(v.walk + (u,)))
        if not nxt:
            break
        out.extend(nxt)
        frontier = nxt
    return out


def cover_is_finite(g: Graph, base: str | None = None) -> bool:
    """The cover is finite iff the base's component is a tree (loop-free, acyclic)."""
    base = g.vertices[0] if base is None else base
    comp = None
    for c in analyze_graph(g).components:
        if base in c:
            comp = set(c)
    sub = g.induced(comp)
    n_edges = len(sub.edges)
    return not any(sub.has_loop(v) for v in sub.vertices) and n_edges == len(sub) - 1


def cover_subgraph(vertices: Iterable[CoverVertex]) -> tuple[Graph, dict[str, CoverVertex]]:
    """Finite induced subtree on the given cover vertices.

    Labels are ``"0", "1", ...`` in shortlex order of the walks, so canonical
    order in the returned graph is deterministic. Returns the graph and the
    label-to-vertex map.
    """
    verts = sorted(set(vertices), key=lambda v: (v.depth, v.walk))
    labels = {v: str(i) for i, v in enumerate(verts)}
    edges = []
    for v in verts:
        par = v.parent()
        if par is not None and par in labels:
            edges.append((labels[par], labels[v]))
    g = Graph.from_edges([labels[v] for v in verts], edges)
    return g, {labels[v]: v for v in verts}
