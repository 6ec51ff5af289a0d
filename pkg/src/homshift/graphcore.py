"""Finite graphs (the constraint graph H of a hom-shift) and structural predicates."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidInputError

__all__ = [
    "Graph",
    "GraphReport",
    "analyze_graph",
    "bfs_distances",
    "shortest_path",
    "graph_from_json",
    "graph_to_json",
    "load_graph",
    "path_graph",
    "cycle_graph",
    "complete_graph",
    "star_graph",
    "edge_graph",
    "hard_square_graph",
    "looped_vertex",
    "disjoint_union",
]


@dataclass(frozen=True)
class Graph:
    """Undirected graph on string labels, self-loops allowed, no multi-edges.

    ``vertices`` is ordered; that order is the canonical tie-break used
    throughout the package.
    """

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise InvalidInputError("duplicate vertex labels")
        object.__setattr__(self, "vertices", verts)
        index = {v: i for i, v in enumerate(verts)}
        adj: dict[str, set[str]] = {v: set() for v in verts}
        for e in self.edges:
            ends = tuple(e)
            if len(ends) == 1:
                u = w = ends[0]
            elif len(ends) == 2:
                u, w = ends
            else:
                raise InvalidInputError(f"malformed edge {sorted(e)}")
            for end in (u, w):
                if end not in index:
                    raise InvalidInputError(f"edge endpoint {end!r} is not a declared vertex")
            adj[u].add(w)
            adj[w].add(u)
        frozen = {v: frozenset(ns) for v, ns in adj.items()}
        object.__setattr__(self, "_adj", frozen)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[Sequence]) -> "Graph":
        """Build from a vertex list and an iterable of 2-element edges.

        Duplicate edges (in either orientation) are rejected.
        """
        seen: set[frozenset[str]] = set()
        for e in edges:
            if len(e) != 2:
                raise InvalidInputError(f"edge {list(e)!r} must have exactly two endpoints")
            key = frozenset((str(e[0]), str(e[1])))
            if key in seen:
                raise InvalidInputError(f"duplicate edge {list(e)!r}")
            seen.add(key)
        return cls(tuple(str(v) for v in vertices), frozenset(seen))

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self._index

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InvalidInputError(f"{v!r} is not a vertex of the graph") from None

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self._adj[v]
        except KeyError:
            raise InvalidInputError(f"{v!r} is not a vertex of the graph") from None

    def sorted_neighbors(self, v: str) -> list[str]:
        """Neighbours of ``v`` in canonical vertex order."""
        return sorted(self.neighbors(v), key=self._index.__getitem__)

    def adjacent(self, u: str, v: str) -> bool:
        return v in self._adj[u]

    def has_loop(self, v: str) -> bool:
        return v in self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def edge_list(self) -> list[tuple[str, str]]:
        """Edges as ordered pairs, sorted canonically (loops as ``(v, v)``)."""
        out = []
        for e in self.edges:
            ends = sorted(e, key=self._index.__getitem__)
            out.append((ends[0], ends[-1]))
        out.sort(key=lambda p: (self._index[p[0]], self._index[p[1]]))
        return out

    def induced(self, keep: Iterable[str]) -> "Graph":
        """Induced subgraph, preserving the canonical order of the kept vertices."""
        keep_set = set(keep)
        for v in keep_set:
            self.index(v)
        verts = tuple(v for v in self.vertices if v in keep_set)
        return Graph(verts, frozenset(e for e in self.edges if e <= keep_set))

    def remove(self, drop: Iterable[str]) -> "Graph":
        drop_set = set(drop)
        return self.induced(v for v in self.vertices if v not in drop_set)

    def bitmasks(self) -> list[int]:
        """Adjacency of vertex ``i`` as an int bitmask over vertex indices."""
        masks = []
        for v in self.vertices:
            m = 0
            for w in self._adj[v]:
                m |= 1 << self._index[w]
            masks.append(m)
        return masks


@dataclass(frozen=True)
class GraphReport:
    connected: bool
    components: list[list[str]]
    bipartite: bool
    coloring: dict[str, int] | None
    has_self_loop: bool
    four_cycle_free: bool
    c4_witness: tuple[str, str, str, str] | None
    is_tree: bool
    component_diameters: list[int]
    diameter: float  # math.inf when disconnected

    def to_json(self) -> dict:
        return {
            "connected": self.connected,
            "components": self.components,
            "bipartite": self.bipartite,
            "coloring": self.coloring,
            "has_self_loop": self.has_self_loop,
            "four_cycle_free": self.four_cycle_free,
            "c4_witness": list(self.c4_witness) if self.c4_witness else None,
            "is_tree": self.is_tree,
            "component_diameters": self.component_diameters,
            "diameter": None if math.isinf(self.diameter) else int(self.diameter),
        }


def bfs_distances(g: Graph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.sorted_neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path(g: Graph, source: str, target: str) -> list[str]:
    """Shortest path as a vertex list; neighbours explored in canonical order.

    Among shortest paths this returns the one whose vertex sequence is
    smallest in canonical order.
    """
    dist = bfs_distances(g, target)
    if source not in dist:
        raise InvalidInputError(f"no path from {source!r} to {target!r}")
    path = [source]
    while path[-1] != target:
        here = path[-1]
        path.append(next(w for w in g.sorted_neighbors(here) if dist.get(w) == dist[here] - 1))
    return path


def _components(g: Graph) -> list[list[str]]:
    seen: set[str] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        comp = set(bfs_distances(g, v))
        seen |= comp
        comps.append([u for u in g.vertices if u in comp])
    return comps


def _two_coloring(g: Graph) -> dict[str, int] | None:
    color: dict[str, int] = {}
    for start in g.vertices:
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def _find_c4(g: Graph) -> tuple[str, str, str, str] | None:
    # a C_4 exists iff two distinct vertices share two common neighbours other than themselves
    for a, c in combinations(g.vertices, 2):
        common = [w for w in g.sorted_neighbors(a) if w in g.neighbors(c) and w not in (a, c)]
        if len(common) >= 2:
            return (a, common[0], c, common[1])
    return None


def analyze_graph(g: Graph) -> GraphReport:
    if len(g) == 0:
        raise InvalidInputError("graph has no vertices")
    comps = _components(g)
    coloring = _two_coloring(g)
    has_loop = any(g.has_loop(v) for v in g.vertices)
    witness = _find_c4(g)
    n_edges = len(g.edges)
    diameters = [max(max(bfs_distances(g, v).values()) for v in comp) for comp in comps]
    connected = len(comps) == 1
    return GraphReport(
        connected=connected,
        components=comps,
        bipartite=coloring is not None,
        coloring=coloring,
        has_self_loop=has_loop,
        four_cycle_free=(not has_loop) and witness is None,
        c4_witness=witness,
        is_tree=connected and not has_loop and n_edges == len(g) - 1,
        component_diameters=diameters,
        diameter=diameters[0] if connected else math.inf,
    )


# --- serialisation ---------------------------------------------------------

def graph_from_json(obj) -> Graph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise InvalidInputError("graph JSON needs a 'vertices' field")
    verts = obj["vertices"]
    if not isinstance(verts, list) or not verts:
        raise InvalidInputError("field 'vertices' must be a non-empty list")
    edges = obj.get("edges", [])
    for k, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise InvalidInputError(f"field 'edges[{k}]' must be a two-element list")
    return Graph.from_edges(verts, edges)


def graph_to_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edge_list()]}


def load_graph(path) -> Graph:
    with open(Path(path)) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return graph_from_json(obj)


# --- standard graphs ---------------------------------------------------------

def path_graph(n: int, labels: Sequence[str] | None = None) -> Graph:
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    return Graph.from_edges(labels, zip(labels, labels[1:]))


def cycle_graph(n: int) -> Graph:
    labels = [str(i) for i in range(n)]
    return Graph.from_edges(labels, [(labels[i], labels[(i + 1) % n]) for i in range(n)])


def complete_graph(n: int) -> Graph:
    labels = [str(i) for i in range(1, n + 1)]
    return Graph.from_edges(labels, combinations(labels, 2))


def star_graph(leaves: Sequence[str] = ("a", "b", "c"), center: str = "z") -> Graph:
    return Graph.from_edges(list(leaves) + [center], [(leaf, center) for leaf in leaves])


def edge_graph(a: str = "a", b: str = "b") -> Graph:
    return Graph.from_edges([a, b], [(a, b)])


def hard_square_graph() -> Graph:
    """``0`` carries a loop and is joined to ``1``; adjacent ``1``s are forbidden."""
    return Graph.from_edges(["0", "1"], [("0", "0"), ("0", "1")])


def looped_vertex(v: str = "v") -> Graph:
    return Graph.from_edges([v], [(v, v)])


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    if set(g1.vertices) & set(g2.vertices):
        raise InvalidInputError("disjoint_union needs disjoint vertex labels")
    return Graph(g1.vertices + g2.vertices, g1.edges | g2.edges)
