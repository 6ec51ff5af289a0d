"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random

import networkx as nx
import numpy as np
import pytest

from homshift.graphcore import Graph
from homshift.pattern import Pattern, Region


def from_nx(h: nx.Graph) -> Graph:
    """Convert a networkx graph (integer nodes) to a Graph with string labels."""
    nodes = sorted(h.nodes())
    return Graph.from_edges([str(v) for v in nodes], [(str(u), str(v)) for u, v in h.edges()])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edge_list())
    return h


def graphs_up_to(n: int):
    """All graphs (no loops) on 1..n vertices up to isomorphism, from the graph atlas."""
    return [from_nx(h) for h in nx.graph_atlas_g() if 1 <= h.number_of_nodes() <= n]


def trees_up_to(n: int, min_vertices: int = 2):
    out = []
    for k in range(min_vertices, n + 1):
        out.extend(from_nx(t) for t in nx.nonisomorphic_trees(k))
    return out


def c4_free_connected(n: int, min_vertices: int = 2):
    """Connected loop-free graphs with no four-cycle subgraph, up to n vertices."""
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if not (min_vertices <= k <= n) or not nx.is_connected(h):
            continue
        if has_c4_bruteforce(from_nx(h)):
            continue
        out.append(from_nx(h))
    return out


def has_c4_bruteforce(g: Graph) -> bool:
    for a, b, c, d in itertools.permutations(g.vertices, 4):
        if g.adjacent(a, b) and g.adjacent(b, c) and g.adjacent(c, d) and g.adjacent(d, a):
            return True
    return False


def brute_force_box_count(g: Graph, extents) -> int:
    """Count valid box patterns by checking every assignment.

    The last cells form a block whose internally valid assignments are listed
    once with numpy; each assignment of the first cells is then checked
    against all of them.
    """
    region = Region.box((0,) * len(extents), extents)
    sites = region.sites()
    index = {s: i for i, s in enumerate(sites)}
    edges = [(index[a], index[b]) for a, b in region.edges()]
    q = len(g)
    adj = np.zeros((q, q), dtype=bool)
    for u, v in g.edge_list():
        adj[g.index(u), g.index(v)] = adj[g.index(v), g.index(u)] = True
    n = len(sites)
    split = max(0, n - 9)
    tail = np.indices((q,) * (n - split)).reshape(n - split, -1)
    ok = np.ones(tail.shape[1], dtype=bool)
    for a, b in edges:
        if a >= split and b >= split:
            ok &= adj[tail[a - split], tail[b - split]]
    tail = tail[:, ok]
    cross = [(a, b) if a < b else (b, a) for a, b in edges if (a < split) != (b < split)]
    total = 0
    for head in itertools.product(range(q), repeat=split):
        if not all(adj[head[a], head[b]] for a, b in edges if a < split and b < split):
            continue
        ok = np.ones(tail.shape[1], dtype=bool)
        for a, b in cross:
            ok &= adj[head[a], tail[b - split]]
        total += int(ok.sum())
    return total


def looped_variants(g: Graph):
    """``g`` with each subset of its vertices given a loop, one per isomorphism class."""
    out, seen = [], []
    for k in range(len(g) + 1):
        for loops in itertools.combinations(g.vertices, k):
            h = to_nx(g)
            nx.set_node_attributes(h, {v: v in loops for v in g.vertices}, "loop")
            if any(nx.is_isomorphic(h, o, node_match=lambda a, b: a["loop"] == b["loop"]) for o in seen):
                continue
            seen.append(h)
            out.append(Graph.from_edges(g.vertices, g.edge_list() + [(v, v) for v in loops]))
    return out


def reduced_walk_length(labels) -> int:
    """Length of the reduced walk of a label sequence (independent of the cover module)."""
    stack = []
    for x in labels:
        if len(stack) >= 2 and stack[-2] == x:
            stack.pop()
        else:
            stack.append(x)
    return len(stack) - 1


def lattice_path(i, j):
    """Sites along an axis-by-axis path from i to j."""
    pos = list(i)
    out = [tuple(pos)]
    for k in range(len(i)):
        step = 1 if j[k] > i[k] else -1
        while pos[k] != j[k]:
            pos[k] += step
            out.append(tuple(pos))
    return out


def path_height(p: Pattern, i, j) -> int:
    return reduced_walk_length([p[s] for s in lattice_path(i, j)])


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
