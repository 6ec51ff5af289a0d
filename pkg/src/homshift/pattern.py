"""Finite Z^d patterns valued in a graph: regions, validity, enumeration.

Sites are integer tuples. A region fixes the support and its nearest-neighbour
adjacency (torus regions wrap every axis).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from .errors import (
    InvalidInputError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedRegionError,
)
from .graphcore import Graph, graph_from_json, graph_to_json, load_graph

Site = tuple[int, ...]

__all__ = [
    "Site",
    "Region",
    "Pattern",
    "l1",
    "validate_pattern",
    "reflect_periodize",
    "reflected_extension",
    "is_globally_allowed",
    "enumerate_patterns",
    "count_patterns",
    "sample_pattern",
    "pattern_from_json",
    "pattern_to_json",
    "load_pattern",
    "fill_array",
    "fill_index_tuples",
]

KINDS = ("box", "diamond", "torus", "sites")


def l1(a: Site, b: Site | None = None) -> int:
    if b is None:
        return sum(abs(x) for x in a)
    return sum(abs(x - y) for x, y in zip(a, b))


def _unit_steps(d: int):
    for k in range(d):
        for sign in (1, -1):
            yield k, sign


@dataclass(frozen=True)
class Region:
    """A finite set of sites with Z^d (or toroidal) adjacency.

    Use the constructors :meth:`box`, :meth:`centered_box`, :meth:`diamond`,
    :meth:`torus` and :meth:`from_sites` rather than the raw initializer.
    """

    d: int
    kind: str
    origin: tuple[int, ...] = ()
    extents: tuple[int, ...] = ()
    center: tuple[int, ...] = ()
    radius: int = 0
    members: frozenset = frozenset()
    _sites: tuple = field(init=False, repr=False, compare=False, hash=False)
    _set: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.d < 1:
            raise InvalidInputError("dimension must be at least 1")
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown region kind {self.kind!r}")
        if self.kind in ("box", "torus"):
            if len(self.extents) != self.d or any(e < 1 for e in self.extents):
                raise InvalidInputError(f"{self.kind} extents must be {self.d} positive integers")
            origin = self.origin if self.kind == "box" else (0,) * self.d
            if len(origin) != self.d:
                raise InvalidInputError("box origin has the wrong dimension")
            sites = tuple(
                tuple(o + i for o, i in zip(origin, idx))
                for idx in product(*(range(e) for e in self.extents))
            )
        elif self.kind == "diamond":
            if len(self.center) != self.d or self.radius < 0:
                raise InvalidInputError("diamond needs a d-dimensional center and radius >= 0")
            r = self.radius
            sites = tuple(
                tuple(c + i for c, i in zip(self.center, idx))
                for idx in product(range(-r, r + 1), repeat=self.d)
                if l1(idx) <= r
            )
        else:
            if not self.members:
                raise InvalidInputError("a 'sites' region needs at least one site")
            if any(len(s) != self.d for s in self.members):
                raise InvalidInputError("site dimension does not match region dimension")
            sites = tuple(sorted(self.members))
        object.__setattr__(self, "_sites", sites)
        object.__setattr__(self, "_set", frozenset(sites))

    # constructors ----------------------------------------------------------
    @classmethod
    def box(cls, origin: Iterable[int], extents: Iterable[int]) -> "Region":
        origin, extents = tuple(origin), tuple(extents)
        return cls(d=len(extents), kind="box", origin=origin, extents=extents)

    @classmethod
    def centered_box(cls, n: int, d: int = 2) -> "Region":
        """The l-infinity ball [-n, n]^d."""
        return cls.box((-n,) * d, (2 * n + 1,) * d)

    @classmethod
    def diamond(cls, radius: int, d: int = 2, center: Iterable[int] | None = None) -> "Region":
        center = tuple(center) if center is not None else (0,) * d
        return cls(d=d, kind="diamond", center=center, radius=radius)

    @classmethod
    def torus(cls, extents: Iterable[int]) -> "Region":
        extents = tuple(extents)
        return cls(d=len(extents), kind="torus", extents=extents)

    @classmethod
    def from_sites(cls, sites: Iterable[Site]) -> "Region":
        members = frozenset(tuple(int(c) for c in s) for s in sites)
        if not members:
            raise InvalidInputError("a 'sites' region needs at least one site")
        return cls(d=len(next(iter(members))), kind="sites", members=members)

    # queries ----------------------------------------------------------------
    def sites(self) -> tuple[Site, ...]:
        """All sites in canonical (lexicographic) order."""
        return self._sites

    def __len__(self) -> int:
        return len(self._sites)

    def __contains__(self, s) -> bool:
        return self.normalize(s) in self._set

    def __iter__(self):
        return iter(self._sites)

    def normalize(self, s: Site) -> Site:
        s = tuple(s)
        if self.kind == "torus":
            return tuple(c % e for c, e in zip(s, self.extents))
        return s

    def neighbors(self, s: Site) -> list[Site]:
        """Adjacent sites inside the region. On a torus of extent 1 a site neighbours itself."""
        out = []
        for k, sign in _unit_steps(self.d):
            t = list(s)
            t[k] += sign
            t = self.normalize(t)
            if t in self._set and t not in out:
                out.append(t)
        return out

    def edges(self) -> list[tuple[Site, Site]]:
        """Adjacent pairs ``(i, j)`` with ``i <= j`` in canonical order, each listed once."""
        out = []
        for s in self._sites:
            for t in self.neighbors(s):
                if s <= t:
                    out.append((s, t))
        return out

    def boundary(self, r: int = 1) -> list[Site]:
        """The outer r-boundary: sites outside the region within l1 distance r of it."""
        if self.kind == "torus":
            return []
        found = set()
        frontier = set(self._sites)
        for _ in range(r):
            nxt = set()
            for s in frontier:
                for k, sign in _unit_steps(self.d):
                    t = list(s)
                    t[k] += sign
                    t = tuple(t)
                    if t not in self._set and t not in found:
                        nxt.add(t)
            found |= nxt
            frontier = nxt
        return sorted(found)

    def interior(self) -> list[Site]:
        """Sites all of whose 2d lattice neighbours lie in the region."""
        if self.kind == "torus":
            return list(self._sites)
        out = []
        for s in self._sites:
            if all(
                tuple(c + (sign if i == k else 0) for i, c in enumerate(s)) in self._set
                for k, sign in _unit_steps(self.d)
            ):
                out.append(s)
        return out

    def is_connected(self) -> bool:
        if not self._sites:
            return False
        seen = {self._sites[0]}
        stack = [self._sites[0]]
        while stack:
            s = stack.pop()
            for t in self.neighbors(s):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return len(seen) == len(self._sites)

    def bounding_box(self) -> "Region":
        lo = [min(s[k] for s in self._sites) for k in range(self.d)]
        hi = [max(s[k] for s in self._sites) for k in range(self.d)]
        return Region.box(lo, [h - l + 1 for l, h in zip(lo, hi)])

    def to_json(self) -> dict:
        if self.kind == "box":
            return {"kind": "box", "origin": list(self.origin), "extents": list(self.extents)}
        if self.kind == "torus":
            return {"kind": "torus", "extents": list(self.extents)}
        if self.kind == "diamond":
            return {"kind": "diamond", "center": list(self.center), "radius": self.radius}
        return {"kind": "sites", "sites": [list(s) for s in self._sites]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Region":
        kind = obj.get("kind")
        try:
            if kind == "box":
                return cls.box(obj["origin"], obj["extents"])
            if kind == "torus":
                return cls.torus(obj["extents"])
            if kind == "diamond":
                return cls.diamond(int(obj["radius"]), len(obj["center"]), obj["center"])
            if kind == "sites":
                return cls.from_sites(obj["sites"])
        except KeyError as exc:
            raise InvalidInputError(f"region: missing field {exc.args[0]!r}") from None
        raise InvalidInputError(f"region: unknown kind {kind!r}")


class Pattern:
    """A total assignment of graph vertices to the sites of a region."""

    __slots__ = ("graph", "region", "cells")

    def __init__(self, graph: Graph, region: Region, cells: Mapping[Site, str]):
        self.graph = graph
        self.region = region
        norm = {region.normalize(s): v for s, v in cells.items()}
        missing = [s for s in region.sites() if s not in norm]
        if missing:
            raise InvalidInputError(f"pattern has no value at site {missing[0]}")
        extra = [s for s in norm if s not in region]
        if extra:
            raise InvalidInputError(f"pattern assigns site {extra[0]} outside its region")
        for s, v in norm.items():
            if v not in graph:
                raise InvalidInputError(f"label {v!r} at site {s} is not a vertex of the graph")
        self.cells = {s: norm[s] for s in region.sites()}

    @classmethod
    def from_rows(cls, graph: Graph, rows, origin: Iterable[int] | None = None) -> "Pattern":
        """Box pattern from nested lists indexed ``rows[i0][i1]...`` (row-major)."""
        extents = []
        probe = rows
        while isinstance(probe, (list, tuple)):
            extents.append(len(probe))
            probe = probe[0]
        origin = tuple(origin) if origin is not None else (0,) * len(extents)
        region = Region.box(origin, extents)
        cells = {}
        for idx in product(*(range(e) for e in extents)):
            v = rows
            for i in idx:
                v = v[i]
            cells[tuple(o + i for o, i in zip(origin, idx))] = str(v)
        return cls(graph, region, cells)

    @classmethod
    def from_function(cls, graph: Graph, region: Region, fn: Callable[[Site], str]) -> "Pattern":
        return cls(graph, region, {s: fn(s) for s in region.sites()})

    def __getitem__(self, s: Site) -> str:
        return self.cells[self.region.normalize(s)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Pattern)
            and self.graph == other.graph
            and self.region == other.region
            and self.cells == other.cells
        )

    def __hash__(self):
        return hash((self.region, tuple(self.cells.values())))

    def __repr__(self) -> str:
        return f"Pattern({self.region.kind}, {len(self.cells)} sites)"

    def image(self) -> set[str]:
        return set(self.cells.values())

    def restrict(self, sites: Iterable[Site]) -> "Pattern":
        sub = Region.from_sites(sites)
        return Pattern(self.graph, sub, {s: self.cells[s] for s in sub.sites()})

    def with_cells(self, updates: Mapping[Site, str]) -> "Pattern":
        cells = dict(self.cells)
        cells.update({self.region.normalize(s): v for s, v in updates.items()})
        return Pattern(self.graph, self.region, cells)

    def map_labels(self, fn: Callable[[str], str], graph: Graph | None = None) -> "Pattern":
        return Pattern(graph or self.graph, self.region, {s: fn(v) for s, v in self.cells.items()})

    def differences(self, other: "Pattern") -> list[Site]:
        return [s for s in self.region.sites() if self.cells[s] != other.cells[s]]

    def rows(self) -> list:
        """Nested row-major lists for box and torus patterns."""
        if self.region.kind not in ("box", "torus"):
            raise UnsupportedRegionError("rows() needs a box or torus pattern")
        origin = self.region.origin if self.region.kind == "box" else (0,) * self.region.d

        def build(prefix, axis):
            if axis == self.region.d:
                return self.cells[tuple(o + i for o, i in zip(origin, prefix))]
            return [build(prefix + (i,), axis + 1) for i in range(self.region.extents[axis])]

        return build((), 0)

    def is_valid(self) -> bool:
        return not validate_pattern(self)


def validate_pattern(p: Pattern) -> list[tuple[Site, Site]]:
    """Every adjacent pair of sites whose labels are not adjacent in the graph."""
    g = p.graph
    bad = []
    for i, j in p.region.edges():
        if not g.adjacent(p.cells[i], p.cells[j]):
            bad.append((i, j))
    return bad


def _reflect(i: int, lo: int, hi: int) -> int:
    """Fold integer ``i`` into ``[lo, hi]`` by reflection, period ``2 * (hi - lo)``."""
    span = hi - lo
    if span == 0:
        return lo
    u = (i - lo) % (2 * span)
    return lo + (u if u <= span else 2 * span - u)


def reflected_extension(p: Pattern, target: Region) -> Pattern:
    """Extend a box pattern to ``target`` by reflecting across the box faces on every axis.

    Adjacent sites map to adjacent (never equal) box sites, so validity is
    preserved whenever every box extent is at least 2.
    """
    if p.region.kind != "box":
        raise UnsupportedRegionError("reflection needs a box pattern")
    lo = p.region.origin
    hi = tuple(o + e - 1 for o, e in zip(lo, p.region.extents))
    return Pattern.from_function(
        p.graph,
        target,
        lambda s: p.cells[tuple(_reflect(c, a, b) for c, a, b in zip(s, lo, hi))],
    )


def reflect_periodize(p: Pattern) -> Pattern:
    """Periodic extension of a valid box pattern, returned on a torus.

    An axis of length L becomes a torus axis of length 2(L-1); torus site t
    carries the box value at reflected index t (so the box embeds at
    t in [0, L-1]). For the box [-n, n]^d this is period 4n.
    """
    if p.region.kind != "box":
        raise UnsupportedRegionError("reflect_periodize needs a box pattern")
    if any(e < 2 for e in p.region.extents):
        raise PreconditionError("reflect_periodize needs every box extent to be at least 2")
    if validate_pattern(p):
        raise PreconditionError("reflect_periodize needs a valid pattern")
    torus = Region.torus(2 * (e - 1) for e in p.region.extents)
    origin = p.region.origin
    return Pattern.from_function(
        p.graph,
        torus,
        lambda t: p.cells[tuple(o + _reflect(c, 0, e - 1) for c, o, e in zip(t, origin, p.region.extents))],
    )


def is_globally_allowed(p: Pattern) -> bool:
    """Whether the pattern extends to a configuration of the full hom-shift.

    Box patterns are decided by reflection. Diamond and explicit-site
    patterns are decided on their bounding box by searching for a valid
    completion (slow path).
    """
    if p.region.kind == "torus":
        raise UnsupportedRegionError("global allowedness is defined for finite Z^d supports, not tori")
    if validate_pattern(p):
        return False
    if p.region.kind == "box":
        if all(e == 1 for e in p.region.extents):
            # a lone site extends iff its symbol has some neighbour
            return p.graph.degree(next(iter(p.cells.values()))) > 0
        return True
    bbox = p.region.bounding_box()
    if all(e == 1 for e in bbox.extents):
        return p.graph.degree(next(iter(p.cells.values()))) > 0
    boundary = Pattern(p.graph, p.region, p.cells)
    return next(iter(_fillings(p.graph, bbox, boundary)), None) is not None


# --- enumeration ---------------------------------------------------------------

class _FillingProblem:
    """Site ordering, precomputed constraints and bitmask domains for backtracking."""

    def __init__(self, graph: Graph, region: Region, boundary: Pattern | None):
        self.graph = graph
        self.region = region
        self.sites = region.sites()
        index = {s: i for i, s in enumerate(self.sites)}
        masks = graph.bitmasks()
        self.masks = masks
        full = (1 << len(graph)) - 1
        base = [full] * len(self.sites)
        if boundary is not None:
            if boundary.region.d != region.d:
                raise InvalidInputError("boundary dimension does not match region")
            if boundary.graph != graph:
                raise InvalidInputError("boundary pattern uses a different graph")
            outer = set(region.boundary(1))
            for s, v in boundary.cells.items():
                vi = graph.index(v)
                if s in index:
                    base[index[s]] &= 1 << vi
                elif s in outer:
                    for t in _inner_neighbors(region, s):
                        base[index[t]] &= masks[vi]
                else:
                    raise InvalidInputError(
                        f"boundary site {s} is neither in the region nor on its boundary"
                    )
        self.earlier: list[list[int]] = []
        for i, s in enumerate(self.sites):
            prev = []
            for t in region.neighbors(s):
                j = index[t]
                if j == i:
                    loops = 0
                    for vi, v in enumerate(graph.vertices):
                        if graph.has_loop(v):
                            loops |= 1 << vi
                    base[i] &= loops
                elif j < i:
                    prev.append(j)
            self.earlier.append(prev)
        self.base = base

    def domain(self, i: int, vals: list[int]) -> int:
        m = self.base[i]
        for j in self.earlier[i]:
            m &= self.masks[vals[j]]
        return m


def _inner_neighbors(region: Region, s: Site) -> list[Site]:
    out = []
    for k, sign in _unit_steps(region.d):
        t = list(s)
        t[k] += sign
        t = tuple(t)
        if t in region:
            out.append(t)
    return out


def _bits(m: int) -> list[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return out


def _fill_indices(problem: _FillingProblem) -> Iterator[tuple[int, ...]]:
    n = len(problem.sites)
    if n == 0:
        yield ()
        return
    vals = [0] * n
    cand: list[list[int]] = [[] for _ in range(n)]
    cand[0] = _bits(problem.domain(0, vals))[::-1]
    pos = 0
    while pos >= 0:
        if cand[pos]:
            vals[pos] = cand[pos].pop()
            if pos == n - 1:
                yield tuple(vals)
            else:
                pos += 1
                cand[pos] = _bits(problem.domain(pos, vals))[::-1]
        else:
            pos -= 1


def _fillings(graph: Graph, region: Region, boundary: Pattern | None) -> Iterator[Pattern]:
    problem = _FillingProblem(graph, region, boundary)
    labels = graph.vertices
    for vals in _fill_indices(problem):
        yield Pattern(graph, region, {s: labels[v] for s, v in zip(problem.sites, vals)})


def enumerate_patterns(graph: Graph, region: Region, boundary: Pattern | None = None) -> Iterator[Pattern]:
    """Stream every valid pattern on ``region`` consistent with ``boundary``.

    ``boundary`` is a partial pattern: its sites inside the region are fixed,
    and its sites on the outer boundary constrain their neighbours in the
    region. Patterns come out in lexicographic order of canonical vertex
    indices over canonical site order.
    """
    return _fillings(graph, region, boundary)


def count_patterns(graph: Graph, region: Region, boundary: Pattern | None = None) -> int:
    """Number of patterns :func:`enumerate_patterns` would yield, without building them."""
    problem = _FillingProblem(graph, region, boundary)
    n = len(problem.sites)
    if n == 0:
        return 1
    vals = [0] * n
    total = 0
    cand: list[list[int]] = [[] for _ in range(n)]
    if n == 1:
        return bin(problem.domain(0, vals)).count("1")
    cand[0] = _bits(problem.domain(0, vals))
    pos = 0
    while pos >= 0:
        if cand[pos]:
            vals[pos] = cand[pos].pop()
            if pos == n - 2:
                total += bin(problem.domain(n - 1, vals)).count("1")
            else:
                pos += 1
                cand[pos] = _bits(problem.domain(pos, vals))
        else:
            pos -= 1
    return total


def fill_index_tuples(graph: Graph, region: Region, boundary: Pattern | None = None, limit: int | None = None):
    """Valid fillings as tuples of vertex indices in canonical site order.

    Raises :class:`ResourceLimitError` once more than ``limit`` fillings exist.
    """
    problem = _FillingProblem(graph, region, boundary)
    out = []
    for vals in _fill_indices(problem):
        out.append(vals)
        if limit is not None and len(out) > limit:
            raise ResourceLimitError(
                f"more than {limit} valid fillings", progress={"fillings_seen": len(out)}
            )
    return problem.sites, out


def fill_array(graph: Graph, region: Region, boundary: Pattern | None = None, limit: int = 2_000_000):
    """All valid fillings as an ``(count, |region|)`` array of vertex indices.

    Same constraint handling as :func:`enumerate_patterns`, but the partial
    fillings are extended one site at a time as a whole numpy array. Rows
    come out in no particular order. Raises :class:`ResourceLimitError` when
    the number of partial fillings exceeds ``limit``.
    """
    import numpy as np

    problem = _FillingProblem(graph, region, boundary)
    q = len(graph)
    adj = np.zeros((q, q), dtype=bool)
    for i, m in enumerate(problem.masks):
        for j in _bits(m):
            adj[i, j] = True
    dtype = np.int8 if q < 128 else np.int32
    rows = np.zeros((1, 0), dtype=dtype)
    for i in range(len(problem.sites)):
        pieces = []
        for v in _bits(problem.base[i]):
            ok = np.ones(len(rows), dtype=bool)
            for j in problem.earlier[i]:
                ok &= adj[rows[:, j], v]
            sel = rows[ok]
            if len(sel):
                pieces.append(np.concatenate([sel, np.full((len(sel), 1), v, dtype=dtype)], axis=1))
        rows = np.concatenate(pieces) if pieces else np.zeros((0, i + 1), dtype=dtype)
        if len(rows) > limit:
            raise ResourceLimitError(
                f"more than {limit} partial fillings",
                progress={"sites_filled": i + 1, "of_sites": len(problem.sites), "partial_fillings": int(len(rows))},
            )
    return problem.sites, rows


def sample_pattern(
    graph: Graph,
    region: Region,
    rng: random.Random,
    boundary: Pattern | None = None,
    max_restarts: int = 1000,
) -> Pattern:
    """Random valid pattern by site-by-site constrained sampling with restarts.

    A testing utility; the distribution is not uniform. Diamonds and site
    sets without a boundary are sampled on their bounding box first, where the
    sweep order rarely dead-ends.
    """
    if boundary is None and region.kind in ("diamond", "sites"):
        try:
            big = sample_pattern(graph, region.bounding_box(), rng, None, max_restarts)
        except ResourceLimitError:
            pass
        else:
            return Pattern(graph, region, {s: big.cells[s] for s in region.sites()})
    problem = _FillingProblem(graph, region, boundary)
    n = len(problem.sites)
    labels = graph.vertices
    for _ in range(max_restarts):
        vals = [0] * n
        for i in range(n):
            options = _bits(problem.domain(i, vals))
            if not options:
                break
            vals[i] = rng.choice(options)
        else:
            p = Pattern(graph, region, {s: labels[v] for s, v in zip(problem.sites, vals)})
            if not validate_pattern(p):
                return p
    raise ResourceLimitError(f"no valid pattern found after {max_restarts} restarts")


# --- JSON ------------------------------------------------------------------------

def pattern_to_json(p: Pattern, graph_ref: str | None = None) -> dict:
    obj: dict = {
        "graph": graph_ref if graph_ref is not None else graph_to_json(p.graph),
        "d": p.region.d,
        "region": p.region.to_json(),
    }
    if p.region.kind in ("box", "torus"):
        obj["cells"] = p.rows()
    elif p.region.kind == "diamond":
        bbox = p.region.bounding_box()

        def build(prefix, axis):
            if axis == bbox.d:
                s = tuple(o + i for o, i in zip(bbox.origin, prefix))
                return p.cells.get(s)
            return [build(prefix + (i,), axis + 1) for i in range(bbox.extents[axis])]

        obj["cells"] = build((), 0)
    else:
        obj["cells"] = [[list(s), v] for s, v in p.cells.items()]
    return obj


def pattern_from_json(obj, base_dir: str | Path | None = None, graph: Graph | None = None) -> Pattern:
    if isinstance(obj, str):
        obj = json.loads(obj)
    for key in ("region", "cells"):
        if key not in obj:
            raise InvalidInputError(f"pattern JSON: missing field {key!r}")
    if graph is None:
        ref = obj.get("graph")
        if isinstance(ref, dict):
            graph = graph_from_json(ref)
        elif isinstance(ref, str):
            path = Path(ref)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            graph = load_graph(path)
        else:
            raise InvalidInputError("pattern JSON: field 'graph' must be a path or an inline graph")
    region = Region.from_json(obj["region"])
    if "d" in obj and obj["d"] != region.d:
        raise InvalidInputError("pattern JSON: field 'd' disagrees with the region")
    cells_obj = obj["cells"]
    cells: dict[Site, str] = {}
    if region.kind == "sites":
        for k, item in enumerate(cells_obj):
            if not isinstance(item, list) or len(item) != 2:
                raise InvalidInputError(f"pattern JSON: field 'cells[{k}]' must be [site, label]")
            cells[tuple(item[0])] = str(item[1])
    else:
        box = region if region.kind != "diamond" else region.bounding_box()
        origin = box.origin if box.kind == "box" else (0,) * box.d
        for idx in product(*(range(e) for e in box.extents)):
            v = cells_obj
            try:
                for i in idx:
                    v = v[i]
            except (IndexError, TypeError):
                raise InvalidInputError(f"pattern JSON: field 'cells' has no entry at index {list(idx)}") from None
            s = tuple(o + i for o, i in zip(origin, idx))
            if v is not None and s in region:
                cells[s] = str(v)
    return Pattern(graph, region, cells)


def load_pattern(path, graph: Graph | None = None) -> Pattern:
    path = Path(path)
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return pattern_from_json(obj, base_dir=path.parent, graph=graph)
