"""Exact box counts, strip transfer-operator estimates, periodic counts and fillability."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .graphcore import Graph, analyze_graph
from .pattern import Region, count_patterns

__all__ = [
    "count_box_patterns",
    "strip_estimate",
    "EntropyReport",
    "entropy_report",
    "periodic_count",
    "Fillability",
    "single_site_fillable",
    "has_three_vertex_path",
]

LOG2_HALF = math.log(2) / 2


def count_box_patterns(g: Graph, extents, max_states: int = 1_000_000) -> int:
    """Exact number of valid patterns on a box, by a profile dynamic program.

    Sites are swept in lexicographic order with the longest axis outermost, so
    the profile (the last ``stride`` cells) spans the smaller cross-section.
    Works in any dimension.
    """
    extents = tuple(int(e) for e in extents)
    if not extents or any(e < 1 for e in extents):
        raise InvalidInputError("extents must be positive integers")
    order = sorted(range(len(extents)), key=lambda k: -extents[k])
    ext = [extents[k] for k in order]
    d = len(ext)
    strides = [math.prod(ext[k + 1:]) for k in range(d)]
    width = strides[0]
    masks = g.bitmasks()
    q = len(g)
    states: dict[tuple, int] = {(): 1}
    total_sites = math.prod(ext)
    for t in range(total_sites):
        coords = [(t // strides[k]) % ext[k] for k in range(d)]
        back = [strides[k] for k in range(d) if coords[k] > 0]
        nxt: dict[tuple, int] = {}
        for state, cnt in states.items():
            m = (1 << q) - 1
            for b in back:
                m &= masks[state[-b]]
            v = 0
            while m:
                if m & 1:
                    key = (state + (v,))[-width:]
                    nxt[key] = nxt.get(key, 0) + cnt
                m >>= 1
                v += 1
        states = nxt
        if len(states) > max_states:
            raise ResourceLimitError(
                f"profile state space exceeds {max_states}; cross-section {width} is too wide",
                progress={"sites_done": t + 1, "states": len(states), "feasible_width_bound": int(math.log(max_states, max(q, 2)))},
            )
        if not states:
            return 0
    return sum(states.values())


def strip_estimate(g: Graph, width: int, cylinder: bool = False, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Per-site log growth of an infinite strip of the given width.

    Power iteration on the column transfer operator from the all-ones vector,
    applied one cell at a time on a ``(q,) * width`` tensor. ``cylinder``
    wraps the strip's cross-section.
    """
    q = len(g)
    if width < 1:
        raise InvalidInputError("width must be positive")
    adj = np.zeros((q, q))
    for i, m in enumerate(g.bitmasks()):
        for j in range(q):
            if m >> j & 1:
                adj[i, j] = 1.0

    def pair_mask(a: int, b: int) -> np.ndarray:
        shape = [1] * width
        shape[a], shape[b] = q, q
        m = adj if a < b else adj.T
        return m.reshape(shape)

    col_masks = [pair_mask(k - 1, k) for k in range(1, width)]
    if cylinder and width >= 2:
        col_masks.append(pair_mask(0, width - 1))

    def constrain(v):
        for m in col_masks:
            v = v * m
        return v

    def apply(v):
        for k in range(width):
            v = np.moveaxis(np.tensordot(adj, v, axes=([1], [k])), 0, k)
        return constrain(v)

    v = constrain(np.ones((q,) * width))
    norm = np.linalg.norm(v)
    if norm == 0:
        return float("-inf")
    v /= norm
    lam_prev = 0.0
    for _ in range(max_iter):
        w = apply(v)
        lam = float(np.linalg.norm(w))
        if lam == 0:
            return float("-inf")
        v = w / lam
        if abs(lam - lam_prev) <= tol * max(1.0, lam):
            break
        lam_prev = lam
    return math.log(lam) / width


def has_three_vertex_path(g: Graph) -> bool:
    """Some vertex has two distinct neighbours (a loop counts), so a checkerboard
    with that vertex on one class leaves two free choices on the other."""
    return any(len(g.neighbors(v)) >= 2 for v in g.vertices)


@dataclass
class EntropyReport:
    graph: Graph
    box_counts: list[tuple[tuple[int, ...], int]]
    per_site_log: list[float]
    strip_estimates: list[tuple[int, float]]
    cylinder_estimates: list[tuple[int, float]]
    lower_bound_path2: float | None
    component_rule: dict | None
    notes: list[str] = field(default_factory=list)

    @property
    def estimate(self) -> float | None:
        """Best available estimate: the widest strip (the component maximum when disconnected)."""
        if self.component_rule is not None:
            return self.component_rule["max"]
        if self.strip_estimates:
            return self.strip_estimates[-1][1]
        return None

    def to_json(self) -> dict:
        return {
            "vertices": list(self.graph.vertices),
            "box_counts": [{"extents": list(e), "count": str(c)} for e, c in self.box_counts],
            "per_site_log": self.per_site_log,
            "strip_estimates": [{"width": w, "value": v} for w, v in self.strip_estimates],
            "cylinder_estimates": [{"width": w, "value": v} for w, v in self.cylinder_estimates],
            "lower_bound_path2": self.lower_bound_path2,
            "component_rule": self.component_rule,
            "estimate": self.estimate,
            "notes": self.notes,
        }


def _strips(g: Graph, max_width: int, max_tensor: int, notes: list[str]):
    free, cyl = [], []
    q = len(g)
    for w in range(1, max_width + 1):
        if q ** w > max_tensor:
            notes.append(f"strip width {w} skipped: {q}^{w} states exceed {max_tensor}")
            break
        free.append((w, strip_estimate(g, w)))
        if w >= 3:
            cyl.append((w, strip_estimate(g, w, cylinder=True)))
    return free, cyl


def entropy_report(g: Graph, max_width: int = 6, max_tensor: int = 1 << 22, max_states: int = 200_000) -> EntropyReport:
    """Square box counts, strip estimates, the path lower bound and the component rule."""
    notes: list[str] = []
    counts, logs = [], []
    for n in range(1, max_width + 1):
        try:
            c = count_box_patterns(g, (n, n), max_states=max_states)
        except ResourceLimitError as exc:
            notes.append(f"box {n}x{n} skipped: {exc}")
            break
        counts.append(((n, n), c))
        logs.append(math.log(c) / (n * n) if c > 0 else float("-inf"))
    free, cyl = _strips(g, max_width, max_tensor, notes)
    rule = None
    comps = analyze_graph(g).components
    if len(comps) > 1:
        per = []
        for comp in comps:
            sub = g.induced(comp)
            sub_free, _ = _strips(sub, max_width, max_tensor, [])
            per.append({"vertices": comp, "estimate": sub_free[-1][1] if sub_free else None})
        vals = [p["estimate"] for p in per if p["estimate"] is not None]
        rule = {"components": per, "max": max(vals) if vals else None}
    return EntropyReport(
        graph=g,
        box_counts=counts,
        per_site_log=logs,
        strip_estimates=free,
        cylinder_estimates=cyl,
        lower_bound_path2=LOG2_HALF if has_three_vertex_path(g) else None,
        component_rule=rule,
        notes=notes,
    )


def periodic_count(g: Graph, d: int = 2) -> int:
    """Valid patterns on the unit cube {0,1}^d; for d = 2 this counts homomorphisms from C_4."""
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    return count_patterns(g, Region.box((0,) * d, (2,) * d))


@dataclass
class Fillability:
    fillable: bool
    witness: tuple[str, ...] | None

    def __bool__(self) -> bool:
        return self.fillable


def single_site_fillable(g: Graph, d: int = 2) -> Fillability:
    """Whether every 2d-tuple of symbols has a common neighbour; a blocking tuple otherwise."""
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    masks = g.bitmasks()
    size = 2 * d
    for k in range(1, min(size, len(g)) + 1):
        for combo in combinations(range(len(g)), k):
            m = (1 << len(g)) - 1
            for i in combo:
                m &= masks[i]
            if not m:
                labels = [g.vertices[i] for i in combo]
                labels += [labels[-1]] * (size - k)
                return Fillability(False, tuple(labels))
    return Fillability(True, None)
