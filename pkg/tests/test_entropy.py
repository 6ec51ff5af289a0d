import itertools
import json
import math

import numpy as np
import pytest

from homshift.entropy import (
    count_box_patterns,
    entropy_report,
    has_three_vertex_path,
    periodic_count,
    single_site_fillable,
    strip_estimate,
)
from homshift.errors import InvalidInputError, ResourceLimitError
from homshift.graphcore import (
    complete_graph,
    cycle_graph,
    disjoint_union,
    edge_graph,
    hard_square_graph,
    looped_vertex,
    path_graph,
)
from homshift.pattern import Region, count_patterns

from conftest import brute_force_box_count, graphs_up_to

P3 = path_graph(3, ["a", "b", "c"])
HS = hard_square_graph()
K3 = complete_graph(3)
HARD_SQUARE_ENTROPY = math.log(1.5030480824753323)


def transfer_oracle(g, width, cylinder=False):
    """log(largest eigenvalue) / width of the explicit column transfer matrix."""
    q = len(g)
    adj = np.zeros((q, q), dtype=bool)
    for u, v in g.edge_list():
        adj[g.index(u), g.index(v)] = adj[g.index(v), g.index(u)] = True
    cols = []
    for col in itertools.product(range(q), repeat=width):
        ok = all(adj[col[i], col[i + 1]] for i in range(width - 1))
        if cylinder and width > 2:
            ok = ok and adj[col[-1], col[0]]
        if ok:
            cols.append(col)
    if not cols:
        return float("-inf")
    m = np.array([[all(adj[a, b] for a, b in zip(c1, c2)) for c2 in cols] for c1 in cols], dtype=float)
    lam = max(abs(np.linalg.eigvals(m)))
    return math.log(lam) / width


def test_path3_formula():
    for n in range(1, 4):
        side = 2 * n + 1
        cells = side * side
        assert count_box_patterns(P3, (side, side)) == 2 ** (cells // 2) + 2 ** (cells - cells // 2)


def test_hard_square_small():
    assert count_box_patterns(HS, (2, 2)) == 7
    assert count_box_patterns(HS, (1, 5)) == 13  # Fibonacci


@pytest.mark.parametrize("ext", [(2, 2), (2, 3), (3, 3), (1, 7), (2, 5)])
def test_box_counts_match_brute_force(ext):
    for g in graphs_up_to(4) + [HS, looped_vertex()]:
        assert count_box_patterns(g, ext) == brute_force_box_count(g, ext)


def test_three_dimensional_counts():
    for g in [P3, K3, HS]:
        assert count_box_patterns(g, (2, 2, 3)) == count_patterns(g, Region.box((0, 0, 0), (2, 2, 3)))


def test_transposition_invariance():
    for g in [K3, cycle_graph(5)]:
        assert count_box_patterns(g, (3, 5)) == count_box_patterns(g, (5, 3))


def test_resource_limit_reports_progress():
    with pytest.raises(ResourceLimitError) as exc:
        count_box_patterns(complete_graph(5), (12, 12), max_states=1000)
    assert exc.value.progress["sites_done"] > 0


def test_bad_extents():
    with pytest.raises(InvalidInputError):
        count_box_patterns(K3, (0, 3))


@pytest.mark.parametrize("g", [P3, HS, K3, cycle_graph(5)], ids=["p3", "hs", "k3", "c5"])
@pytest.mark.parametrize("width", [1, 2, 3, 4])
def test_strip_matches_transfer_matrix(g, width):
    assert strip_estimate(g, width) == pytest.approx(transfer_oracle(g, width), abs=1e-8)
    if width >= 3:
        expected = transfer_oracle(g, width, True)
        got = strip_estimate(g, width, cylinder=True)
        assert got == expected if math.isinf(expected) else got == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("g", [P3, HS, K3], ids=["p3", "hs", "k3"])
def test_strip_agrees_with_long_boxes(g):
    w, L = 6, 40
    box = math.log(count_box_patterns(g, (w, L))) / (w * L)
    assert abs(strip_estimate(g, w) - box) < 0.02


def test_hard_square_cylinder_close_to_known_value():
    assert strip_estimate(HS, 8, cylinder=True) == pytest.approx(HARD_SQUARE_ENTROPY, abs=2e-3)


def test_edge_and_path_entropy():
    assert strip_estimate(edge_graph(), 4) == pytest.approx(0.0, abs=1e-9)
    assert strip_estimate(P3, 6, cylinder=True) == pytest.approx(math.log(2) / 2, abs=1e-9)


def test_entropy_report():
    rep = entropy_report(P3, max_width=4)
    assert rep.box_counts[2] == ((3, 3), 48)
    assert rep.lower_bound_path2 == pytest.approx(math.log(2) / 2)
    assert rep.component_rule is None
    assert json.loads(json.dumps(rep.to_json()))["box_counts"][2]["count"] == "48"
    assert entropy_report(edge_graph(), max_width=3).lower_bound_path2 is None


def test_entropy_report_component_rule():
    g = disjoint_union(edge_graph(), HS)
    rep = entropy_report(g, max_width=4)
    comps = rep.component_rule["components"]
    assert len(comps) == 2
    assert rep.estimate == pytest.approx(max(c["estimate"] for c in comps))
    assert rep.estimate == pytest.approx(strip_estimate(HS, 4))


def test_report_skips_large_tensors():
    rep = entropy_report(complete_graph(5), max_width=6, max_tensor=5 ** 4)
    assert [w for w, _ in rep.strip_estimates] == [1, 2, 3, 4]
    assert any("width 5" in n for n in rep.notes)


def test_three_vertex_path():
    assert has_three_vertex_path(P3)
    assert not has_three_vertex_path(edge_graph())
    assert has_three_vertex_path(HS)
    assert not has_three_vertex_path(looped_vertex())


@pytest.mark.parametrize("g", graphs_up_to(5) + [HS], ids=lambda g: f"{len(g)}v{len(g.edges)}e")
def test_periodic_count_is_closed_four_walks(g):
    q = len(g)
    a = np.zeros((q, q), dtype=np.int64)
    for u, v in g.edge_list():
        a[g.index(u), g.index(v)] = a[g.index(v), g.index(u)] = 1
    assert periodic_count(g) == int(np.trace(np.linalg.matrix_power(a, 4)))


def test_periodic_count_values():
    assert periodic_count(K3) == 18
    assert periodic_count(edge_graph()) == 2
    assert periodic_count(K3, d=1) == 6


def fillable_oracle(g, d):
    return all(
        any(all(g.adjacent(v, u) for u in tup) for v in g.vertices)
        for tup in itertools.product(g.vertices, repeat=2 * d)
    )


def test_fillability_examples():
    assert single_site_fillable(complete_graph(5))
    res = single_site_fillable(complete_graph(4))
    assert not res and sorted(res.witness) == ["1", "2", "3", "4"]


@pytest.mark.parametrize("d", [1, 2])
def test_fillability_matches_oracle(d):
    for g in graphs_up_to(5) + [HS]:
        res = single_site_fillable(g, d)
        assert bool(res) == fillable_oracle(g, d)
        if not res:
            assert len(res.witness) == 2 * d
            assert not any(all(g.adjacent(v, u) for u in res.witness) for v in g.vertices)
