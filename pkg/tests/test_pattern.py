import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from homshift.errors import InvalidInputError, PreconditionError, UnsupportedRegionError
from homshift.graphcore import complete_graph, cycle_graph, edge_graph, hard_square_graph, path_graph, star_graph
from homshift.pattern import (
    Pattern,
    Region,
    count_patterns,
    enumerate_patterns,
    fill_array,
    is_globally_allowed,
    load_pattern,
    pattern_from_json,
    pattern_to_json,
    reflect_periodize,
    sample_pattern,
    validate_pattern,
)

from conftest import brute_force_box_count, graphs_up_to

E = edge_graph()
P3 = path_graph(3, ["a", "b", "c"])
HS = hard_square_graph()
K3 = complete_graph(3)


def test_checkerboard_valid():
    p = Pattern.from_rows(E, [["a", "b"], ["b", "a"]])
    assert validate_pattern(p) == []


def test_constant_on_edge_graph_has_four_violations():
    p = Pattern.from_rows(E, [["a", "a"], ["a", "a"]])
    assert len(validate_pattern(p)) == 4


def test_hard_square_all_zero_valid():
    assert validate_pattern(Pattern.from_rows(HS, [["0", "0"], ["0", "0"]])) == []


def test_unknown_label_rejected():
    with pytest.raises(InvalidInputError):
        Pattern.from_rows(E, [["a", "z"]])


def test_torus_wraps():
    p = Pattern.from_function(E, Region.torus((3,)), lambda s: "ab"[s[0] % 2])
    assert len(validate_pattern(p)) == 1  # sites 0 and 2 meet across the wrap


def test_torus_extent_one_is_self_adjacent():
    region = Region.torus((1, 2))
    assert (0, 0) in region.neighbors((0, 0))
    assert count_patterns(E, region) == 0
    assert count_patterns(HS, region) == 1  # every site sits on a loop, so only the looped vertex fits


def test_reflect_periodize_path():
    p = Pattern.from_rows(E, ["a", "b", "a"])
    out = reflect_periodize(p)
    assert out.region == Region.torus((4,))
    assert out.rows() == ["a", "b", "a", "b"]


def test_reflect_periodize_k3():
    p = Pattern.from_rows(K3, [["1", "2", "3"], ["2", "3", "1"], ["3", "1", "2"]], origin=(-1, -1))
    out = reflect_periodize(p)
    assert out.region.extents == (4, 4)
    assert validate_pattern(out) == []
    for s in p.region.sites():
        assert out[(s[0] + 1, s[1] + 1)] == p[s]
    assert out.image() == p.image()


def test_reflect_periodize_rejects_invalid():
    with pytest.raises(PreconditionError):
        reflect_periodize(Pattern.from_rows(E, [["a", "a"], ["b", "a"]]))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 2), d=st.integers(1, 2), gi=st.integers(0, 40))
def test_reflection_preserves_validity(seed, n, d, gi):
    graphs = [g for g in graphs_up_to(5) if g.edges]
    g = graphs[gi % len(graphs)]
    p = sample_pattern(g, Region.centered_box(n, d), random.Random(seed))
    out = reflect_periodize(p)
    assert validate_pattern(out) == []
    assert out.image() == p.image()
    assert out.region.extents == (4 * n,) * d


def test_global_allowedness():
    good = Pattern.from_rows(K3, [["1", "2", "3"], ["2", "3", "1"], ["3", "1", "2"]])
    assert is_globally_allowed(good)
    bad = Pattern.from_rows(K3, [["1", "1"], ["2", "3"]])
    assert not is_globally_allowed(bad)
    assert not is_globally_allowed(Pattern.from_rows(HS, [["1", "1"], ["1", "1"]]))


def test_global_allowedness_single_site():
    g = path_graph(1, ["v"])
    assert not is_globally_allowed(Pattern.from_rows(g, [["v"]]))
    assert is_globally_allowed(Pattern.from_rows(E, [["a"]]))


def test_global_allowedness_torus_unsupported():
    p = Pattern.from_function(E, Region.torus((2, 2)), lambda s: "ab"[sum(s) % 2])
    with pytest.raises(UnsupportedRegionError):
        is_globally_allowed(p)


def test_global_allowedness_diamond_slow_path():
    p = Pattern.from_function(K3, Region.diamond(1), lambda s: str((s[0] - s[1]) % 3 + 1))
    assert is_globally_allowed(p)
    cells = {(0, 0): "1", (1, 0): "2", (-1, 0): "3", (0, 1): "2", (0, -1): "3"}
    q = Pattern(K3, Region.diamond(1), cells)
    assert validate_pattern(q) == []
    # each corner outside the diamond sees at most two colours, so a third one is free
    assert is_globally_allowed(q)


@pytest.mark.parametrize("g", [E, P3, K3, HS, cycle_graph(5)], ids=["edge", "path3", "k3", "hs", "c5"])
def test_local_equals_global_on_small_boxes(g):
    # every valid 2x2 pattern extends to a valid 4x4 pattern around it
    inner = Region.box((1, 1), (2, 2))
    big = Region.box((0, 0), (4, 4))
    for p in enumerate_patterns(g, inner):
        assert is_globally_allowed(p)
        assert count_patterns(g, big, p) > 0


def test_enumerate_examples():
    pats = list(enumerate_patterns(E, Region.box((0, 0), (1, 2))))
    assert [p.rows() for p in pats] == [[["a", "b"]], [["b", "a"]]]
    assert count_patterns(P3, Region.box((0, 0), (3, 3))) == 48
    assert count_patterns(HS, Region.box((0, 0), (2, 2))) == 7


def test_count_matches_enumeration_and_brute_force():
    for g in graphs_up_to(4):
        for ext in [(2, 2), (2, 3), (3, 3)]:
            region = Region.box((0, 0), ext)
            n = count_patterns(g, region)
            assert n == sum(1 for _ in enumerate_patterns(g, region))
            assert n == brute_force_box_count(g, ext)


def test_fill_array_matches_backtracking():
    region = Region.box((0, 0), (3, 3))
    for g in [P3, K3, HS, star_graph()]:
        sites, arr = fill_array(g, region)
        rows = {tuple(r) for r in arr.tolist()}
        assert len(rows) == len(arr) == count_patterns(g, region)


def test_boundary_constraints():
    region = Region.box((0, 0), (2, 2))
    # outside boundary cells constrain their neighbours only
    boundary = Pattern(E, Region.from_sites([(-1, 0)]), {(-1, 0): "a"})
    pats = list(enumerate_patterns(E, region, boundary))
    assert len(pats) == 1 and pats[0][(0, 0)] == "b"
    # inside boundary cells are fixed
    fixed = Pattern(E, Region.from_sites([(1, 1)]), {(1, 1): "b"})
    assert [p[(1, 1)] for p in enumerate_patterns(E, region, fixed)] == ["b"]
    far = Pattern(E, Region.from_sites([(5, 5)]), {(5, 5): "a"})
    with pytest.raises(InvalidInputError):
        count_patterns(E, region, far)


def test_counts_symmetric_under_automorphism():
    # swapping a and c in the path is an automorphism; so is transposing the box
    region = Region.box((0, 0), (3, 4))
    base = count_patterns(P3, region, Pattern(P3, Region.from_sites([(0, 0)]), {(0, 0): "a"}))
    swapped = count_patterns(P3, region, Pattern(P3, Region.from_sites([(0, 0)]), {(0, 0): "c"}))
    assert base == swapped
    assert count_patterns(K3, Region.box((0, 0), (3, 4))) == count_patterns(K3, Region.box((0, 0), (4, 3)))


def test_diamond_region():
    region = Region.diamond(2)
    assert len(region) == 13
    assert all(abs(a) + abs(b) <= 2 for a, b in region.sites())
    assert len(region.boundary(1)) == 12


def test_sampler_is_valid_and_seeded():
    region = Region.box((0, 0), (6, 6))
    a = sample_pattern(cycle_graph(5), region, random.Random(5))
    b = sample_pattern(cycle_graph(5), region, random.Random(5))
    assert a == b and validate_pattern(a) == []


def test_json_round_trip(tmp_path):
    for p in [
        Pattern.from_rows(K3, [["1", "2", "3"], ["2", "3", "1"]], origin=(-1, 0)),
        Pattern.from_function(E, Region.torus((2, 2)), lambda s: "ab"[sum(s) % 2]),
        Pattern.from_function(K3, Region.diamond(1), lambda s: str((s[0] - s[1]) % 3 + 1)),
        Pattern(E, Region.from_sites([(0, 0), (3, 1)]), {(0, 0): "a", (3, 1): "b"}),
    ]:
        obj = json.loads(json.dumps(pattern_to_json(p)))
        assert pattern_from_json(obj) == p


def test_pattern_file_with_graph_path(tmp_path):
    (tmp_path / "g.json").write_text(json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"]]}))
    (tmp_path / "p.json").write_text(json.dumps({
        "graph": "g.json", "d": 2,
        "region": {"kind": "box", "origin": [-1, -1], "extents": [3, 3]},
        "cells": [["a", "b", "a"], ["b", "a", "b"], ["a", "b", "a"]],
    }))
    p = load_pattern(tmp_path / "p.json")
    assert p[(-1, -1)] == "a" and p[(0, -1)] == "b" and validate_pattern(p) == []


def test_malformed_pattern_json():
    with pytest.raises(InvalidInputError, match="cells"):
        pattern_from_json({"graph": {"vertices": ["a"]}, "region": {"kind": "box", "origin": [0], "extents": [2]}})
    with pytest.raises(InvalidInputError):
        pattern_from_json({"graph": {"vertices": ["a"]}, "region": {"kind": "box", "origin": [0], "extents": [2]},
                           "cells": ["a"]})
